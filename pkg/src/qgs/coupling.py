"""Generalized point interactions (GPI) on the line.

A GPI joins two half-lines at a point.  Writing ``y-``, ``y-'`` for the
limits from the left and ``y+``, ``y+'`` for those from the right, three
parametrizations are supported:

* A-form ``(alpha, beta, gamma)``::

      y+' - y-' =  alpha/2 (y+ + y-) + gamma/2 (y+' + y-')
      y+  - y-  = -conj(gamma)/2 (y+ + y-) + beta/2 (y+' + y-')

* B-form ``(a, c, d)``::

      ( y+')   ( a        c ) (y+)
      (-y-') = ( conj(c)  d ) (y-)

* unitary form ``U = exp(i xi) [[u1, u2], [-conj(u2), conj(u1)]]`` with
  ``(U - I)(y+, y-) + i (U + I)(y+', -y-') = 0``.

The A-form is the common currency of the package.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .errors import DegenerateParametrization, SeparatingCoupling

#: absolute tolerance on the tested expression in degeneracy checks
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class GpiCouplingA:
    alpha: float
    beta: float
    gamma: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "gamma", complex(self.gamma))
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)
                and math.isfinite(self.gamma.real) and math.isfinite(self.gamma.imag)):
            raise ValueError("GPI parameters must be finite")

    @property
    def det_a(self) -> float:
        """Determinant of ``[[alpha, gamma], [-conj(gamma), beta]]``."""
        return self.alpha * self.beta + abs(self.gamma) ** 2

    def matrix(self) -> np.ndarray:
        g = self.gamma
        return np.array([[self.alpha, g], [-g.conjugate(), self.beta]], dtype=complex)

    def condition_matrices(self):
        """Return ``(A, B)`` with ``A (y+, y-) + B (y+', -y-') = 0``."""
        a, b, g = self.alpha, self.beta, self.gamma
        gc = g.conjugate()
        A = np.array([[-a / 2, -a / 2], [1 + gc / 2, -1 + gc / 2]], dtype=complex)
        B = np.array([[1 - g / 2, 1 + g / 2], [-b / 2, b / 2]], dtype=complex)
        return A, B

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta,
                "gamma": [self.gamma.real, self.gamma.imag]}

    @classmethod
    def from_json(cls, obj: dict) -> "GpiCouplingA":
        return cls(obj["alpha"], obj["beta"], _complex_from_json(obj.get("gamma", 0.0)))


FREE = GpiCouplingA(0.0, 0.0, 0j)


@dataclass(frozen=True)
class GpiCouplingB:
    a: float
    d: float
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "c", complex(self.c))

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.c], [self.c.conjugate(), self.d]], dtype=complex)

    def to_json(self) -> dict:
        return {"a": self.a, "d": self.d, "c": [self.c.real, self.c.imag]}


@dataclass(frozen=True)
class GpiCouplingU:
    xi: float
    u1: complex
    u2: complex

    def matrix(self) -> np.ndarray:
        u1, u2 = self.u1, self.u2
        return np.exp(1j * self.xi) * np.array(
            [[u1, u2], [-u2.conjugate(), u1.conjugate()]], dtype=complex)

    def to_json(self) -> dict:
        return {"xi": self.xi, "u1": [self.u1.real, self.u1.imag],
                "u2": [self.u2.real, self.u2.imag]}


class CouplingClass(enum.Enum):
    Generic = "Generic"
    Delta = "Delta"
    DeltaPrime = "DeltaPrime"
    Separating = "Separating"
    DirichletBoth = "DirichletBoth"
    NeumannBoth = "NeumannBoth"


def _complex_from_json(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(float(re), float(im))
    return complex(value)


def a_to_b(c: GpiCouplingA) -> GpiCouplingB:
    if c.beta == 0.0:
        raise DegenerateParametrization(
            "B-form needs beta != 0 (delta-type couplings have no B-form)")
    det = c.det_a
    g = c.gamma
    s = 1.0 / (4.0 * c.beta)
    return GpiCouplingB(
        a=s * (4 + det + 4 * g.real),
        d=s * (4 + det - 4 * g.real),
        c=s * complex(-4 + det, -4 * g.imag),
    )


def b_to_a(c: GpiCouplingB, tol: float = DEGENERACY_TOL) -> GpiCouplingA:
    denom = c.a + c.d - 2 * c.c.real
    if abs(denom) <= tol:
        raise DegenerateParametrization("a + d - 2 Re c vanishes")
    s = 4.0 / denom
    return GpiCouplingA(
        alpha=s * (c.a * c.d - abs(c.c) ** 2),
        beta=s,
        gamma=s * complex((c.a - c.d) / 2, -c.c.imag),
    )


def is_separating(c: GpiCouplingA, tol: float = DEGENERACY_TOL) -> bool:
    return abs(c.det_a - 4.0) <= tol and abs(c.gamma.imag) <= tol


def classify(c, tol: float = DEGENERACY_TOL) -> CouplingClass:
    # halfline-only kinds carry their own tag
    tag = getattr(c, "coupling_class", None)
    if tag is not None:
        return tag
    if is_separating(c, tol):
        return CouplingClass.Separating
    if abs(c.beta) <= tol and abs(c.gamma) <= tol:
        return CouplingClass.Delta
    if abs(c.alpha) <= tol and abs(c.gamma) <= tol:
        return CouplingClass.DeltaPrime
    return CouplingClass.Generic


def jump_denominator(c: GpiCouplingA) -> complex:
    return complex(4.0 - c.det_a, -4.0 * c.gamma.imag)


def jump_numerator(c: GpiCouplingA) -> np.ndarray:
    """Real matrix ``N`` with ``jump_matrix(c) = N / jump_denominator(c)``.

    ``det N = |jump_denominator(c)|**2``, so ``N / |D|`` is a real
    unimodular matrix differing from the jump matrix by a constant phase.
    """
    det = c.det_a
    g = c.gamma.real
    return np.array([[4 + det - 4 * g, 4 * c.beta],
                     [4 * c.alpha, 4 + det + 4 * g]], dtype=float)


def jump_matrix(c: GpiCouplingA, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Map ``(y-, y-')`` to ``(y+, y+')`` across the point interaction."""
    D = jump_denominator(c)
    if abs(D) <= tol:
        raise SeparatingCoupling(
            f"coupling {c} is separating (det A = 4, Im gamma = 0)")
    return jump_numerator(c) / D


def boundary_solutions(c: GpiCouplingA) -> np.ndarray:
    """Orthonormal basis (columns) of boundary quadruples ``(y+, y-, y+', -y-')``."""
    A, B = c.condition_matrices()
    return null_space(np.hstack([A, B]))


def unitary_residual(U: np.ndarray, c: GpiCouplingA) -> float:
    Q = boundary_solutions(c)
    Y, Yd = Q[:2], Q[2:]
    I = np.eye(2)
    return float(np.abs((U - I) @ Y + 1j * (U + I) @ Yd).max())


def _unitary_from_conditions(c: GpiCouplingA) -> GpiCouplingU:
    A, B = c.condition_matrices()
    U = -np.linalg.solve(A + 1j * B, A - 1j * B)
    xi = (np.angle(np.linalg.det(U)) / 2) % np.pi
    V = U * np.exp(-1j * xi)
    return GpiCouplingU(float(xi), complex(V[0, 0]), complex(V[0, 1]))


def a_to_unitary(c: GpiCouplingA, check_tol: float = 1e-10) -> GpiCouplingU:
    """Unitary (xi, u1, u2) form of an A-form coupling.

    ``u2`` carries the prefactor ``i`` (so that ``|u1|^2 + |u2|^2 = 1``
    holds identically); the result is verified against boundary data of
    the A-form and recomputed from the Cayley transform if that fails.
    """
    al, be, g = c.alpha, c.beta, c.gamma
    det = c.det_a
    S = math.sqrt(det ** 2 + 4 * al ** 2 + 4 * be ** 2 + 8 * abs(g) ** 2 + 16)
    u1 = complex(-2 * (al + be), 4 * g.real) / S
    u2 = 1j * complex(det - 4, -4 * g.imag) / S
    norm = math.sqrt(abs(u1) ** 2 + abs(u2) ** 2)
    if abs(norm - 1.0) > 1e-9:
        warnings.warn(f"unitary parameters had norm {norm!r} before normalization")
    u1, u2 = u1 / norm, u2 / norm
    xi = math.atan2(det + 4, 2 * (al - be))
    if xi < 0:
        # folding xi into [0, pi) flips exp(i xi); compensate in (u1, u2)
        xi += math.pi
        u1, u2 = -u1, -u2
    xi = min(xi, math.pi) % math.pi
    out = GpiCouplingU(xi, u1, u2)
    if unitary_residual(out.matrix(), c) > check_tol:
        warnings.warn("closed-form unitary parameters failed validation; "
                      "falling back to the Cayley transform")
        out = _unitary_from_conditions(c)
    return out
