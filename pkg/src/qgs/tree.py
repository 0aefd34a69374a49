"""Radial rooted metric trees with generation-wise vertex couplings.

A vertex of generation ``k`` joins one incoming edge to ``b_k`` outgoing
edges.  The coupling acts on the radial combination of the outgoing edges
through an A-form triple ``(alpha_t, beta_t, gamma_t)`` (with
``(1/b) sum f_j`` and ``sum f_j'`` in place of ``y+`` and ``y+'``), and on
the orthogonal complement through a ``(b-1) x (b-1)`` unitary ``U``::

    (U - I) V Psi + i (U + I) V Psi' = 0

``V`` is a ``(b-1) x b`` matrix with orthonormal rows orthogonal to
``(1, ..., 1)``.  The root carries ``f' + tan(theta0/2) f = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .coupling import GpiCouplingA, _complex_from_json
from .errors import DimensionMismatch, NotUnitary, OnVertex

UNITARY_TOL = 1e-12


def canonical_v(b: int) -> np.ndarray:
    """Orthonormal difference basis: row j is ``(1,..,1,-j,0,..)/sqrt(j(j+1))``."""
    V = np.zeros((b - 1, b))
    for j in range(1, b):
        V[j - 1, :j] = 1.0
        V[j - 1, j] = -j
        V[j - 1] /= math.sqrt(j * (j + 1))
    return V


@dataclass(frozen=True, eq=False)
class TreeVertexCoupling:
    """Coupling shared by all vertices of one generation.

    ``U`` defaults to ``-I`` and ``V`` to :func:`canonical_v`.  ``separated``
    replaces the radial A-form part by ``"dirichlet"`` (all values vanish)
    or ``"neumann"`` (incoming and summed outgoing derivatives vanish).
    """

    b: int
    alpha_t: float = 0.0
    beta_t: float = 0.0
    gamma_t: complex = 0j
    U: Optional[np.ndarray] = None
    V: Optional[np.ndarray] = None
    separated: Optional[str] = None

    def __post_init__(self):
        b = int(self.b)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "alpha_t", float(self.alpha_t))
        object.__setattr__(self, "beta_t", float(self.beta_t))
        object.__setattr__(self, "gamma_t", complex(self.gamma_t))
        n = max(b - 1, 0)
        U = -np.eye(n, dtype=complex) if self.U is None else np.asarray(self.U, dtype=complex)
        V = canonical_v(b).astype(complex) if self.V is None else np.asarray(self.V, dtype=complex)
        if b >= 1 and U.size == 0:
            U = U.reshape(n, n)
        if b >= 1 and V.size == 0:
            V = V.reshape(n, b)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)
        if self.separated not in (None, "dirichlet", "neumann"):
            raise ValueError(f"unknown separated kind {self.separated!r}")

    @property
    def radial(self) -> GpiCouplingA:
        return GpiCouplingA(self.alpha_t, self.beta_t, self.gamma_t)

    @property
    def det_a(self) -> float:
        return self.alpha_t * self.beta_t + abs(self.gamma_t) ** 2

    def to_json(self) -> dict:
        out = {"b": self.b, "alpha_t": self.alpha_t, "beta_t": self.beta_t,
               "gamma_t": [self.gamma_t.real, self.gamma_t.imag],
               "U": _matrix_to_json(self.U), "V": _matrix_to_json(self.V)}
        if self.separated:
            out["separated"] = self.separated
        return out


@dataclass(frozen=True)
class Generation:
    t: float
    coupling: TreeVertexCoupling

    @property
    def b(self) -> int:
        return self.coupling.b


@dataclass(frozen=True)
class RadialTreeSpec:
    generations: tuple
    theta0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "generations", tuple(self.generations))
        object.__setattr__(self, "theta0", float(self.theta0))

    @property
    def times(self) -> list:
        return [g.t for g in self.generations]

    @property
    def branching(self) -> list:
        return [g.b for g in self.generations]

    def to_json(self) -> dict:
        gens = []
        for g in self.generations:
            d = g.coupling.to_json()
            gens.append({"t": g.t, **d})
        return {"theta0": self.theta0, "generations": gens}

    @classmethod
    def from_json(cls, obj: dict) -> "RadialTreeSpec":
        gens = []
        for g in obj["generations"]:
            b = int(g["b"])
            c = TreeVertexCoupling(
                b=b,
                alpha_t=g.get("alpha_t", 0.0),
                beta_t=g.get("beta_t", 0.0),
                gamma_t=_complex_from_json(g.get("gamma_t", 0.0)),
                U=_matrix_from_json(g["U"]) if g.get("U") is not None else None,
                V=_matrix_from_json(g["V"]) if g.get("V") is not None else None,
                separated=g.get("separated"),
            )
            gens.append(Generation(float(g["t"]), c))
        return cls(tuple(gens), float(obj.get("theta0", 0.0)))


def _matrix_to_json(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(M)] \
        if M.size else []


def _matrix_from_json(rows) -> np.ndarray:
    out = []
    for row in rows:
        out.append([_complex_from_json(z) for z in row])
    return np.array(out, dtype=complex)


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str):
        self.violations.append(msg)


def validate_coupling(c: TreeVertexCoupling, tol: float = UNITARY_TOL, where: str = "") -> list:
    out = []
    b = c.b
    if b < 1:
        return [f"{where}b must be >= 1 (got {b})"]
    n = b - 1
    if c.U.shape != (n, n):
        out.append(f"{where}U has shape {c.U.shape}, expected {(n, n)}")
    elif n and np.abs(c.U @ c.U.conj().T - np.eye(n)).max() > tol:
        out.append(f"{where}U not unitary")
    if c.V.shape != (n, b):
        out.append(f"{where}V has shape {c.V.shape}, expected {(n, b)}")
    elif n:
        if np.abs(c.V @ c.V.conj().T - np.eye(n)).max() > tol:
            out.append(f"{where}V rows not orthonormal")
        if np.abs(c.V.sum(axis=1)).max() > tol:
            out.append(f"{where}V row not ⊥ (1,…,1)")
    vals = [c.alpha_t, c.beta_t, c.gamma_t.real, c.gamma_t.imag]
    if not all(math.isfinite(v) for v in vals):
        out.append(f"{where}coupling parameters not finite")
    return out


def validate_tree(spec: RadialTreeSpec) -> ValidationReport:
    rep = ValidationReport()
    if not -math.pi / 2 < spec.theta0 <= math.pi / 2:
        rep.add(f"theta0 = {spec.theta0} outside (-pi/2, pi/2]")
    prev = 0.0
    for k, g in enumerate(spec.generations, start=1):
        if not (math.isfinite(g.t) and g.t > 0):
            rep.add(f"generation {k}: t must be positive")
        if g.t <= prev and k > 1:
            rep.add(f"generation {k}: t not strictly increasing")
        prev = g.t
        for msg in validate_coupling(g.coupling, where=f"generation {k}: "):
            rep.add(msg)
    return rep


@dataclass(frozen=True, eq=False)
class VertexMatrices:
    A: np.ndarray
    B: np.ndarray


def vertex_matrices(c: TreeVertexCoupling, b: Optional[int] = None) -> VertexMatrices:
    """Matrices with ``A (f-, Psi) + B (-f-', Psi') = 0`` at a tree vertex."""
    b = c.b if b is None else int(b)
    if b != c.b or c.U.shape != (b - 1, b - 1) or c.V.shape != (b - 1, b):
        raise DimensionMismatch(f"coupling data does not match branching number {b}")
    n = b + 1
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n), dtype=complex)
    al, be, g = c.alpha_t, c.beta_t, c.gamma_t
    gc = g.conjugate()
    if c.separated == "dirichlet":
        A[0, 0] = 1.0
        A[1, 1:] = 1.0 / b
    elif c.separated == "neumann":
        B[0, 0] = 1.0
        B[1, 1:] = 1.0
    else:
        A[0, 0] = -al / 2
        A[0, 1:] = -al / (2 * b)
        A[1, 0] = -(1 - gc / 2)
        A[1, 1:] = (1 + gc / 2) / b
        B[0, 0] = 1 + g / 2
        B[0, 1:] = 1 - g / 2
        B[1, 0] = be / 2
        B[1, 1:] = -be / 2
    I = np.eye(b - 1)
    A[2:, 1:] = (c.U - I) @ c.V
    B[2:, 1:] = 1j * (c.U + I) @ c.V
    return VertexMatrices(A, B)


@dataclass(frozen=True)
class CertificateReport:
    hermiticity_residual: float
    sigma_min: float
    passed: bool


def check_self_adjoint(m: VertexMatrices, herm_tol: float = 1e-12,
                       rank_tol: float = 1e-10) -> CertificateReport:
    AB = m.A @ m.B.conj().T
    resid = float(np.abs(AB - AB.conj().T).max())
    block = np.hstack([m.A, m.B])
    norms = np.linalg.norm(block, axis=1)
    norms[norms == 0] = 1.0
    sv = np.linalg.svd(block / norms[:, None], compute_uv=False)
    smin = float(sv[-1]) if sv.size else 0.0
    return CertificateReport(resid, smin, resid < herm_tol and smin > rank_tol)


def eigenphases(U: np.ndarray, tol: float = UNITARY_TOL):
    """Eigenphases of a unitary matrix.

    Returns ``(theta, W)`` with ``theta`` sorted ascending in ``[0, 2 pi)``
    and ``W`` unitary such that ``U = W^{-1} diag(exp(i theta)) W``.
    """
    U = np.asarray(U, dtype=complex)
    n = U.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    if np.abs(U @ U.conj().T - np.eye(n)).max() > max(tol, 1e-12):
        raise NotUnitary("matrix is not unitary")
    # complex Schur form of a normal matrix is diagonal
    T, Z = scipy.linalg.schur(U, output="complex")
    lam = np.diag(T)
    theta = np.mod(np.angle(lam), 2 * np.pi)
    theta[np.isclose(theta, 2 * np.pi, rtol=0, atol=1e-14)] = 0.0
    order = np.argsort(theta, kind="stable")
    theta = theta[order]
    W = Z[:, order].conj().T
    return theta, W


def branching_function(spec: RadialTreeSpec, t: float, tol: float = 1e-14) -> int:
    if t <= 0:
        raise ValueError("t must be positive")
    out = 1
    for g in spec.generations:
        if abs(t - g.t) <= tol:
            raise OnVertex(f"t = {t} coincides with a vertex")
        if g.t < t:
            out *= g.b
    return out


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary (QR of a complex Gaussian)."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def example_u(theta1: float, theta2: float, phi: float, r: float) -> np.ndarray:
    """Two-by-two unitary ``W^{-1} D W`` built from eigenphases and a rotation."""
    s = math.sqrt(1 - r * r)
    W = np.array([[r * np.exp(1j * phi), s * np.exp(-1j * phi)],
                  [s * np.exp(1j * phi), -r * np.exp(-1j * phi)]])
    D = np.diag([np.exp(1j * theta1), np.exp(1j * theta2)])
    return np.linalg.solve(W, D @ W)
