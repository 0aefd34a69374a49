"""Reduction of a radial tree to an orthogonal sum of halfline problems.

Each generation-``k`` vertex coupling acts on the radial sector as a GPI
on the halfline after rescaling ``y = sqrt(g0) * phi``.  Non-radial
sectors start at a vertex with a Robin condition given by an eigenphase
of that generation's ``U`` and inherit the reduced couplings further out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .coupling import DEGENERACY_TOL, CouplingClass, GpiCouplingA, jump_matrix
from .errors import OutOfRange, UnhandledDegenerate
from .tree import RadialTreeSpec, TreeVertexCoupling, eigenphases

#: eigenphases closer than this are treated as one sector
PHASE_MERGE_TOL = 1e-10

#: divisor in the special-branch factors; see :class:`SpecialBeta`
SPECIAL_DIVISORS = {"printed": 2.0, "substituted": 4.0}


@dataclass(frozen=True)
class DirichletBoth:
    """``y+ = y- = 0``: the halfline splits into two decoupled pieces."""

    coupling_class = CouplingClass.DirichletBoth
    kind = "DirichletBoth"

    def to_json(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class NeumannBoth:
    """``y+' = y-' = 0``."""

    coupling_class = CouplingClass.NeumannBoth
    kind = "NeumannBoth"

    def to_json(self) -> dict:
        return {"kind": self.kind}


def _check_convention(convention: str):
    if convention not in SPECIAL_DIVISORS:
        raise ValueError(f"unknown special-branch convention {convention!r}")


@dataclass(frozen=True)
class SpecialBeta:
    """``y+' = -y-'`` and ``y+ + y- = -factor * y-'``.

    ``factor = beta_t (sqrt(b) - 1)**2 / divisor``.  With
    ``convention="printed"`` the divisor is 2; direct substitution of the
    radial rescaling into the vertex conditions gives 4
    (``convention="substituted"``), which is the value consistent with the
    spectrum of the tree.
    """

    beta_t: float
    b: int
    convention: str = "printed"
    kind = "SpecialBeta"

    def __post_init__(self):
        _check_convention(self.convention)

    @property
    def factor(self) -> float:
        return self.beta_t * (math.sqrt(self.b) - 1) ** 2 / SPECIAL_DIVISORS[self.convention]

    def jump_matrix(self) -> np.ndarray:
        return np.array([[-1.0, -self.factor], [0.0, -1.0]], dtype=complex)

    def to_json(self) -> dict:
        return {"kind": self.kind, "beta_t": self.beta_t, "b": self.b,
                "convention": self.convention, "factor": self.factor}


@dataclass(frozen=True)
class SpecialAlpha:
    """``y+ = -y-`` and ``y+' + y-' = -factor * y-``.

    ``factor = alpha_t (b**-0.5 - 1)**2 / divisor``, conventions as in
    :class:`SpecialBeta`.
    """

    alpha_t: float
    b: int
    convention: str = "printed"
    kind = "SpecialAlpha"

    def __post_init__(self):
        _check_convention(self.convention)

    @property
    def factor(self) -> float:
        return self.alpha_t * (self.b ** -0.5 - 1) ** 2 / SPECIAL_DIVISORS[self.convention]

    def jump_matrix(self) -> np.ndarray:
        return np.array([[-1.0, 0.0], [-self.factor, -1.0]], dtype=complex)

    def to_json(self) -> dict:
        return {"kind": self.kind, "alpha_t": self.alpha_t, "b": self.b,
                "convention": self.convention, "factor": self.factor}


HalflineCoupling = Union[GpiCouplingA, DirichletBoth, NeumannBoth, SpecialBeta, SpecialAlpha]


def coupling_kind(c: HalflineCoupling) -> str:
    return "Gpi" if isinstance(c, GpiCouplingA) else c.kind


def halfline_jump(c: HalflineCoupling) -> Optional[np.ndarray]:
    """Jump matrix of a halfline coupling; ``None`` for the splitting kinds."""
    if isinstance(c, GpiCouplingA):
        return jump_matrix(c)
    if isinstance(c, (SpecialBeta, SpecialAlpha)):
        return c.jump_matrix()
    return None


def coupling_to_json(c: HalflineCoupling) -> dict:
    if isinstance(c, GpiCouplingA):
        return {"kind": "Gpi", **c.to_json()}
    return c.to_json()


def coupling_from_json(obj: dict) -> HalflineCoupling:
    kind = obj.get("kind", "Gpi")
    if kind == "Gpi":
        return GpiCouplingA.from_json(obj)
    if kind == "DirichletBoth":
        return DirichletBoth()
    if kind == "NeumannBoth":
        return NeumannBoth()
    conv = obj.get("convention", "printed")
    if kind == "SpecialBeta":
        return SpecialBeta(float(obj["beta_t"]), int(obj["b"]), conv)
    if kind == "SpecialAlpha":
        return SpecialAlpha(float(obj["alpha_t"]), int(obj["b"]), conv)
    raise ValueError(f"unknown halfline coupling kind {kind!r}")


def reduction_denominator(alpha_t: float, beta_t: float, gamma_t: complex, b: int) -> float:
    sb = math.sqrt(b)
    det = alpha_t * beta_t + abs(gamma_t) ** 2
    return 4 * (sb + 1) ** 2 + det * (sb - 1) ** 2 + 4 * (1 - b) * gamma_t.real


def reduce_vertex_coupling(c: TreeVertexCoupling, b: Optional[int] = None,
                           convention: str = "printed",
                           tol: float = DEGENERACY_TOL,
                           generation: Optional[int] = None) -> HalflineCoupling:
    """Halfline coupling seen by the radial sector at a vertex of branching ``b``."""
    b = c.b if b is None else int(b)
    if b < 1:
        raise ValueError("branching number must be >= 1")
    if c.separated == "dirichlet":
        return DirichletBoth()
    if c.separated == "neumann":
        return NeumannBoth()
    al, be, g = c.alpha_t, c.beta_t, c.gamma_t
    den = reduction_denominator(al, be, g, b)
    if abs(den) > tol:
        sb = math.sqrt(b)
        det = c.det_a
        num_g = complex((1 - b) * (4 + det) + 4 * (b + 1) * g.real, 8 * sb * g.imag)
        return GpiCouplingA(16 * al / den, 16 * b * be / den, 2 * num_g / den)
    sb = math.sqrt(b)
    g_special = 2 * (sb + 1) / (sb - 1) if b > 1 else math.inf
    on_branch = abs(g.imag) <= tol and abs(g.real - g_special) <= tol * max(1.0, g_special)
    if on_branch and abs(al) <= tol:
        # alpha_t = beta_t = 0 is the zero-factor limit of this branch
        return SpecialBeta(be, b, convention)
    if on_branch and abs(be) <= tol:
        return SpecialAlpha(al, b, convention)
    where = f" at generation {generation}" if generation is not None else ""
    raise UnhandledDegenerate(
        f"reduction denominator vanishes{where} outside the special branches "
        f"(alpha_t={al!r}, beta_t={be!r}, gamma_t={g!r}, b={b})", generation)


@dataclass(frozen=True)
class HalflineProblem:
    """One summand of the decomposition.

    ``root_theta`` encodes ``sin(theta/2) y + cos(theta/2) y' = 0`` at
    ``start`` (``theta = pi`` is Dirichlet, ``theta = 0`` Neumann).
    ``points`` is a tuple of ``(t, HalflineCoupling)``.  ``generation``
    is 0 for the radial problem; ``sectors`` lists the merged ``s`` indices.
    """

    start: float
    root_theta: float
    points: tuple = ()
    multiplicity: int = 1
    generation: int = 0
    sectors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((float(t), c) for t, c in self.points))
        object.__setattr__(self, "sectors", tuple(int(s) for s in self.sectors))
        ts = [t for t, _ in self.points]
        if any(t <= self.start for t in ts) or any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("points must be strictly increasing and beyond start")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")

    @property
    def label(self) -> str:
        if self.generation == 0:
            return "L0"
        return f"L{self.generation}," + "+".join(str(s) for s in self.sectors)

    def to_json(self) -> dict:
        return {"label": self.label, "generation": self.generation,
                "sectors": list(self.sectors), "start": self.start,
                "root_theta": self.root_theta, "multiplicity": self.multiplicity,
                "points": [{"t": t, "coupling": coupling_to_json(c)} for t, c in self.points]}

    @classmethod
    def from_json(cls, obj: dict) -> "HalflineProblem":
        pts = [(p["t"], coupling_from_json(p["coupling"])) for p in obj.get("points", [])]
        return cls(float(obj["start"]), float(obj["root_theta"]), tuple(pts),
                   int(obj.get("multiplicity", 1)), int(obj.get("generation", 0)),
                   tuple(obj.get("sectors", ())))


def multiplicity(spec: RadialTreeSpec, n: int) -> int:
    if not 1 <= n <= len(spec.generations):
        raise OutOfRange(f"generation {n} outside 1..{len(spec.generations)}")
    return int(np.prod([g.b for g in spec.generations[: n - 1]], dtype=np.int64))


def decompose(spec: RadialTreeSpec, max_generation: Optional[int] = None,
              truncation: str = "free", convention: str = "printed",
              merge: bool = True) -> list:
    """Halfline problems whose multiplicity-weighted sum is the tree operator.

    ``truncation="dirichlet"`` replaces generation ``max_generation + 1``
    (when present) by a Dirichlet point; otherwise later generations are
    dropped.  Output is ordered by ``(generation, sector)``.
    """
    ngen = len(spec.generations)
    N = ngen if max_generation is None else int(max_generation)
    if not 0 <= N <= ngen:
        raise OutOfRange(f"max_generation {N} outside 0..{ngen}")
    if truncation not in ("free", "dirichlet"):
        raise ValueError(f"unknown truncation {truncation!r}")
    reduced = []
    for k, g in enumerate(spec.generations[:N], start=1):
        reduced.append((g.t, reduce_vertex_coupling(g.coupling, convention=convention,
                                                    generation=k)))
    if truncation == "dirichlet" and N < ngen:
        reduced.append((spec.generations[N].t, DirichletBoth()))

    out = [HalflineProblem(0.0, spec.theta0, tuple(reduced), 1, 0, ())]
    for n in range(1, N + 1):
        g = spec.generations[n - 1]
        if g.b < 2:
            continue
        thetas, _ = eigenphases(g.coupling.U)
        base = multiplicity(spec, n)
        tail = tuple(reduced[n:])
        groups = []
        for s, th in enumerate(thetas, start=1):
            if merge and groups and _phase_close(groups[-1][0], th):
                groups[-1][1].append(s)
            else:
                groups.append((th, [s]))
        if merge and len(groups) > 1 and _phase_close(groups[0][0], groups[-1][0]):
            # phases near 0 and near 2 pi are the same condition
            th0, s0 = groups.pop()
            groups[0] = (groups[0][0], sorted(groups[0][1] + s0))
        for th, ss in groups:
            out.append(HalflineProblem(g.t, float(th), tail, base * len(ss), n, tuple(ss)))
    return out


def _phase_close(a: float, b: float) -> bool:
    d = abs(a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d) <= PHASE_MERGE_TOL


def decomposition_to_json(problems: list) -> list:
    return [p.to_json() for p in problems]
