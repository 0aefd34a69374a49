"""Numerical indicators for absolutely continuous spectrum.

Everything here is a finite-data heuristic: growth of transfer products,
the reflectionless defect ``|m_+ + conj(m_-)|`` near the real axis, a
distance between point-interaction Hamiltonians built from their coupling
measures, and a checker for the hypotheses of the sparse-tree criterion
for empty absolutely continuous spectrum.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .coupling import DEGENERACY_TOL, a_to_b
from .errors import InsufficientGenerations, RegimeMismatch, SeparatingCoupling
from .parallel import parallel_map
from .reduction import HalflineProblem, halfline_jump, reduction_denominator
from .spectral import (DEFAULT_ETA, PointAtInfinity, SpectralParameter, interval_transfer,
                       mfunction_minus, mfunction_plus)
from .tree import RadialTreeSpec

DEFAULT_GROWTH_BOUND = 10.0


# -- transfer growth ----------------------------------------------------------

def _scaled(T: np.ndarray, k: complex) -> np.ndarray:
    """``T`` in the basis ``(y, y'/k)``, where free propagation is a rotation."""
    S = np.array([1.0, 1.0 / k])
    return (T * S[:, None]) / S[None, :]


def partial_product_norms(points, E: float, start: float = 0.0) -> list:
    """Spectral norms of ``M_n ... M_1`` at energy ``E > 0``.

    ``M_n`` propagates over the gap before point ``n`` and through its
    coupling; norms are taken in the basis ``(y, y'/k)``.
    """
    sp = SpectralParameter(complex(E, 0.0))
    k = sp.k
    P = np.eye(2, dtype=complex)
    pos = start
    out = []
    for t, c in points:
        J = halfline_jump(c)
        if J is None:
            raise SeparatingCoupling(f"splitting coupling at t = {t}")
        P = _scaled(J @ interval_transfer(t - pos, sp), k) @ P
        out.append(float(np.linalg.norm(P, 2)))
        pos = t
    return out


def lyapunov_slope(times: Sequence[float], norms: Sequence[float]) -> float:
    """Least-squares slope of ``log norm`` against ``log t``."""
    if len(norms) < 2:
        return 0.0
    x = np.log(np.asarray(times, dtype=float))
    y = np.log(np.asarray(norms, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


@dataclass
class SpectralReport:
    """Per-energy indicators.  ``ac_candidate`` is a threshold heuristic."""

    grid: list
    growth: list
    lyapunov_slope: list
    defect: list
    defect_decreasing: list
    bound: float = DEFAULT_GROWTH_BOUND
    ac_candidate: list = field(default_factory=list)

    def __post_init__(self):
        if not self.ac_candidate:
            self.ac_candidate = [max(g, default=1.0) <= self.bound for g in self.growth]

    @property
    def max_growth(self) -> list:
        return [max(g, default=1.0) for g in self.growth]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["E", "defect", "max_growth", "lyapunov_slope", "ac_candidate"])
        for row in zip(self.grid, self.defect, self.max_growth, self.lyapunov_slope,
                       self.ac_candidate):
            E, d, g, s, a = row
            w.writerow([repr(float(E)), repr(float(d)), repr(float(g)), repr(float(s)),
                        "true" if a else "false"])
        return buf.getvalue()


def transfer_growth_scan(p: HalflineProblem, E_grid: Sequence[float],
                         bound: float = DEFAULT_GROWTH_BOUND, eta: float = DEFAULT_ETA,
                         with_defect: bool = True) -> SpectralReport:
    """Growth of partial transfer products across the points of ``p``."""
    pts = list(p.points)
    times = [t for t, _ in pts]
    shifted = [(t - p.start, c) for t, c in pts]

    def one(E):
        norms = partial_product_norms(pts, E, p.start)
        slope = lyapunov_slope(times, norms) if p.start >= 0 and times and times[0] > 0 else 0.0
        if with_defect:
            d = reflectionless_defect(True, shifted, E, eta)
            d_coarse = reflectionless_defect(True, shifted, E, 10 * eta)
            dec = d <= d_coarse
        else:
            d, dec = math.nan, True
        return norms, slope, d, dec

    rows = parallel_map(one, list(E_grid))
    return SpectralReport(
        grid=[float(E) for E in E_grid],
        growth=[r[0] for r in rows],
        lyapunov_slope=[r[1] for r in rows],
        defect=[r[2] for r in rows],
        defect_decreasing=[r[3] for r in rows],
        bound=bound,
    )


def reflectionless_defect(left_free: bool, points, E: float, eta: float = DEFAULT_ETA) -> float:
    """``|m_+(E + i eta, 0) + conj(m_-(E + i eta, 0))|``.

    Points at ``t > 0`` enter ``m_+``; points at ``t < 0`` enter ``m_-``
    unless ``left_free``.
    """
    if E <= 0 or eta <= 0:
        raise ValueError("E and eta must be positive")
    sp = SpectralParameter.from_energy(E, eta)
    pts = list(points)
    right = [(t, c) for t, c in pts if t > 0]
    left = [] if left_free else [(t, c) for t, c in pts if t < 0]
    mp = mfunction_plus(right, sp, 0.0)
    mm = 1j * sp.k if not left else mfunction_minus(left, sp, 0.0)
    if mp is PointAtInfinity or mm is PointAtInfinity:
        return math.inf
    return float(abs(mp + mm.conjugate()))


# -- distance between GPI Hamiltonians -------------------------------------------

@dataclass(frozen=True)
class GpiMeasureSet:
    """Atoms ``(t, weights)``; three weights when ``beta != 0``, two when ``beta == 0``."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(t), tuple(float(w) for w in ws)) for t, ws in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        ts = [t for t, _ in atoms]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("atom positions must be strictly increasing")
        sizes = {len(w) for _, w in atoms}
        if not sizes <= {2, 3} or len(sizes) > 1:
            raise RegimeMismatch("all atoms need 2 or all need 3 weights")

    @property
    def n_weights(self) -> Optional[int]:
        return len(self.atoms[0][1]) if self.atoms else None

    def shifted(self, s: float) -> "GpiMeasureSet":
        return GpiMeasureSet(tuple((t + s, w) for t, w in self.atoms))

    @classmethod
    def from_points(cls, points, tol: float = DEGENERACY_TOL) -> "GpiMeasureSet":
        atoms = []
        regimes = set()
        for t, c in points:
            if abs(c.beta) > tol:
                B = a_to_b(c)
                atoms.append((t, (B.a, B.d, abs(B.c))))
                regimes.add(3)
            else:
                s = abs(c.gamma) ** 2 + 4
                atoms.append((t, (c.gamma.real / s, c.alpha / s)))
                regimes.add(2)
        if len(regimes) > 1:
            raise RegimeMismatch("points mix beta != 0 and beta == 0 couplings")
        return cls(tuple(atoms))


def _zigzag(j: int) -> int:
    return (j + 1) // 2 if j % 2 else -(j // 2)


def hat_family(M: int) -> list:
    """First ``M`` test functions as ``(center, half_width)``.

    Index pairs ``(q, j)`` are walked along diagonals ``q + j = n``; the
    centre is ``p / 2**q`` with ``p`` running ``0, 1, -1, 2, -2, ...`` in
    ``j``, and the half-width is ``2**-q``.
    """
    out = []
    n = 0
    while len(out) < M:
        for q in range(n + 1):
            j = n - q
            out.append((_zigzag(j) / 2 ** q, 2.0 ** -q))
            if len(out) == M:
                break
        n += 1
    return out


def _hat(x: np.ndarray, center: float, half: float) -> np.ndarray:
    return np.clip(1.0 - np.abs(x - center) / half, 0.0, None)


def gpi_distance(h1: GpiMeasureSet, h2: GpiMeasureSet, M: int = 64) -> float:
    """Truncated distance ``sum_m 2**-m rho_m / (1 + rho_m)``."""
    if M < 1:
        raise ValueError("M must be >= 1")
    n1, n2 = h1.n_weights, h2.n_weights
    if n1 is not None and n2 is not None and n1 != n2:
        raise RegimeMismatch("measure sets belong to different regimes")
    nw = n1 or n2 or 2
    t1 = np.array([t for t, _ in h1.atoms])
    t2 = np.array([t for t, _ in h2.atoms])
    w1 = np.array([w for _, w in h1.atoms]).reshape(-1, nw)
    w2 = np.array([w for _, w in h2.atoms]).reshape(-1, nw)
    total = 0.0
    for m, (c, hw) in enumerate(hat_family(M), start=1):
        diff = _hat(t1, c, hw) @ w1 - _hat(t2, c, hw) @ w2
        rho = float(np.sum(np.abs(diff)))
        total += 2.0 ** -m * rho / (1.0 + rho)
    return total


# -- main theorem hypotheses --------------------------------------------------

def cond_tri(det: float, re_g: float, b: int) -> bool:
    sb = math.sqrt(b)
    return det * (sb - 1) + 4 * (1 - b) * re_g + 4 * (1 + sb) != 0


def cond_ctyri(det: float, re_g: float, b: int, K: float) -> bool:
    sb = math.sqrt(b)
    v = abs(4 - 2 * sb * (det - 4) + det + b * (4 + det - 4 * re_g) + 4 * re_g)
    return 1 / K < v < K


def cond_pet(det: float, re_g: float, b: int, K: float) -> bool:
    v = 4 * b * det + (1 - b) * ((4 + det + 4 * re_g) ** 2 - b * (4 + det - 4 * re_g) ** 2)
    return 1 / K < v < K


def cond_sest(det: float, g: complex, beta: float, b: int, K: float) -> bool:
    if beta == 0:
        return False
    return math.sqrt(b) / abs(beta) * math.hypot(det - 4, 4 * g.imag) > 1 / K


@dataclass
class MainTheoremReport:
    """Hypothesis check for the sparse-tree criterion; ``verdict`` is a prediction."""

    K: float
    N: int
    delta: float
    sparsity_proxy: bool
    spacing_positive: bool
    generations: list
    v_a: bool
    v_b: bool
    verdict: str
    failed: list

    def to_json(self) -> dict:
        return {"K": self.K, "N": self.N, "delta": self.delta,
                "sparsity_proxy": self.sparsity_proxy,
                "spacing_positive": self.spacing_positive,
                "generations": self.generations, "v_a": self.v_a, "v_b": self.v_b,
                "verdict": self.verdict, "failed": self.failed}


def check_main_theorem(spec: RadialTreeSpec, K: float = 100.0, N: int = 0,
                       delta: float = 0.0, sparsity_ratio: float = 10.0,
                       tol: float = DEGENERACY_TOL) -> MainTheoremReport:
    """Evaluate hypotheses (i)-(v) on generations ``n > N``.

    (i) is replaced by a finite-sample proxy: the gaps ``t_{n+1} - t_n``
    are strictly increasing and the largest exceeds ``sparsity_ratio``
    times the smallest.  (ii) asks for every gap to exceed ``delta``.
    """
    gens = spec.generations
    if len(gens) < N + 1:
        raise InsufficientGenerations(f"need at least {N + 1} generations, got {len(gens)}")
    times = [0.0] + [g.t for g in gens]
    gaps = [times[n + 1] - times[n] for n in range(N + 1, len(gens))]
    sparse = (len(gaps) >= 2 and all(b > a for a, b in zip(gaps, gaps[1:]))
              and max(gaps) > sparsity_ratio * min(gaps))
    all_gaps = [b - a for a, b in zip(times, times[1:])]
    spacing = bool(all_gaps) and min(all_gaps) > delta

    rows = []
    va_all, vb_beta0 = True, True
    ah_vals, bh_vals = [], []
    for n in range(N + 1, len(gens) + 1):
        g = gens[n - 1]
        c = g.coupling
        b = g.b
        det, gam, beta = c.det_a, c.gamma_t, c.beta_t
        tri = cond_tri(det, gam.real, b)
        den = reduction_denominator(c.alpha_t, beta, gam, b)
        iii = abs(gam.imag) > tol or (abs(det - 4) > tol and tri)
        ctyri = cond_ctyri(det, gam.real, b, K)
        pet = cond_pet(det, gam.real, b, K)
        va = b * abs(beta) > 1 / K and cond_sest(det, gam, beta, b, K)
        beta0 = abs(beta) <= tol
        va_all &= va
        vb_beta0 &= beta0
        if abs(den) > tol:
            ah_vals.append(16 * c.alpha_t / den)
            bh_vals.append(16 * b * beta / den)
        else:
            ah_vals.append(math.nan)
            bh_vals.append(math.nan)
        rows.append({"n": n, "tri": tri, "reduction_denominator_nonzero": abs(den) > tol,
                     "iii": iii, "ctyri": ctyri, "pet": pet, "iv": ctyri and pet,
                     "v_a": va, "beta_zero": beta0})

    def uniform(vals):
        v = np.asarray(vals)
        return bool(v.size) and (bool(np.all(v > 1 / K)) or bool(np.all(v < -1 / K)))

    vb = vb_beta0 and (uniform(ah_vals) or uniform(bh_vals))
    failed = []
    if not sparse:
        failed.append("i")
    if not spacing:
        failed.append("ii")
    if not all(r["iii"] for r in rows):
        failed.append("iii")
    if not all(r["iv"] for r in rows):
        failed.append("iv")
    if not (va_all or vb):
        failed.append("v")
    verdict = "EmptyAcPredicted" if not failed else "HypothesesFail"
    return MainTheoremReport(K, N, delta, sparse, spacing, rows, va_all, vb, verdict, failed)
