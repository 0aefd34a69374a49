"""Spectral computations for halfline problems with finitely many GPIs.

The potential is zero, so between points every solution of ``-y'' = z y``
is propagated exactly by :func:`interval_transfer`, and a GPI by its jump
matrix.  The Weyl m-function ``m_+ = f_+'/f_+`` is obtained by seeding
the decaying solution ``exp(ikt)`` beyond the last point and running the
propagation leftward.  :func:`mfunction_series` recomputes ``m_+(z, 0)``
from the resolvent of the point interactions and serves as an
independent oracle.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .coupling import GpiCouplingA, a_to_b, jump_denominator, jump_numerator
from .errors import (GridTooCoarse, NonMaximalDomain, SeparatingCoupling, SingularTB,
                     ZeroDetA)
from .reduction import (DirichletBoth, HalflineProblem, NeumannBoth, SpecialAlpha,
                        SpecialBeta, decompose, halfline_jump)
from .tree import RadialTreeSpec, vertex_matrices

#: switch to the cos-scaled interval propagator beyond this |Im k| * L
RICCATI_SWITCH = 30.0
DEFAULT_ETA = 1e-6
DIRICHLET = math.pi
NEUMANN = 0.0
REFINE_DEPTH = 2
REFINE_POINTS = 40


class _PointAtInfinity:
    """m-function value when the solution vanishes at the evaluation point."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "PointAtInfinity"


PointAtInfinity = _PointAtInfinity()


@dataclass(frozen=True)
class SpectralParameter:
    """Energy ``z`` with the branch ``k = sqrt(z)``, ``Im k >= 0``."""

    z: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))

    @property
    def k(self) -> complex:
        k = cmath.sqrt(self.z)
        if k.imag < 0 or (k.imag == 0 and k.real < 0):
            k = -k
        return k

    @property
    def kappa(self) -> complex:
        return -1j * self.k

    @classmethod
    def from_energy(cls, E: float, eta: float = DEFAULT_ETA) -> "SpectralParameter":
        return cls(complex(E, eta))

    @classmethod
    def from_kappa(cls, kappa: float) -> "SpectralParameter":
        return cls(complex(-kappa * kappa, 0.0))


def _as_sp(sp) -> SpectralParameter:
    return sp if isinstance(sp, SpectralParameter) else SpectralParameter(sp)


def _cos_sinc(k: complex, L: float):
    """``cos(kL)`` and ``sin(kL)/k`` with the ``k -> 0`` limit."""
    kl = k * L
    c = cmath.cos(kl)
    s = L if abs(kl) < 1e-12 else cmath.sin(kl) / k
    return c, s


def interval_transfer(L: float, sp) -> np.ndarray:
    """Free propagator on ``(y, y')`` over a length ``L``; determinant 1."""
    k = _as_sp(sp).k
    c, s = _cos_sinc(k, L)
    return np.array([[c, s], [-k * k * s, c]], dtype=complex)


def _interval_apply(vec: np.ndarray, k: complex, L: float, sign: int) -> np.ndarray:
    """Apply the free propagator over ``sign * L`` projectively."""
    if abs(k.imag) * L > RICCATI_SWITCH:
        # divide by cos(kL): tan(kL) stays bounded where cos overflows
        tn = cmath.tan(k * L)
        T = np.array([[1.0, sign * tn / k], [-sign * k * tn, 1.0]], dtype=complex)
    else:
        c, s = _cos_sinc(k, L)
        T = np.array([[c, sign * s], [-sign * k * k * s, c]], dtype=complex)
    out = T @ vec
    return out / np.linalg.norm(out)


def _inverse_jump(c) -> Optional[np.ndarray]:
    """Projective inverse of a jump matrix; ``None`` for splitting kinds."""
    if isinstance(c, GpiCouplingA):
        D = jump_denominator(c)
        if abs(D) <= 1e-12:
            raise SeparatingCoupling(f"coupling {c} is separating")
        N = jump_numerator(c)
        return np.array([[N[1, 1], -N[0, 1]], [-N[1, 0], N[0, 0]]], dtype=complex)
    if isinstance(c, (SpecialBeta, SpecialAlpha)):
        M = c.jump_matrix()
        return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=complex)
    return None


def _split_seed(c) -> np.ndarray:
    """Data at the left side of a splitting point."""
    if isinstance(c, DirichletBoth):
        return np.array([0.0, 1.0], dtype=complex)
    return np.array([1.0, 0.0], dtype=complex)


def _points_of(p) -> list:
    return list(p.points) if isinstance(p, HalflineProblem) else list(p)


def _ratio(vec: np.ndarray, tol: float = 1e-300):
    if abs(vec[0]) <= tol * max(abs(vec[1]), tol):
        return PointAtInfinity
    return complex(vec[1] / vec[0])


def decaying_data(points, sp, t: float) -> np.ndarray:
    """Normalized ``(f_+, f_+')`` at ``t`` for the solution decaying at ``+inf``."""
    sp = _as_sp(sp)
    k = sp.k
    pts = _points_of(points)
    for tp, _ in pts:
        if abs(tp - t) <= 1e-14 * max(1.0, abs(t)):
            raise NonMaximalDomain(f"t = {t} coincides with a coupling point")
    right = [(tp, c) for tp, c in pts if tp > t]
    vec = np.array([1.0, 1j * k], dtype=complex)
    vec /= np.linalg.norm(vec)
    pos = right[-1][0] if right else t
    for tp, c in reversed(right):
        vec = _interval_apply(vec, k, pos - tp, -1)
        inv = _inverse_jump(c)
        if inv is None:
            vec = _split_seed(c)
        else:
            vec = inv @ vec
            vec /= np.linalg.norm(vec)
        pos = tp
    return _interval_apply(vec, k, pos - t, -1)


def mfunction_plus(p, sp, t: Optional[float] = None):
    """``m_+(z, t) = f_+'(t) / f_+(t)``; ``t`` defaults to the problem start."""
    if t is None:
        t = p.start if isinstance(p, HalflineProblem) else 0.0
    return _ratio(decaying_data(p, sp, t))


def reflect_coupling(c):
    """Coupling seen after the reflection ``x -> -x``."""
    if isinstance(c, GpiCouplingA):
        return GpiCouplingA(c.alpha, c.beta, -c.gamma)
    return c


def mfunction_minus(points, sp, t: float):
    """``m_-(z, t) = -f_-'(t) / f_-(t)`` for a full-line point set, free at ``-inf``."""
    refl = [(-tp, reflect_coupling(c)) for tp, c in reversed(_points_of(points))]
    return mfunction_plus(refl, sp, -t)


def t_matrix(times: Sequence[float], sp) -> np.ndarray:
    """Block matrix of the point-interaction resolvent kernel, ``2N x 2N``."""
    k = _as_sp(sp).k
    n = len(times)
    T = np.zeros((2 * n, 2 * n), dtype=complex)
    for i, tn in enumerate(times):
        for j, tm in enumerate(times):
            e1 = cmath.exp(1j * k * abs(tn - tm))
            e2 = cmath.exp(1j * k * (tn + tm))
            s_mn = np.sign(tm - tn)
            s_nm = -s_mn
            T[2 * i, 2 * j] = (e1 - e2) / (2j * k)
            T[2 * i, 2 * j + 1] = 0.5 * (s_mn * e1 - e2)
            T[2 * i + 1, 2 * j] = 0.5 * (s_nm * e1 - e2)
            T[2 * i + 1, 2 * j + 1] = -0.5j * k * (e1 + e2)
    return T


def b_matrix(couplings: Sequence[GpiCouplingA], tol: float = 1e-12) -> np.ndarray:
    n = len(couplings)
    B = np.zeros((2 * n, 2 * n), dtype=complex)
    for i, c in enumerate(couplings):
        det = c.det_a
        if abs(det) <= tol:
            raise ZeroDetA(f"coupling {i + 1} has det A = 0")
        g = c.gamma
        B[2 * i:2 * i + 2, 2 * i:2 * i + 2] = np.array(
            [[-c.beta, -g], [-g.conjugate(), c.alpha]]) / det
    return B


def mfunction_series(points, sp, cond_max: float = 1e12) -> complex:
    """``m_+(z, 0)`` from the resolvent series of the point interactions."""
    sp = _as_sp(sp)
    k = sp.k
    pts = _points_of(points)
    if not pts:
        return 1j * k
    times = [t for t, _ in pts]
    M = t_matrix(times, sp) + b_matrix([c for _, c in pts])
    if np.linalg.cond(M) > cond_max:
        raise SingularTB("T(z) + B is numerically singular")
    X = np.linalg.inv(M)
    e = np.exp(1j * k * np.asarray(times))
    w = np.zeros(2 * len(times), dtype=complex)
    w[0::2] = e
    w[1::2] = 1j * k * e
    return complex(1j * k + w @ X @ w)


def left_limit_data(points, sp, index: int = 0) -> np.ndarray:
    """Normalized ``(f_+, f_+')`` at the left side of point ``index``."""
    sp = _as_sp(sp)
    pts = _points_of(points)
    t = pts[index][0]
    nxt = pts[index + 1][0] if index + 1 < len(pts) else t + 1.0
    mid = 0.5 * (t + nxt)
    vec = _interval_apply(decaying_data(pts, sp, mid), sp.k, mid - t, -1)
    inv = _inverse_jump(pts[index][1])
    if inv is None:
        return _split_seed(pts[index][1])
    vec = inv @ vec
    return vec / np.linalg.norm(vec)


def mfunction_excess(points, kappa: float) -> complex:
    """``m_+(-kappa**2, 0) + kappa`` without cancellation.

    Writes the decaying solution on ``(0, t1)`` as
    ``Q exp(-kappa (t - t1)) + P exp(kappa (t - t1))``.
    """
    pts = _points_of(points)
    if not pts:
        return 0j
    t1 = pts[0][0]
    y, yd = left_limit_data(pts, SpectralParameter.from_kappa(kappa), 0)
    P = (y + yd / kappa) / 2
    Q = (y - yd / kappa) / 2
    e = math.exp(-2 * kappa * t1)
    return complex(2 * kappa * e * P / (Q + P * e))


ASYMPTOTIC_CONVENTIONS = ("corrected", "printed")


def asymptotic_coefficients(c: GpiCouplingA, convention: str = "corrected") -> tuple:
    """``(sign, [c0, c1, ...])`` with ``m_+ + kappa ~ sign 2 kappa e^{-2 kappa t1} sum c_j / kappa**j``.

    For ``beta == 0`` the ``1/kappa**2`` coefficient is positive; the
    ``"printed"`` convention flips its sign, and the relative error then
    only decays like ``kappa**-2``.
    """
    if convention not in ASYMPTOTIC_CONVENTIONS:
        raise ValueError(f"unknown asymptotic convention {convention!r}")
    if c.beta != 0.0:
        B = a_to_b(c)
        a1, d1, c1 = B.a, B.d, abs(B.c)
        return -1.0, [1.0, -2 * d1, 2 * (c1 ** 2 + d1 ** 2),
                      -2 * (a1 * c1 ** 2 + 2 * c1 ** 2 * d1 + d1 ** 3)]
    g2 = abs(c.gamma) ** 2
    rg = c.gamma.real
    al = c.alpha
    w = 4 + g2 + 4 * rg
    c2 = 4 * al ** 2 * w / (4 + g2) ** 3
    if convention == "printed":
        c2 = -c2
    return 1.0, [4 * rg / (4 + g2), -2 * al * w / (4 + g2) ** 2, c2]


def asymptotic_excess(c: GpiCouplingA, t1: float, kappa: float,
                      convention: str = "corrected") -> float:
    """Truncated expansion of ``m_+(-kappa**2, 0) + kappa``; compare with :func:`mfunction_excess`."""
    sign, coef = asymptotic_coefficients(c, convention)
    series = sum(cj / kappa ** j for j, cj in enumerate(coef))
    return sign * 2 * kappa * math.exp(-2 * kappa * t1) * series


def mfunction_asymptotic(c: GpiCouplingA, t1: float, kappa: float,
                         convention: str = "corrected") -> float:
    """Truncated large-``kappa`` expansion of ``m_+(-kappa**2, 0)``."""
    return -kappa + asymptotic_excess(c, t1, kappa, convention)


# -- Weyl discs ---------------------------------------------------------------

@dataclass(frozen=True)
class WeylDisc:
    center: complex
    radius: float

    def contains(self, m: complex, tol: float = 1e-10) -> bool:
        return abs(m - self.center) <= self.radius + tol


def _wronskian(f, g) -> complex:
    return f[0] * g[1] - f[1] * g[0]


def forward_propagate(points, sp, start: float, end: float, vecs: np.ndarray) -> np.ndarray:
    """Propagate columns of ``vecs`` from ``start`` to ``end`` with exact matrices."""
    sp = _as_sp(sp)
    pos = start
    out = np.array(vecs, dtype=complex)
    for tp, c in _points_of(points):
        if tp <= start or tp >= end:
            continue
        out = interval_transfer(tp - pos, sp) @ out
        J = halfline_jump(c)
        if J is None:
            raise NonMaximalDomain("splitting coupling inside a propagation range")
        out = J @ out
        pos = tp
    return interval_transfer(end - pos, sp) @ out


def weyl_disc(p: HalflineProblem, sp, b: float) -> WeylDisc:
    """Disc of ``m_+(z, start)`` values compatible with a real Robin condition at ``b``."""
    sp = _as_sp(sp)
    if b <= p.start:
        raise ValueError("b must lie beyond the problem start")
    uv = forward_propagate(p.points, sp, p.start, b, np.eye(2, dtype=complex))
    u, v = uv[:, 0], uv[:, 1]
    w_vv = _wronskian(v, v.conj())
    center = -_wronskian(u, v.conj()) / w_vv
    radius = abs(_wronskian(u, v)) / abs(w_vv)
    return WeylDisc(complex(center), float(radius))


# -- truncated eigenvalues ----------------------------------------------------

def _real_interval(E: float, L: float) -> np.ndarray:
    if E > 0:
        k = math.sqrt(E)
        c, s = math.cos(k * L), (math.sin(k * L) / k if k * L > 1e-12 else L)
        return np.array([[c, s], [-E * s, c]])
    if E < 0:
        q = math.sqrt(-E)
        c, s = math.cosh(q * L), (math.sinh(q * L) / q if q * L > 1e-12 else L)
        return np.array([[c, s], [-E * s, c]])
    return np.array([[1.0, L], [0.0, 1.0]])


def _real_jump(c) -> np.ndarray:
    if isinstance(c, GpiCouplingA):
        return jump_numerator(c) / abs(jump_denominator(c))
    return c.jump_matrix().real


def _segments(p: HalflineProblem, cutoff_t: float, cutoff_theta: float) -> list:
    """Split at separating kinds into ``(start, theta, points, end, theta_end)``."""
    segs = []
    start, theta, pts = p.start, p.root_theta, []
    for t, c in p.points:
        if t >= cutoff_t:
            break
        if isinstance(c, (DirichletBoth, NeumannBoth)):
            th = DIRICHLET if isinstance(c, DirichletBoth) else NEUMANN
            segs.append((start, theta, pts, t, th))
            start, theta, pts = t, th, []
        else:
            pts.append((t, c))
    segs.append((start, theta, pts, cutoff_t, cutoff_theta))
    return segs


def _secular(E: float, start: float, theta: float, pts: list, end: float,
             theta_end: float) -> float:
    vec = np.array([math.cos(theta / 2), -math.sin(theta / 2)])
    pos = start
    for t, c in pts:
        vec = _real_interval(E, t - pos) @ vec
        vec = _real_jump(c) @ vec
        vec /= np.linalg.norm(vec)
        pos = t
    vec = _real_interval(E, end - pos) @ vec
    return math.sin(theta_end / 2) * vec[0] + math.cos(theta_end / 2) * vec[1]


def _bisect(f, a: float, b: float, fa: float, xtol: float) -> float:
    """Bisection on a bracketing panel down to ``xtol * max(1, |x|)``."""
    while b - a > xtol * max(1.0, abs(a)):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _bracket_roots(f, window, grid: int, xtol: float) -> list:
    E = np.linspace(window[0], window[1], grid + 1)
    vals = np.array([f(e) for e in E])
    roots = []
    for i in range(grid):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            if i > 0 or E[i] > window[0]:
                roots.append(float(E[i]))
            continue
        if a * b < 0:
            roots.append(_bisect(f, E[i], E[i + 1], a, xtol))
    # interior endpoints of the window are excluded (open window)
    roots = [r for r in roots if window[0] < r < window[1]]
    panel = (window[1] - window[0]) / grid
    if any(b - a < 2 * panel for a, b in zip(roots, roots[1:])):
        warnings.warn("adjacent roots closer than two grid panels", GridTooCoarse)
    return roots


def truncated_eigenvalues(p: HalflineProblem, cutoff_t: float,
                          cutoff_theta: float = DIRICHLET,
                          window=(0.0, 100.0), grid: int = 4000,
                          xtol: float = 1e-13) -> list:
    """Eigenvalues in ``window`` of ``p`` cut off at ``cutoff_t``.

    The cutoff condition is ``sin(theta/2) y + cos(theta/2) y' = 0``.
    Roots are bracketed by sign changes of the secular function on
    ``grid`` panels and refined to ``xtol``.
    """
    last = max([p.start] + [t for t, _ in p.points if t < cutoff_t])
    if cutoff_t <= last:
        raise ValueError("cutoff must lie beyond the start and the last point used")
    out = []
    for seg in _segments(p, cutoff_t, cutoff_theta):
        out.extend(_bracket_roots(lambda E, s=seg: _secular(E, *s), window, grid, xtol))
    return sorted(out)


def decomposed_eigenvalues(problems: Iterable[HalflineProblem], cutoff_t: float,
                           cutoff_theta: float = DIRICHLET, window=(0.0, 100.0),
                           grid: int = 4000) -> list:
    """Multiplicity-weighted union of the eigenvalues of several problems."""
    out = []
    for p in problems:
        ev = truncated_eigenvalues(p, cutoff_t, cutoff_theta, window, grid)
        out.extend(e for e in ev for _ in range(p.multiplicity))
    return sorted(out)


# -- direct tree assembly -----------------------------------------------------

@dataclass(frozen=True)
class _Edge:
    length: float
    parent: int            # incoming edge index at the edge start, -1 at the root
    generation: int        # generation of the vertex at the edge start (0: root)


def _tree_edges(spec: RadialTreeSpec, cutoff_t: float, N: int) -> list:
    times = [0.0] + [g.t for g in spec.generations[:N]] + [cutoff_t]
    edges = [_Edge(times[1] - times[0], -1, 0)]
    frontier = [0]
    for n in range(1, N + 1):
        b = spec.generations[n - 1].b
        L = times[n + 1] - times[n]
        new = []
        for parent in frontier:
            for _ in range(b):
                edges.append(_Edge(L, parent, n))
                new.append(len(edges) - 1)
        frontier = new
    return edges


class TreeSecular:
    """Secular matrix of a radial tree cut off at ``cutoff_t``.

    Unknowns are ``(A_e, B_e / w)`` per edge with ``f = A cos + B sin/k``
    in the local coordinate and ``w = sqrt(max(|E|, 1))``.
    """

    def __init__(self, spec: RadialTreeSpec, cutoff_t: float, cutoff_theta: float = DIRICHLET,
                 max_generation: Optional[int] = None):
        N = len(spec.generations) if max_generation is None else int(max_generation)
        if N and cutoff_t <= spec.generations[N - 1].t:
            raise ValueError("cutoff must lie beyond the last generation used")
        self.spec = spec
        self.N = N
        self.cutoff_theta = cutoff_theta
        self.edges = _tree_edges(spec, cutoff_t, N)
        self.vm = [vertex_matrices(g.coupling) for g in spec.generations[:N]]
        self.children = {}
        for i, e in enumerate(self.edges):
            if e.parent >= 0:
                self.children.setdefault(e.parent, []).append(i)

    @property
    def size(self) -> int:
        return 2 * len(self.edges)

    def matrix(self, E: float) -> np.ndarray:
        w = math.sqrt(max(abs(E), 1.0))
        n = self.size
        M = np.zeros((n, n), dtype=complex)
        row = 0
        th0 = self.spec.theta0
        M[row, 0] = math.sin(th0 / 2)
        M[row, 1] = math.cos(th0 / 2) * w
        row += 1
        for i, e in enumerate(self.edges):
            T = _real_interval(E, e.length)
            # end data (f, f') as rows acting on (A, B/w)
            end = T * np.array([1.0, w])
            kids = self.children.get(i)
            if kids is None:
                th = self.cutoff_theta
                M[row, 2 * i:2 * i + 2] = math.sin(th / 2) * end[0] + math.cos(th / 2) * end[1]
                row += 1
                continue
            gen = self.edges[kids[0]].generation
            vm = self.vm[gen - 1]
            nr = vm.A.shape[0]
            blk = M[row:row + nr]
            blk[:, 2 * i:2 * i + 2] += np.outer(vm.A[:, 0], end[0]) - np.outer(vm.B[:, 0], end[1])
            for j, kid in enumerate(kids, start=1):
                blk[:, 2 * kid] += vm.A[:, j]
                blk[:, 2 * kid + 1] += vm.B[:, j] * w
            row += nr
        assert row == n
        norms = np.linalg.norm(M, axis=1)
        norms[norms == 0] = 1.0
        return M / norms[:, None]

    def sigma(self, E: float) -> np.ndarray:
        return np.linalg.svd(self.matrix(E), compute_uv=False)

    def det(self, E: float) -> complex:
        return complex(np.linalg.det(self.matrix(E)))


def _golden_min(f, a: float, b: float, tol: float) -> float:
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (a + b) / 2


def tree_truncated_eigenvalues(spec: RadialTreeSpec, cutoff_t: float,
                               cutoff_theta: float = DIRICHLET, window=(0.0, 100.0),
                               grid: int = 4000, max_generation: Optional[int] = None,
                               accept_tol: float = 1e-8, mult_tol: float = 1e-6,
                               xtol: float = 1e-13) -> list:
    """Eigenvalues (with multiplicity) of the directly assembled tree operator.

    Simple and odd-order roots come from sign changes of the phase-aligned
    determinant; all roots, including even-order ones, from local minima of
    the smallest singular value.  Multiplicity is the number of singular
    values below ``mult_tol`` at the refined root.
    """
    ts = TreeSecular(spec, cutoff_t, cutoff_theta, max_generation)
    E = np.linspace(window[0], window[1], grid + 1)
    dets = np.array([ts.det(e) for e in E])
    phase = 0.5 * np.angle(np.sum(dets ** 2))
    rot = np.exp(-1j * phase)

    def real_det(e):
        return (rot * ts.det(e)).real

    def smin(e):
        return ts.sigma(e)[-1]

    cands = []

    def scan(E, rv, sv, depth):
        for i in range(len(E) - 1):
            if rv[i] * rv[i + 1] < 0:
                cands.append(_bisect(real_det, E[i], E[i + 1], rv[i], xtol))
        for i in range(1, len(E) - 1):
            low_s = sv[i] <= sv[i - 1] and sv[i] <= sv[i + 1]
            low_d = abs(rv[i]) <= abs(rv[i - 1]) and abs(rv[i]) <= abs(rv[i + 1])
            if low_s:
                cands.append(_golden_min(smin, E[i - 1], E[i + 1], xtol * max(1.0, abs(E[i]))))
            if (low_s or low_d) and depth < REFINE_DEPTH:
                # clustered roots can hide inside one cell; look again on a finer grid
                sub = np.linspace(E[i - 1], E[i + 1], REFINE_POINTS + 1)
                scan(sub, np.array([real_det(e) for e in sub]),
                     np.array([smin(e) for e in sub]), depth + 1)

    scan(E, (rot * dets).real, np.array([smin(e) for e in E]), 0)
    cands.sort()
    roots = []
    for r in cands:
        if not window[0] < r < window[1]:
            continue
        if roots and abs(r - roots[-1]) <= 1e-9 * max(1.0, abs(r)):
            continue
        sv = ts.sigma(r)
        if sv[-1] > accept_tol:
            continue
        roots.append(r)
    out = []
    for r in roots:
        sv = ts.sigma(r)
        out.extend([r] * int(np.sum(sv < mult_tol)))
    return out


def match_eigenvalues(a: Sequence[float], b: Sequence[float], tol: float = 1e-8):
    """Greedy nearest pairing of two sorted multisets.

    Returns ``(counts_equal, max_mismatch, unmatched)``.
    """
    a, b = sorted(a), sorted(b)
    used = [False] * len(b)
    worst = 0.0
    unmatched = []
    for x in a:
        best, bi = math.inf, -1
        for j, y in enumerate(b):
            if not used[j] and abs(x - y) < best:
                best, bi = abs(x - y), j
        if bi < 0 or best > tol:
            unmatched.append(x)
            if bi >= 0:
                worst = max(worst, best)
            continue
        used[bi] = True
        worst = max(worst, best)
    unmatched.extend(y for j, y in enumerate(b) if not used[j])
    return len(a) == len(b), worst, unmatched


def tree_vs_decomposition(spec: RadialTreeSpec, cutoff_t: float, window=(0.0, 100.0),
                          grid: int = 4000, cutoff_theta: float = DIRICHLET,
                          convention: str = "printed", max_generation: Optional[int] = None):
    """Eigenvalues of the tree and of its decomposition, plus the comparison."""
    direct = tree_truncated_eigenvalues(spec, cutoff_t, cutoff_theta, window, grid,
                                        max_generation)
    probs = decompose(spec, max_generation, convention=convention)
    halfline = decomposed_eigenvalues(probs, cutoff_t, cutoff_theta, window, grid)
    same, worst, unmatched = match_eigenvalues(direct, halfline)
    return {"direct": direct, "halfline": halfline, "counts_equal": same,
            "max_mismatch": worst, "unmatched": unmatched}
