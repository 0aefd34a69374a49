"""Built-in trees used by the CLI, the tests and the documentation."""

from __future__ import annotations

import math

import numpy as np

from .tree import Generation, RadialTreeSpec, TreeVertexCoupling, example_u

#: eigenphase parameters of the three-branch example vertex
B3_PARAMS = (math.pi / 3, math.pi / 5, 0.2, 0.6)


def example_gamma(b: int) -> float:
    """Radial coupling that reduces to the free halfline coupling."""
    sb = math.sqrt(b)
    return 2 * (sb - 1) / (sb + 1)


def fig1_tree() -> RadialTreeSpec:
    """Branching ``(3, 2)`` at ``t = (1, 2.3)`` with non-degenerate couplings."""
    U1 = example_u(*B3_PARAMS)
    g1 = TreeVertexCoupling(3, 0.7, -0.4, 0.3 + 0.2j, U=U1)
    g2 = TreeVertexCoupling(2, -0.5, 0.6, -0.25 + 0.1j, U=np.array([[np.exp(0.9j)]]))
    return RadialTreeSpec((Generation(1.0, g1), Generation(2.3, g2)), theta0=0.4)


def b3_example_tree(theta1: float = B3_PARAMS[0], theta2: float = B3_PARAMS[1],
                    phi: float = B3_PARAMS[2], r: float = B3_PARAMS[3]) -> RadialTreeSpec:
    """Single three-branch vertex at ``t = 1`` with ``U = W^-1 D W``."""
    U = example_u(theta1, theta2, phi, r)
    g1 = TreeVertexCoupling(3, 0.0, 0.0, 0j, U=U)
    return RadialTreeSpec((Generation(1.0, g1),), theta0=0.0)


def example_ac_tree(generations: int = 10, b: int = 4, theta0: float = 0.0) -> RadialTreeSpec:
    """Sparse tree ``t_n = 2**n`` whose radial couplings all reduce to free ones."""
    c = TreeVertexCoupling(b, 0.0, 0.0, example_gamma(b))
    return RadialTreeSpec(tuple(Generation(2.0 ** n, c) for n in range(1, generations + 1)),
                          theta0)


def sparse_delta_tree(generations: int = 12, b: int = 2, alpha_t: float = 1.0,
                      theta0: float = 0.0) -> RadialTreeSpec:
    """Sparse tree ``t_n = 2**n`` with delta-type radial couplings of strength ``alpha_t``."""
    c = TreeVertexCoupling(b, alpha_t, 0.0, 0j)
    return RadialTreeSpec(tuple(Generation(2.0 ** n, c) for n in range(1, generations + 1)),
                          theta0)


def equal_spacing_tree(generations: int = 10, b: int = 2, alpha_t: float = 1.0) -> RadialTreeSpec:
    c = TreeVertexCoupling(b, alpha_t, 0.0, 0j)
    return RadialTreeSpec(tuple(Generation(float(n), c) for n in range(1, generations + 1)))
