"""Schrödinger operators on radial trees with generalized point interactions."""

from .coupling import (FREE, CouplingClass, GpiCouplingA, GpiCouplingB, GpiCouplingU,
                       a_to_b, a_to_unitary, b_to_a, classify, jump_matrix)
from .errors import (DegenerateParametrization, DimensionMismatch, GridTooCoarse,
                     InsufficientGenerations, NonMaximalDomain, NotUnitary, OnVertex,
                     OutOfRange, QgsError, RegimeMismatch, SeparatingCoupling, SingularTB,
                     UnhandledDegenerate, ZeroDetA)
from .reduction import (DirichletBoth, HalflineProblem, NeumannBoth, SpecialAlpha,
                        SpecialBeta, decompose, multiplicity, reduce_vertex_coupling)
from .spectral import (PointAtInfinity, SpectralParameter, WeylDisc, asymptotic_excess,
                       interval_transfer,
                       mfunction_asymptotic, mfunction_minus, mfunction_plus,
                       mfunction_series, tree_truncated_eigenvalues, truncated_eigenvalues,
                       weyl_disc)
from .tree import (Generation, RadialTreeSpec, TreeVertexCoupling, VertexMatrices,
                   branching_function, canonical_v, check_self_adjoint, eigenphases,
                   validate_tree, vertex_matrices)
from .ac import (GpiMeasureSet, MainTheoremReport, SpectralReport, check_main_theorem,
                 gpi_distance, reflectionless_defect, transfer_growth_scan)

__version__ = "0.1.0"
