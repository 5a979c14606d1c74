"""Courrege and Gangolli operators, spherical transforms and spherical Levy processes on S^2 = SO(3)/SO(2)."""

__version__ = "0.1.0"

from .errors import (AngleTooLarge, DivergenceWarning, DomainError, FirstMomentViolation,
                     GangolliError, InfiniteActivity, InsufficientGrid, InvalidMeasure,
                     NotInSubgroup, NotInvariant, TooCloseToPole, TruncationTooCoarse)
from .geometry import (GroupElement, SpherePoint, ad_matrix, canonical_coordinates,
                       cartan_project, compose, exp_map, log_map, rot_x, rot_y, rot_z)
from .spectral import (ZonalFunction, gauss_legendre, laplace_eigenvalues, laplacian_direct,
                       laplacian_spectral, legendre_eval, spherical_mean, spherical_transform,
                       synthesis)
from .levy import (CosinePolynomial, LevyKernel, SphericalSymbol, ZonalLevyMeasure,
                   build_symbol_table, growth_bound_check, sugiura_zeta, symbol_eta,
                   validate_levy)
from .operators import (GangolliCoefficients, courrege_apply, gangolli_apply_direct,
                        gangolli_apply_spectral, pmp_check, schur_reduce, validate_invariance)
from .semigroup import (LevyProcessParams, PathEndpointSample, lk_verify, semigroup_apply,
                        simulate_path)

__all__ = [name for name in dir() if not name.startswith("_")]
