"""Correspondence-based dissimilarity measures on finite models."""

from .core import (
    ATOL,
    INFINITY,
    Correspondence,
    FiniteMetricSpace,
    FunctionalFamily,
    check_functional_properties,
    check_pseudo_distance_axioms,
    compose,
    enumerate_correspondences,
    inf_functional,
    invert,
    sample_correspondence,
    validate_correspondence,
)
from .errors import CorrdistError, TooLarge, ValidationError
from .frechet import (
    FRECHET,
    MonotoneCoupling,
    PolygonalCurve,
    discrete_frechet,
    enumerate_couplings,
    frechet_functional,
    optimal_coupling,
)
from .gromov_hausdorff import (
    GROMOV_HAUSDORFF,
    distortion,
    gh_diameter_lower_bound,
    gh_exact,
    gh_functional,
)
from .hausdorff import (
    HAUSDORFF,
    AmbientSubset,
    hausdorff_closed_form,
    hausdorff_functional,
    hausdorff_via_correspondences,
)
from .homeo import (
    PLHomeo,
    compose_pl,
    divergence_report,
    make_contraction,
    power,
    proof_walkthrough,
    sup_distance,
)
from .natural_pd import (
    NATURAL_PSEUDO_DISTANCE,
    Bijection,
    MeasuredSpace,
    npd_bruteforce,
    npd_exact,
    npd_functional,
)

__version__ = "0.1.0"
