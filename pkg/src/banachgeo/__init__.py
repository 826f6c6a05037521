"""Computational geometry of finite-dimensional Banach spaces.

Decide Birkhoff-James and approximate orthogonality, analyze the
facet-cone structure of polyhedral unit balls, and verify or falsify
approximate-orthogonality preservation by linear operators.
"""

from .backend import active_backend, set_backend, using_numba
from .cones import (
    conical_hull_membership,
    extreme_support_labels,
    facet_inradius,
    neighbors,
    region_properties_check,
)
from .errors import BanachGeoError
from .operators import (
    Operator,
    OpConfig,
    Verdict,
    cardinality_checks,
    consecutive_vertex_check,
    counterexample_operator,
    facet_image_map,
    is_scalar_isometry,
    min_preserving_eps_at,
    preserves_eps_at,
    preserves_eps_global,
    three_functional_independence,
    witness_search_nonpreservation,
)
from .orthogonality import (
    OrthoConfig,
    contains_hyperspace_witness,
    epsilon_x,
    epsilon_x_detail,
    eps_orthogonal_margin,
    hyperspace_search,
    hyperspace_threshold,
    is_bj_orthogonal,
    is_eps_orthogonal,
    is_eps_orthogonal_definitional,
    min_support_value,
    support_range,
)
from .render import RenderOptions, render_ball_svg
from .spaces import (
    Functional,
    LpSpace,
    PolyhedralSpace,
    SupportSet,
    build_polyhedral,
    norm,
    preset_space,
    semi_inner_product_p,
    smoothness_order,
    support_set,
    validate_space,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
