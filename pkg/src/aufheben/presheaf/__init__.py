from .base import (
    FinPresheaf,
    PresheafMap,
    Subpresheaf,
    build_presheaf,
    coproduct,
    element_map,
    empty_presheaf,
    identity_map,
    quotient,
    random_presheaf,
    representable,
    representable_map,
    restrict,
    terminal_presheaf,
)
from .comonad import (
    element_on_top,
    element_on_top_oracle,
    has_skeletal_boundaries,
    i_generated_core,
    image_factor,
    is_minimal,
    pullback_failure,
)
from .lattice import (
    boundary_leq,
    bounded_depth_holds,
    enumerate_subpresheaves,
    heyting,
    heyting_dim,
    is_boolean_object,
    map_on_top,
    subpresheaf_closure,
)
from .sheaf import (
    coend_skeleton,
    enumerate_maps,
    is_separated,
    is_sheaf,
    plus_construction,
    sheafify,
)
