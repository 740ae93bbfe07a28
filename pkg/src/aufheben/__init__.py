"""Levels of presheaf toposes over finite sites, computed from the site."""

from .errors import AufhebenError, CapExceeded, ValidationError
from .examples import chain, delta, fin, generate_example, graphic, poset, trees
from .fincat import (
    FinCategory,
    FullSubcategory,
    Verdict,
    build_category,
    classify_morphism,
    has_factorization_property,
    product,
    split_epi_mono_factor,
)
from .ideals import (
    MorphismIdeal,
    enumerate_closed_subcategories,
    ideal_of_subcategory,
    is_idempotent,
    is_mono_cartesian,
    subcategory_of_ideal,
)
from .levels import level_poset, map_on_top_of_ideal, on_top_ideal, successor, successor_chain

__version__ = "0.1.0"
