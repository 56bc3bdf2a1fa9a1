"""Exact arithmetic for the (l,k) products on the integers, the pattern families
they generate, and an exhaustive colouring search for monochromatic thresholds."""

from .lk_algebra import (
    Kind,
    LKParams,
    Region,
    RegionTag,
    iterated_star,
    parse_params,
    special_elements,
    star,
    symmetric_poly_eval,
    transform,
    validate_params,
)
from .polyring import Polynomial, parse_polynomial, format_polynomial
from .search import (
    ColoringCertificate,
    Generator,
    PatternFamilySpec,
    find_avoiding_coloring,
    min_ramsey_threshold,
    verify_certificate,
)

__version__ = "0.1.0"
