"""Exact-arithmetic square-tiling toolkit.

Decides whether a rectangle can be tiled by squares, produces
impossibility certificates, validates user-supplied tilings, and
constructs square tilings for rational side ratios.
"""

from .errors import (
    AmbiguousComparison,
    CommensurableSides,
    DocumentError,
    GridInconsistent,
    InvalidTiling,
    NotInSpan,
    SqtileError,
    TableMismatch,
)
from .exactnum import (
    EQUAL,
    GREATER,
    LESS,
    SQRT2,
    Generator,
    GeneratorTable,
    Interval,
    LinExpr,
    Rational,
    Sqrt2Num,
    format_expr,
    lin_cmp,
    lin_combine,
    parse_expr,
    parse_rational,
    sqrt2_conj,
    sqrt2_expr_to_num,
)
from .basis import Basis, commensurability_ratio, coords_st, extract_basis
from .tiling import (
    Failure,
    Placement,
    RefinedGrid,
    Tiling,
    ValidationReport,
    is_square,
    refine,
    validate,
)
from .hamel import (
    Contradiction,
    GoodSquareAnalysis,
    QuadPoly,
    additivity_check,
    analyze_good_squares,
    x_area,
    x_area_nonneg_for_all_x,
    x_area_poly,
    y_area,
)
from .dehn import (
    Certificate,
    Refutation,
    RefutationKind,
    Verdict,
    decide,
    refute_square_tiling,
    verify_certificate,
)
from .construct import ContinuedFraction, continued_fraction, euclid_tiling
from .cli import (
    DEFAULT_ENCLOSURES,
    TilingDocument,
    build_tiling,
    document_from_tiling,
    parse_document,
    render_svg,
    run_command,
    serialize_document,
)

__version__ = "0.1.0"
