"""Exact symbolic checks for infinitesimally equivariant bundles on a polydisc."""

from .atiyah import (
    AtiyahElement,
    LieMap,
    MatrixPoly,
    apply_liemap,
    atiyah_bracket,
    check_cocycle,
    check_higher_flatness,
    curvature,
    gauge_transform,
    symbol,
)
from .correspondence import (
    NamedExample,
    Representation,
    check_lemma21,
    check_order_bound,
    example_library,
    extract_rep,
    rep_to_liemap,
    validate_rep,
)
from .formal_core import (
    Poly,
    Scalar,
    TruncatedSeries,
    VectorField,
    euler_field,
    poly_arith,
    series_inverse,
    vf_bracket,
    weight_components,
)
from .linalg import Matrix
from .obstruction_p1 import CechP1Model, LaurentPoly, LocalLineData, obstruction, split_cocycle, transport
from .truncated_lie import Span, TruncatedLieAlgebra, abelianization, build_algebra, derived_series, span_ops

__version__ = "0.1.0"
