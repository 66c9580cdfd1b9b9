"""Voronoi tessellations of hyperbolic 3-space from perfect binary Hermitian forms
over imaginary quadratic fields."""

__version__ = "0.1.0"

from .qfield import AlgebraicNum, FieldContext, class_number, make_context  # noqa: E402
from .hermitian import (  # noqa: E402
    ColumnVector,
    FormSpaceVector,
    HermitianForm,
    UnimodularMatrix,
    evaluate,
    pull_back,
    rank_one,
    trace_pairing,
)
from .enumerate import MinimalData, minimal_data, vectors_below  # noqa: E402
from .voronoi import (  # noqa: E402
    PerfectForm,
    enumerate_classes,
    equivalence_witness,
    initial_perfect_form,
    neighbor,
    stabilizer,
)
from .polytope import build_polytope, classify, cusp_of, cusp_orbit_count  # noqa: E402

__all__ = [
    "AlgebraicNum",
    "FieldContext",
    "class_number",
    "make_context",
    "ColumnVector",
    "FormSpaceVector",
    "HermitianForm",
    "UnimodularMatrix",
    "evaluate",
    "pull_back",
    "rank_one",
    "trace_pairing",
    "MinimalData",
    "minimal_data",
    "vectors_below",
    "PerfectForm",
    "enumerate_classes",
    "equivalence_witness",
    "initial_perfect_form",
    "neighbor",
    "stabilizer",
    "build_polytope",
    "classify",
    "cusp_of",
    "cusp_orbit_count",
]
