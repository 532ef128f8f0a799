"""Block splitting strategies under batched random insertions."""

from ._core import (
    Error,
    IoError,
    OutOfRangeError,
    ParameterError,
    ParseError,
    __version__,
    analyze_csv,
    deferred_closed_form,
    deferred_even_outcome,
    even_split_outcome,
    expected_fullness,
    harmonic,
    predicted_fullness,
    principal_eigenvector,
    recommended_strategy,
    simulate,
    table_bound,
    transition_matrix,
    verify_quick,
)

__all__ = [
    "Error",
    "IoError",
    "OutOfRangeError",
    "ParameterError",
    "ParseError",
    "__version__",
    "analyze_csv",
    "deferred_closed_form",
    "deferred_even_outcome",
    "even_split_outcome",
    "expected_fullness",
    "harmonic",
    "predicted_fullness",
    "principal_eigenvector",
    "recommended_strategy",
    "simulate",
    "table_bound",
    "transition_matrix",
    "verify_quick",
]
