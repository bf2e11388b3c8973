"""hadtype: type and profile invariants of Hadamard matrices.

Bit-packed ±1 matrices with equivalence moves and classical constructions;
quadruple types, triple spectra, and profile fingerprints; the canonical
block form of a quadruple; constructive recognition of doubling (Sylvester)
matrices from a {0, t} type spectrum; and backtracking search for matrices
whose types avoid a forbidden set.
"""

from .analysis import (
    NotHadamardError,
    Profile,
    TripleSpectrum,
    distinct_quad_types,
    profile,
    quad_p,
    quad_type,
    row_hadamard_product,
    sigma,
    triple_spectrum,
    verify_completion_identity,
)
from .canonical import (
    QuadCanonicalForm,
    canonicalize_quad,
    check_five_row_equality_form,
    reference_block_rows,
)
from .catalog import (
    CatalogEntry,
    IngestResult,
    group_by_profile,
    ingest,
    read_jsonl,
    run_checks,
    write_jsonl,
)
from .matrix import (
    MAX_ORDER,
    BitMatrix,
    EquivalenceOp,
    ParseError,
    Transcript,
    apply_op,
    apply_ops,
    dephase,
    emit_matrix,
    is_hadamard,
    kronecker,
    negate_col,
    negate_row,
    parse_matrices,
    parse_matrix,
    paley_I,
    permute_cols,
    permute_rows,
    random_equivalence,
    swap_cols,
    swap_rows,
    sylvester,
)
from .recognition import (
    CompletionError,
    RecognitionResult,
    Verdict,
    reduce_to_sylvester,
    zero_type_completion,
)
from .search import SearchConfig, SearchOutcome, count_completions, search

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "CatalogEntry",
    "CompletionError",
    "EquivalenceOp",
    "IngestResult",
    "MAX_ORDER",
    "NotHadamardError",
    "ParseError",
    "Profile",
    "QuadCanonicalForm",
    "RecognitionResult",
    "SearchConfig",
    "SearchOutcome",
    "Transcript",
    "TripleSpectrum",
    "Verdict",
    "apply_op",
    "apply_ops",
    "canonicalize_quad",
    "check_five_row_equality_form",
    "count_completions",
    "dephase",
    "distinct_quad_types",
    "emit_matrix",
    "group_by_profile",
    "ingest",
    "is_hadamard",
    "kronecker",
    "negate_col",
    "negate_row",
    "paley_I",
    "parse_matrices",
    "parse_matrix",
    "permute_cols",
    "permute_rows",
    "profile",
    "quad_p",
    "quad_type",
    "random_equivalence",
    "read_jsonl",
    "reduce_to_sylvester",
    "reference_block_rows",
    "row_hadamard_product",
    "run_checks",
    "search",
    "sigma",
    "swap_cols",
    "swap_rows",
    "sylvester",
    "triple_spectrum",
    "verify_completion_identity",
    "write_jsonl",
    "zero_type_completion",
]
