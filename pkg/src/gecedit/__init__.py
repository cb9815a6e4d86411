"""Toolkit for operation-oriented sentence correction.

Sentences are corrected by explicit edit operations -- Switch (reorder),
Delete, Insert, Modify -- rather than by rewriting. This package provides
the operation algebra, minimal-edit derivation from (source, target) pairs,
pointer/tag label codecs for the switch-tag-generate pipeline, span-level
evaluation metrics, corpus tooling, a CLI, and an annotation HTTP service.
"""

from .core import (
    CorrectionInstance,
    ErrorType,
    InsertItem,
    ModifyItem,
    Reference,
    Switch,
    Violation,
    apply_reference,
    op_count,
    validate_reference,
)
from .errors import (
    CycleOrOrphan,
    DegenerateMatrix,
    DimensionMismatch,
    EmptyInput,
    FillCountMismatch,
    GecEditError,
    InsertionTooLong,
    InsufficientSubmissions,
    InvalidPermutation,
    InvalidReference,
    LengthMismatch,
    NoCommonSubstring,
    NotAssigned,
    PreconditionViolated,
    SchemaError,
    TooManyReferences,
)
from .metrics import (
    CorpusReport,
    EditSpan,
    EvalRow,
    EvalScores,
    evaluate_corpus,
    evaluate_instance,
    extract_edits,
    f_beta_half,
    match_edits,
)
from .minedit import (
    CommonSubstringPair,
    Occurrence,
    derive_operations,
    edit_path,
    longest_common_substring_pair,
    normalize_reference,
    try_switch_derivation,
)
from .stg import (
    DEFAULT_T_MAX,
    MaskTemplate,
    PointerLabels,
    StgLabels,
    Tag,
    TagSequence,
    attention_scores,
    beam_decode_permutation,
    build_mask_template,
    decode_instance,
    encode_instance,
    encode_tags,
    fill_template,
    parse_tag,
    pointers_to_permutation,
    switch_to_pointers,
)

__version__ = "0.1.0"
