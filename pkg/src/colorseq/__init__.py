"""Compositional sequence-to-sequence transduction episodes and their audit.

The package generates, interprets, and scores episodes in which pseudoword
sequences translate to color sequences under a hidden rule grammar: build or
sample a grammar, derive or enumerate outputs, induce grammars back from
support pairs, and classify a model's errors as systematic or not.
"""

from .derive import (
    Apply,
    Concat,
    DEFAULT_POLICY,
    Derivation,
    Leaf,
    ParsePolicy,
    canonical_derivation,
    canonical_derive,
    enumerate_derivations,
    enumerate_outputs,
    is_translatable,
    yield_of,
)
from .episodes import (
    Episode,
    GenConfig,
    QueryPair,
    SeedInfo,
    SupportPair,
    episode_problems,
    generate_episode,
    make_probe_queries,
    read_episode,
    sample_episode,
    sample_grammar,
    strip_targets,
    write_episode,
)
from .errors import (
    AdapterTimeout,
    AlphabetTooSmall,
    BudgetExhausted,
    CapExceeded,
    ColorseqError,
    ConsistencyError,
    EpisodeParseError,
    GenerationExhausted,
    NotTranslatable,
    ProtocolError,
    QueryMismatch,
    TemplateInapplicable,
    UnknownWord,
    WrongFunctionCount,
)
from .evaluate import (
    ErrorLabel,
    OverlapReport,
    RunRecord,
    ScoreReport,
    classify_error,
    classify_run,
    consistency_metrics,
    overlap_count,
    read_run,
    score_run,
    write_run,
)
from .fixtures import (
    DECODINGS,
    FIXTURE_IDS,
    REPORTED_RATES,
    fixture_episode,
    fixture_grammar,
    fixture_run,
    verify_fixtures,
)
from .grammar import (
    Alphabet,
    FunctionRule,
    Grammar,
    OperationSignature,
    Primitive,
    Rule,
    SlotKind,
    combination_key,
    format_grammar,
    format_rule,
    parse_grammar,
    parse_rule,
    signature_of,
    validate_grammar,
)
from .harness import AdapterSpec, SimulatedTransducer, run_model, simulate
from .induce import (
    Contradiction,
    Hypothesis,
    InductionResult,
    SearchBudget,
    candidate_rules,
    induce_grammars,
    is_identifying,
    refine,
)

__all__ = [name for name in dir() if not name.startswith("_")]
