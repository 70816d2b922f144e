"""Scoring of repeated model outputs and the systematicity taxonomy.

Every sampled output gets exactly one label, assigned in priority order:
Correct, AltParse (a non-canonical derivation of the true grammar),
RuleSubstitution (canonical under a grammar differing from the truth in one
function rule), AltParseWithSubstitution, CapViolation, NonSystematic.
Exact-match scoring, no partial credit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from collections import Counter

from .derive import (
    Derivation,
    ParsePolicy,
    Seq,
    canonical_derive,
    enumerate_derivations,
)
from .episodes import Episode
from .errors import (
    CapExceeded,
    EpisodeParseError,
    NotTranslatable,
    QueryMismatch,
)
from .grammar import CombinationKey, Grammar, Primitive, Rule, combination_key, format_rule
from .induce import SearchBudget, DEFAULT_BUDGET, candidate_rules

LABEL_KINDS = (
    "correct",
    "alt_parse",
    "rule_substitution",
    "alt_parse_with_substitution",
    "cap_violation",
    "non_systematic",
)


@dataclass(frozen=True)
class RunRecord:
    """Repeated model outputs per query; sample counts are uniform."""

    episode_id: str
    samples_per_query: int
    responses: tuple[tuple[Seq, ...], ...]
    model: str | None = None

    def __post_init__(self):
        if self.samples_per_query < 1:
            raise ValueError("need at least one sample per query")
        for i, samples in enumerate(self.responses):
            if len(samples) != self.samples_per_query:
                raise ValueError(
                    f"query {i} has {len(samples)} samples, expected {self.samples_per_query}")


def write_run(r: RunRecord) -> str:
    doc: dict = {
        "episode": r.episode_id,
        "samples_per_query": r.samples_per_query,
        "responses": [[list(s) for s in samples] for samples in r.responses],
    }
    if r.model is not None:
        doc["model"] = r.model
    return json.dumps(doc, indent=2) + "\n"


def read_run(text: str) -> RunRecord:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EpisodeParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise EpisodeParseError("run file must hold a JSON object")
    unknown = set(doc) - {"episode", "samples_per_query", "responses", "model"}
    if unknown:
        raise EpisodeParseError(f"unknown run fields: {sorted(unknown)}")
    for required in ("episode", "samples_per_query", "responses"):
        if required not in doc:
            raise EpisodeParseError(f"missing field {required!r}")
    responses = tuple(
        tuple(tuple(str(t) for t in sample) for sample in samples)
        for samples in doc["responses"]
    )
    return RunRecord(str(doc["episode"]), int(doc["samples_per_query"]), responses,
                     doc.get("model"))


# ---------------------------------------------------------------------------
# Error labels


@dataclass(frozen=True)
class ErrorLabel:
    kind: str
    word: str | None = None
    replacement: Rule | None = None
    witness: Derivation | None = None
    budget_exhausted: bool = False

    def describe(self) -> str:
        if self.word is not None and self.replacement is not None:
            return f"{self.kind}({self.word} := {format_rule(self.replacement)})"
        return self.kind


def _uncapped(policy: ParsePolicy) -> ParsePolicy:
    return replace(policy, enforce_caps=False)


def classify_error(g: Grammar, query: Seq, out: Seq,
                   budget: SearchBudget = DEFAULT_BUDGET,
                   policy: ParsePolicy | None = None,
                   alt_parse_first: bool = True) -> ErrorLabel:
    """Label one sampled output for a translatable query.

    Substitutions replace exactly one function rule of the true grammar with
    any rule from the bounded family; only function words occurring in the
    query are tried, since others cannot change how it parses.  By default an
    output the true grammar can produce under another bracketing counts as
    the weaker deviation (AltParse before RuleSubstitution); pass
    ``alt_parse_first=False`` to rank substitutions above alternative parses.
    """
    policy = policy or ParsePolicy()
    free = _uncapped(policy)
    out = tuple(out)
    target = canonical_derive(g, query, free)
    if out == target:
        return ErrorLabel("correct")

    def find_alt_parse() -> ErrorLabel | None:
        for derivation, produced in enumerate_derivations(g, query, free, caps=False):
            if produced == out and produced != target:
                return ErrorLabel("alt_parse", witness=derivation)
        return None

    if alt_parse_first:
        label = find_alt_parse()
        if label is not None:
            return label

    words_in_query = [w for w in dict.fromkeys(query) if w in g.function_map()]
    base_colors = {p.color for p in g.primitives}
    needed = set(out)
    tried = 0
    exhausted = False

    def candidates(word: str):
        # A substituted grammar can only emit primitive colors, so candidates
        # whose color pool cannot cover the output are skipped unparsed.
        current = g.function_map()[word]
        for rule in candidate_rules(word, g.alphabet, budget.max_rhs_len):
            if rule == current:
                continue
            colors = base_colors | ({rule.color} if isinstance(rule, Primitive) else set())
            if needed <= colors:
                yield rule

    for word in words_in_query:
        for rule in candidates(word):
            tried += 1
            if tried > budget.max_hypotheses:
                exhausted = True
                break
            try:
                if canonical_derive(g.replace_rule(word, rule), query, free) == out:
                    return ErrorLabel("rule_substitution", word, rule)
            except (NotTranslatable, CapExceeded):
                continue
        if exhausted:
            break

    if not alt_parse_first:
        label = find_alt_parse()
        if label is not None:
            return label

    if not exhausted:
        for word in words_in_query:
            for rule in candidates(word):
                tried += 1
                if tried > budget.max_hypotheses:
                    exhausted = True
                    break
                swapped = g.replace_rule(word, rule)
                try:
                    derivations = enumerate_derivations(swapped, query, free, caps=False)
                except (NotTranslatable, CapExceeded):
                    continue
                for derivation, produced in derivations:
                    if produced == out:
                        return ErrorLabel("alt_parse_with_substitution", word, rule, derivation)
            if exhausted:
                break

    if len(out) > policy.output_cap:
        return ErrorLabel("cap_violation")
    return ErrorLabel("non_systematic", budget_exhausted=exhausted)


def classify_run(e: Episode, r: RunRecord,
                 budget: SearchBudget = DEFAULT_BUDGET,
                 policy: ParsePolicy | None = None,
                 alt_parse_first: bool = True) -> tuple[tuple[ErrorLabel, ...], ...]:
    """Labels for every sample of every query, aligned to the run record."""
    if e.grammar is None:
        raise ValueError("classification needs the episode's grammar")
    _check_alignment(e, r)
    labels = []
    for q, samples in zip(e.query, r.responses):
        cache: dict[Seq, ErrorLabel] = {}
        row = []
        for sample in samples:
            if sample not in cache:
                cache[sample] = classify_error(e.grammar, q.inp, sample, budget, policy,
                                               alt_parse_first)
            row.append(cache[sample])
        labels.append(tuple(row))
    return tuple(labels)


# ---------------------------------------------------------------------------
# Scores and consistency


@dataclass(frozen=True)
class QueryScore:
    inp: Seq
    target: Seq
    correct: int
    total: int

    @property
    def rate(self) -> float:
        return self.correct / self.total


@dataclass(frozen=True)
class ScoreReport:
    episode_id: str
    queries: tuple[QueryScore, ...]

    @property
    def correct(self) -> int:
        return sum(q.correct for q in self.queries)

    @property
    def total(self) -> int:
        return sum(q.total for q in self.queries)

    @property
    def rate(self) -> float:
        return self.correct / self.total


def _check_alignment(e: Episode, r: RunRecord) -> None:
    if len(r.responses) != len(e.query):
        raise QueryMismatch(
            f"run covers {len(r.responses)} queries, episode has {len(e.query)}")


def _query_target(e: Episode, i: int, policy: ParsePolicy) -> Seq:
    q = e.query[i]
    if q.target is not None:
        return q.target
    if e.grammar is None:
        raise QueryMismatch(f"query {i} has no target and the episode has no grammar")
    return canonical_derive(e.grammar, q.inp, policy)


def score_run(e: Episode, r: RunRecord, policy: ParsePolicy | None = None) -> ScoreReport:
    """Exact-match success per query and for the episode as a whole."""
    policy = policy or ParsePolicy()
    _check_alignment(e, r)
    scores = []
    for i, samples in enumerate(r.responses):
        target = _query_target(e, i, policy)
        hits = sum(1 for s in samples if s == target)
        scores.append(QueryScore(e.query[i].inp, target, hits, len(samples)))
    return ScoreReport(e.id, tuple(scores))


@dataclass(frozen=True)
class QueryConsistency:
    modal_share: float
    distinct_outputs: int
    non_systematic_rate: float | None = None


def consistency_metrics(r: RunRecord,
                        labels: tuple[tuple[ErrorLabel, ...], ...] | None = None,
                        ) -> tuple[QueryConsistency, ...]:
    """Modal-output share and distinct-output count per query; when labels are
    supplied, also the fraction of samples labelled non-systematic."""
    if labels is not None and len(labels) != len(r.responses):
        raise QueryMismatch("labels do not align with the run record")
    out = []
    for i, samples in enumerate(r.responses):
        counts = Counter(samples)
        modal = max(counts.values()) / len(samples)
        rate = None
        if labels is not None:
            rate = sum(1 for l in labels[i] if l.kind == "non_systematic") / len(samples)
        out.append(QueryConsistency(modal, len(counts), rate))
    return tuple(out)


# ---------------------------------------------------------------------------
# Combination overlap between episode pools


@dataclass(frozen=True)
class OverlapReport:
    overlap: int
    pool_size: int
    matched_keys: tuple[CombinationKey | None, ...]


def overlap_count(train: list[Grammar] | tuple[Grammar, ...],
                  val: list[Grammar] | tuple[Grammar, ...]) -> OverlapReport:
    """How many validation grammars combine three operations already present,
    as a combination, somewhere in the training pool."""
    train_keys = {combination_key(g) for g in train}
    matched: list[CombinationKey | None] = []
    for g in val:
        key = combination_key(g)
        matched.append(key if key in train_keys else None)
    k = sum(1 for m in matched if m is not None)
    return OverlapReport(k, len(matched), tuple(matched))
