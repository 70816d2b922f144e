"""Search-based recovery of grammars consistent with a support set.

The search walks the bounded rule family word by word, pruning a candidate
as soon as some support pair whose words are all assigned stops reproducing.
Words that appear in single-token pairs collapse immediately, unary rules
have few candidates, and binary rules are enumerated by rhs length, so the
cheap constraints land first.  Parsing an input only ever consults rules for
words occurring in it, which is what makes pair-at-a-time pruning sound.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product

from .derive import ParsePolicy, Seq, canonical_derive
from .errors import BudgetExhausted, CapExceeded, NotTranslatable
from .grammar import (
    Alphabet,
    FunctionRule,
    Grammar,
    Primitive,
    Rule,
    SlotKind,
)

Pair = tuple[Seq, Seq]

_KINDS = (SlotKind.STRING, SlotKind.TOKEN)


@dataclass(frozen=True)
class SearchBudget:
    max_hypotheses: int = 500_000
    max_rhs_len: int = 8
    max_seconds: float | None = None  # advisory wall-clock bound

    def __post_init__(self):
        if self.max_hypotheses <= 0 or self.max_rhs_len <= 0:
            raise ValueError("budget bounds must be positive")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("budget bounds must be positive")


DEFAULT_BUDGET = SearchBudget()


def candidate_rules(word: str, alphabet: Alphabet, max_rhs_len: int = 8):
    """Every rule the bounded family allows for ``word``, cheapest shapes first."""
    for kind in _KINDS:
        for n in range(1, min(8, max_rhs_len) + 1):
            yield FunctionRule(word, (kind,), (1,) * n)
    for color in alphabet.colors:
        yield Primitive(word, color)
    for length in range(1, min(8, max_rhs_len) + 1):
        for rhs in product((1, 2), repeat=length):
            for left in _KINDS:
                for right in _KINDS:
                    yield FunctionRule(word, (left, right), rhs)


def _clearly_hopeless(rules: dict[str, Rule], pair: Pair) -> bool:
    """Sound O(n) rejection: every derivation leaf is a primitive-ruled input
    token, so a pair without one is unparseable and an output using colors
    outside the pair's primitive rules is underivable."""
    colors = set()
    for w in pair[0]:
        r = rules.get(w)
        if isinstance(r, Primitive):
            colors.add(r.color)
    if not colors:
        return True
    return not set(pair[1]) <= colors


def _grammar_of(alphabet: Alphabet, rules: dict[str, Rule]) -> Grammar:
    prims = tuple(sorted((r for r in rules.values() if isinstance(r, Primitive)),
                         key=lambda r: r.word))
    funcs = tuple(sorted((r for r in rules.values() if isinstance(r, FunctionRule)),
                         key=lambda r: r.word))
    return Grammar(alphabet, prims, funcs)


def _reproduces(rules: dict[str, Rule], alphabet: Alphabet, pair: Pair,
                policy: ParsePolicy) -> bool:
    try:
        return canonical_derive(_grammar_of(alphabet, rules), pair[0], policy) == pair[1]
    except (NotTranslatable, CapExceeded):
        return False


def _word_order(support: tuple[Pair, ...], alphabet: Alphabet) -> list[str]:
    """Assignment order: singleton-pair words, then by first appearance, then
    words with no evidence at all."""
    singles = [p[0][0] for p in support if len(p[0]) == 1]
    seen: dict[str, None] = dict.fromkeys(singles)
    for inp, _ in support:
        for w in inp:
            seen.setdefault(w, None)
    for w in alphabet.words:
        seen.setdefault(w, None)
    return list(seen)


@dataclass(frozen=True)
class InductionResult:
    grammars: tuple[Grammar, ...]
    complete: bool
    expansions: int


def induce_grammars(support: list[Pair] | tuple[Pair, ...], alphabet: Alphabet,
                    budget: SearchBudget = DEFAULT_BUDGET,
                    policy: ParsePolicy | None = None) -> InductionResult:
    """Every grammar in the bounded family whose canonical derivations
    reproduce all support pairs; ``complete`` is False when the budget ran out
    and the result is only a prefix of the full consistent set."""
    if not support:
        raise ValueError("support must be non-empty")
    policy = policy or ParsePolicy()
    support = tuple((tuple(i), tuple(o)) for i, o in support)
    for inp, _ in support:
        for w in inp:
            if w not in alphabet.words:
                raise ValueError(f"support word {w!r} not in alphabet")
    order = _word_order(support, alphabet)
    deadline = None if budget.max_seconds is None else time.monotonic() + budget.max_seconds
    results: list[Grammar] = []
    expansions = 0
    complete = True

    pair_level: list[list[Pair]] = [[] for _ in order]
    position = {w: i for i, w in enumerate(order)}
    for pair in support:
        level = max(position[w] for w in pair[0])
        pair_level[level].append(pair)

    domains = {w: tuple(candidate_rules(w, alphabet, budget.max_rhs_len)) for w in order}

    def check(assigned: dict[str, Rule], pairs: list[Pair]) -> bool:
        nonlocal expansions, complete
        for pair in pairs:
            if _clearly_hopeless(assigned, pair):
                return False
            expansions += 1
            if expansions > budget.max_hypotheses or (
                    deadline is not None and time.monotonic() > deadline):
                complete = False
                return False
            if not _reproduces(assigned, alphabet, pair, policy):
                return False
        return True

    def walk(level: int, assigned: dict[str, Rule]) -> None:
        nonlocal expansions, complete
        if level == len(order):
            expansions += 1
            if expansions > budget.max_hypotheses:
                complete = False
                return
            results.append(_grammar_of(alphabet, assigned))
            return
        word = order[level]
        pairs = pair_level[level]
        for rule in domains[word]:
            if not complete:
                return
            assigned[word] = rule
            if check(assigned, pairs):
                walk(level + 1, assigned)
        del assigned[word]

    walk(0, {})
    return InductionResult(tuple(results), complete, expansions)


# ---------------------------------------------------------------------------
# Hypothesis refinement (the iterate / validate / correct loop)


@dataclass(frozen=True)
class Contradiction:
    """A support pair no completion of the hypothesis can reproduce, with the
    minimal set of already-fixed rules that re-derives the mismatch."""

    pair: Pair
    conflicting: tuple[str, ...]


@dataclass(frozen=True)
class Hypothesis:
    """Per-word candidate sets plus which pairs fixed which words.

    ``candidates`` maps each word to the rules still in play (``None`` means
    the full family, not yet enumerated).  The per-word view overapproximates
    the jointly consistent grammar set, so refinement only ever shrinks it.
    """

    alphabet: Alphabet
    budget: SearchBudget = DEFAULT_BUDGET
    candidates: dict[str, tuple[Rule, ...] | None] = field(default_factory=dict)
    checked: tuple[Pair, ...] = ()
    provenance: dict[str, Pair] = field(default_factory=dict)

    def options(self, word: str) -> tuple[Rule, ...]:
        existing = self.candidates.get(word)
        if existing is not None:
            return existing
        return tuple(candidate_rules(word, self.alphabet, self.budget.max_rhs_len))

    def assigned(self, word: str) -> Rule | None:
        opts = self.candidates.get(word)
        if opts is not None and len(opts) == 1:
            return opts[0]
        return None


def refine(h: Hypothesis, pair: Pair,
           policy: ParsePolicy | None = None) -> Hypothesis | Contradiction:
    """Narrow the hypothesis so ``pair`` is reproduced, or report the minimal
    fixed-rule subset that already rules it out.  Idempotent on satisfied
    pairs, and monotone: candidate sets never grow."""
    policy = policy or ParsePolicy()
    inp, out = tuple(pair[0]), tuple(pair[1])
    for w in inp:
        if w not in h.alphabet.words:
            raise ValueError(f"word {w!r} not in alphabet")
    words = list(dict.fromkeys(inp))
    option_lists = [h.options(w) for w in words]
    survivors: list[tuple[Rule, ...]] = []
    tried = 0
    for combo in product(*option_lists):
        rules = dict(zip(words, combo))
        if _clearly_hopeless(rules, (inp, out)):
            continue
        tried += 1
        if tried > h.budget.max_hypotheses:
            raise BudgetExhausted(f"refine tried {tried} combinations")
        if _reproduces(rules, h.alphabet, (inp, out), policy):
            survivors.append(combo)
    if not survivors:
        return Contradiction((inp, out), _minimal_conflict(h, words, (inp, out), policy))
    narrowed = dict(h.candidates)
    provenance = dict(h.provenance)
    for i, w in enumerate(words):
        kept = tuple(dict.fromkeys(combo[i] for combo in survivors))
        narrowed[w] = kept
        if len(kept) == 1 and w not in provenance:
            provenance[w] = (inp, out)
    return Hypothesis(h.alphabet, h.budget, narrowed, h.checked + ((inp, out),), provenance)


def _minimal_conflict(h: Hypothesis, words: list[str], pair: Pair,
                      policy: ParsePolicy) -> tuple[str, ...]:
    """Smallest set of single-candidate rules that re-derives the mismatch.

    A subset counts as the conflict when, with just those words pinned to
    their assigned rules and every other word of the pair released to the
    whole family, the pair still cannot be reproduced.  Subsets are tried
    smallest first, outermost (rightmost in the input) words first.
    """
    from itertools import combinations

    position = {w: i for i, w in enumerate(pair[0])}
    fixed = sorted((w for w in words if h.assigned(w) is not None),
                   key=lambda w: -position[w])
    full = {w: tuple(candidate_rules(w, h.alphabet, h.budget.max_rhs_len)) for w in words}
    spent = 0

    def refutes(subset: tuple[str, ...]) -> bool:
        nonlocal spent
        option_lists = [(h.assigned(w),) if w in subset else full[w] for w in words]
        for combo in product(*option_lists):
            rules = dict(zip(words, combo))
            if _clearly_hopeless(rules, pair):
                continue
            spent += 1
            if spent > h.budget.max_hypotheses:
                raise BudgetExhausted("conflict minimization budget spent")
            if _reproduces(rules, h.alphabet, pair, policy):
                return False
        return True

    try:
        for size in range(1, len(fixed) + 1):
            for subset in combinations(fixed, size):
                if refutes(subset):
                    return subset
    except BudgetExhausted:
        pass
    return tuple(fixed)


def is_identifying(support: list[Pair] | tuple[Pair, ...], g: Grammar,
                   budget: SearchBudget = DEFAULT_BUDGET,
                   policy: ParsePolicy | None = None) -> bool:
    """True iff the support pins down ``g`` as the single consistent grammar
    in the bounded family."""
    policy = policy or ParsePolicy()
    for inp, out in support:
        if canonical_derive(g, tuple(inp), policy) != tuple(out):
            raise ValueError(f"grammar does not reproduce support pair {inp!r}")
    result = induce_grammars(support, g.alphabet, budget, policy)
    if not result.complete:
        raise BudgetExhausted("induction budget too small to settle identifiability")
    if len(result.grammars) != 1:
        return False
    return _normalize(result.grammars[0]) == _normalize(g)


def _normalize(g: Grammar) -> tuple:
    return (
        tuple(sorted((p.word, p.color) for p in g.primitives)),
        tuple(sorted((f.word, f.slots, f.rhs) for f in g.functions)),
    )
