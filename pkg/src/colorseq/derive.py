"""Translatability, derivation enumeration, and policy-pinned canonical parsing.

A derivation witnesses how rule applications (plus implicit concatenation of
adjacent translatable parts) cover an input sequence; its yield is the output
color sequence.  Inputs can be ambiguous, so the engine separates "all
derivations" from "the canonical one": a ParsePolicy makes the canonical
choice deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import CapExceeded, NotTranslatable, UnknownWord
from .grammar import (
    INPUT_CAP,
    OUTPUT_CAP,
    FunctionRule,
    Grammar,
    Primitive,
    SlotKind,
)

Seq = tuple[str, ...]
Span = tuple[int, int]


@dataclass(frozen=True)
class Leaf:
    rule: Primitive
    span: Span


@dataclass(frozen=True)
class Apply:
    rule: FunctionRule
    children: tuple["Derivation", ...]
    span: Span


@dataclass(frozen=True)
class Concat:
    left: "Derivation"
    right: "Derivation"
    span: Span


Derivation = Union[Leaf, Apply, Concat]


def yield_of(d: Derivation) -> Seq:
    """Recursive yield: leaves give their color, applications expand the rhs."""
    if isinstance(d, Leaf):
        return (d.rule.color,)
    if isinstance(d, Apply):
        parts = [yield_of(c) for c in d.children]
        out: list[str] = []
        for i in d.rule.rhs:
            out.extend(parts[i - 1])
        return tuple(out)
    return yield_of(d.left) + yield_of(d.right)


@dataclass(frozen=True)
class ParsePolicy:
    """Deterministic disambiguation: same grammar and input, same derivation.

    ``scan`` orders full-span rule attempts by function-word occurrence;
    ``split`` orders concatenation split points when no rule spans.  The
    defaults are pinned by golden tests against every published target this
    package bundles; "shortest_prefix" is equivalent to preferring the longest
    translatable suffix.
    """

    scan: str = "leftmost"
    split: str = "shortest_prefix"
    enforce_caps: bool = True
    input_cap: int = INPUT_CAP
    output_cap: int = OUTPUT_CAP

    def __post_init__(self):
        if self.scan not in ("leftmost", "rightmost"):
            raise ValueError(f"unknown scan order {self.scan!r}")
        if self.split not in ("shortest_prefix", "longest_prefix"):
            raise ValueError(f"unknown split preference {self.split!r}")


DEFAULT_POLICY = ParsePolicy()


def _check_words(g: Grammar, s: Seq) -> None:
    for w in s:
        if w not in g.alphabet.words:
            raise UnknownWord(w)


class _Engine:
    """Per-call parser over one (grammar, sequence); memo keyed by span."""

    def __init__(self, g: Grammar, s: Seq, policy: ParsePolicy):
        self.g = g
        self.s = s
        self.policy = policy
        self.functions = g.function_map()
        self.primitives = g.primitive_map()
        self._canon: dict[Span, Derivation | None] = {}
        self._all: dict[Span, tuple[Derivation, ...]] = {}

    # -- shared span helpers -------------------------------------------------

    def _occurrences(self, span: Span) -> Iterator[int]:
        lo, hi = span
        positions = range(lo, hi) if self.policy.scan == "leftmost" else range(hi - 1, lo - 1, -1)
        for i in positions:
            if self.s[i] in self.functions:
                yield i

    def _rule_matches(self, span: Span, i: int) -> list[tuple[FunctionRule, tuple[Span, ...]]]:
        """Full-span matches of the function rule at absolute position ``i``.

        Unary rules are postfix: the word must close the span.  Binary rules
        are infix: both sides must be non-empty.  Slot spans in slot order.
        """
        lo, hi = span
        rule = self.functions[self.s[i]]
        if rule.arity == 1:
            if i != hi - 1 or i == lo:
                return []
            return [(rule, ((lo, i),))]
        if i == lo or i == hi - 1:
            return []
        return [(rule, ((lo, i), (i + 1, hi)))]

    def _splits(self, span: Span) -> Iterator[int]:
        lo, hi = span
        cuts = range(lo + 1, hi)
        if self.policy.split == "longest_prefix":
            cuts = reversed(cuts)
        yield from cuts

    def _slot_ok(self, kind: SlotKind, span: Span) -> bool:
        lo, hi = span
        if kind is SlotKind.TOKEN:
            return hi - lo == 1 and self.s[lo] in self.primitives
        return hi > lo and self.canonical(span) is not None

    # -- canonical parse -----------------------------------------------------

    def canonical(self, span: Span) -> Derivation | None:
        if span in self._canon:
            return self._canon[span]
        lo, hi = span
        self._canon[span] = None  # cycle guard; spans only shrink, so unused
        result: Derivation | None = None
        if hi - lo == 1:
            color = self.primitives.get(self.s[lo])
            if color is not None:
                result = Leaf(Primitive(self.s[lo], color), span)
        if result is None:
            for i in self._occurrences(span):
                for rule, slot_spans in self._rule_matches(span, i):
                    if all(self._slot_ok(k, sp) for k, sp in zip(rule.slots, slot_spans)):
                        children = tuple(self.canonical(sp) for sp in slot_spans)
                        result = Apply(rule, children, span)
                        break
                if result is not None:
                    break
        if result is None:
            for cut in self._splits(span):
                left = self.canonical((lo, cut))
                if left is None:
                    continue
                right = self.canonical((cut, hi))
                if right is not None:
                    result = Concat(left, right, span)
                    break
        self._canon[span] = result
        return result

    # -- exhaustive enumeration ----------------------------------------------

    def enumerate(self, span: Span) -> tuple[Derivation, ...]:
        if span in self._all:
            return self._all[span]
        lo, hi = span
        self._all[span] = ()
        found: list[Derivation] = []
        if hi - lo == 1:
            color = self.primitives.get(self.s[lo])
            if color is not None:
                found.append(Leaf(Primitive(self.s[lo], color), span))
        for i in self._occurrences(span):
            for rule, slot_spans in self._rule_matches(span, i):
                child_sets: list[tuple[Derivation, ...]] = []
                for kind, sp in zip(rule.slots, slot_spans):
                    if kind is SlotKind.TOKEN:
                        s_lo, s_hi = sp
                        if s_hi - s_lo == 1 and self.s[s_lo] in self.primitives:
                            child_sets.append(
                                (Leaf(Primitive(self.s[s_lo], self.primitives[self.s[s_lo]]), sp),))
                        else:
                            child_sets.append(())
                    else:
                        child_sets.append(self.enumerate(sp))
                if all(child_sets):
                    combos = [()]
                    for options in child_sets:
                        combos = [prefix + (opt,) for prefix in combos for opt in options]
                    for children in combos:
                        found.append(Apply(rule, children, span))
        for cut in range(lo + 1, hi):
            lefts = self.enumerate((lo, cut))
            if not lefts:
                continue
            rights = self.enumerate((cut, hi))
            for left in lefts:
                for right in rights:
                    found.append(Concat(left, right, span))
        self._all[span] = tuple(found)
        return self._all[span]


def _prepare(g: Grammar, s: Seq, policy: ParsePolicy, check_input_cap: bool) -> _Engine:
    _check_words(g, tuple(s))
    if check_input_cap and policy.enforce_caps and len(s) > policy.input_cap:
        raise CapExceeded(f"input of {len(s)} words exceeds cap {policy.input_cap}")
    return _Engine(g, tuple(s), policy)


def is_translatable(g: Grammar, s: Seq, policy: ParsePolicy = DEFAULT_POLICY) -> bool:
    """True iff at least one derivation of ``s`` exists under ``g``."""
    if len(s) == 0:
        return False
    engine = _prepare(g, s, policy, check_input_cap=False)
    return engine.canonical((0, len(s))) is not None


def canonical_derivation(g: Grammar, s: Seq, policy: ParsePolicy = DEFAULT_POLICY) -> Derivation:
    """The policy-selected derivation; raises when none exists."""
    if len(s) == 0:
        raise NotTranslatable("empty input")
    engine = _prepare(g, s, policy, check_input_cap=True)
    d = engine.canonical((0, len(s)))
    if d is None:
        raise NotTranslatable(f"no derivation for {' '.join(s)!r}")
    return d


def canonical_derive(g: Grammar, s: Seq, policy: ParsePolicy = DEFAULT_POLICY) -> Seq:
    """Yield of the canonical derivation; always one of the enumerated outputs."""
    out = yield_of(canonical_derivation(g, s, policy))
    if policy.enforce_caps and len(out) > policy.output_cap:
        raise CapExceeded(f"output of {len(out)} colors exceeds cap {policy.output_cap}")
    return out


def enumerate_derivations(
    g: Grammar, s: Seq, policy: ParsePolicy = DEFAULT_POLICY, caps: bool | None = None,
) -> tuple[tuple[Derivation, Seq], ...]:
    """Every derivation of ``s`` paired with its output.

    Distinct derivations may share an output; ``enumerate_outputs`` gives the
    deduplicated set.  With caps on, derivations whose yield exceeds the
    output cap are dropped (and over-cap inputs rejected).
    """
    if len(s) == 0:
        raise NotTranslatable("empty input")
    capped = policy.enforce_caps if caps is None else caps
    if capped and len(s) > policy.input_cap:
        raise CapExceeded(f"input of {len(s)} words exceeds cap {policy.input_cap}")
    engine = _prepare(g, s, policy, check_input_cap=False)
    pairs = tuple((d, yield_of(d)) for d in engine.enumerate((0, len(s))))
    if capped:
        pairs = tuple(p for p in pairs if len(p[1]) <= policy.output_cap)
    return pairs


def enumerate_outputs(
    g: Grammar, s: Seq, policy: ParsePolicy = DEFAULT_POLICY, caps: bool | None = None,
) -> frozenset[Seq]:
    return frozenset(out for _, out in enumerate_derivations(g, s, policy, caps))
