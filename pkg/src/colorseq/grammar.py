"""Alphabets, rules, grammars, validation, and label-free rule signatures.

A grammar maps pseudoword sequences to color sequences through three rule
shapes: primitive rules (word -> color), unary postfix rules (one argument
slot followed by the function word, rewritten to an n-fold repetition of the
argument), and binary infix rules (argument slots on both sides of the
function word, rewritten to an arbitrary slot pattern).  Slots either bind a
single token or a whole translatable substring.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .errors import EpisodeParseError, WrongFunctionCount

MAX_REPETITION = 8
MAX_BINARY_RHS = 8
INPUT_CAP = 10
OUTPUT_CAP = 8

DEFAULT_WORDS = ("dax", "wif", "lug", "zup", "fep", "blicket", "kiki", "tufa")
DEFAULT_COLORS = ("RED", "GREEN", "BLUE", "YELLOW", "PURPLE", "PINK")


class SlotKind(enum.Enum):
    """What a rule argument may bind: one token, or a translatable string."""

    TOKEN = "token"
    STRING = "string"


@dataclass(frozen=True)
class Alphabet:
    """Input pseudowords and output colors; the two sets must be disjoint."""

    words: tuple[str, ...] = DEFAULT_WORDS
    colors: tuple[str, ...] = DEFAULT_COLORS

    def __post_init__(self):
        if not self.words or not self.colors:
            raise ValueError("alphabet sets must be non-empty")
        if len(set(self.words)) != len(self.words):
            raise ValueError("duplicate input words")
        if len(set(self.colors)) != len(self.colors):
            raise ValueError("duplicate colors")
        if set(self.words) & set(self.colors):
            raise ValueError("word and color sets must be disjoint")


@dataclass(frozen=True)
class Primitive:
    """Direct word -> color mapping."""

    word: str
    color: str


@dataclass(frozen=True)
class FunctionRule:
    """A unary (postfix) or binary (infix) rewrite labelled by a function word.

    ``slots`` lists the argument kinds in left-hand-side order; ``rhs`` is the
    1-based slot index sequence the arguments are rearranged into.
    """

    word: str
    slots: tuple[SlotKind, ...]
    rhs: tuple[int, ...]

    @property
    def arity(self) -> int:
        return len(self.slots)


Rule = Primitive | FunctionRule


@dataclass(frozen=True)
class Grammar:
    alphabet: Alphabet
    primitives: tuple[Primitive, ...]
    functions: tuple[FunctionRule, ...]

    def primitive_map(self) -> dict[str, str]:
        return {p.word: p.color for p in self.primitives}

    def function_map(self) -> dict[str, FunctionRule]:
        return {f.word: f for f in self.functions}

    def rule_words(self) -> tuple[str, ...]:
        return tuple(p.word for p in self.primitives) + tuple(f.word for f in self.functions)

    def replace_rule(self, word: str, rule: Rule) -> "Grammar":
        """New grammar with ``word``'s rule swapped for ``rule`` (same word)."""
        prims = [p for p in self.primitives if p.word != word]
        funcs = [f for f in self.functions if f.word != word]
        if isinstance(rule, Primitive):
            prims.append(rule)
        else:
            funcs.append(rule)
        return Grammar(self.alphabet, tuple(sorted(prims, key=lambda r: r.word)),
                       tuple(sorted(funcs, key=lambda r: r.word)))


@dataclass(frozen=True)
class Violation:
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.subject}: {self.message}"


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[Violation, ...] = field(default_factory=tuple)


def validate_rule(rule: Rule) -> list[Violation]:
    out: list[Violation] = []
    if isinstance(rule, Primitive):
        return out
    if rule.arity not in (1, 2):
        out.append(Violation(rule.word, f"arity {rule.arity} not supported"))
        return out
    if not rule.rhs:
        out.append(Violation(rule.word, "rhs is empty"))
        return out
    if rule.arity == 1:
        if any(i != 1 for i in rule.rhs):
            out.append(Violation(rule.word, "unary rhs must repeat slot 1 only"))
        if len(rule.rhs) > MAX_REPETITION:
            out.append(Violation(rule.word, f"repetition exceeds n<={MAX_REPETITION}"))
    else:
        if any(i not in (1, 2) for i in rule.rhs):
            out.append(Violation(rule.word, "binary rhs may only reference slots 1 and 2"))
        if len(rule.rhs) > MAX_BINARY_RHS:
            out.append(Violation(rule.word, f"rhs longer than {MAX_BINARY_RHS}"))
    return out


def validate_grammar(g: Grammar) -> ValidationResult:
    """Check every structural invariant; violations are data, not failures."""
    violations: list[Violation] = []
    seen: set[str] = set()
    prim_words = {p.word for p in g.primitives}
    func_words = {f.word for f in g.functions}
    for word in prim_words & func_words:
        violations.append(Violation(word, "word has two roles"))
    for rule in (*g.primitives, *g.functions):
        if rule.word in seen:
            violations.append(Violation(rule.word, "more than one rule for word"))
        seen.add(rule.word)
        if rule.word not in g.alphabet.words:
            violations.append(Violation(rule.word, "word not in alphabet"))
    for p in g.primitives:
        if p.color not in g.alphabet.colors:
            violations.append(Violation(p.word, f"color {p.color!r} not in alphabet"))
    for f in g.functions:
        violations.extend(validate_rule(f))
    return ValidationResult(not violations, tuple(violations))


@dataclass(frozen=True, order=True)
class OperationSignature:
    """A function rule's shape with its label and all colors abstracted away."""

    arity: int
    slots: tuple[str, ...]
    rhs: tuple[int, ...]


def signature_of(rule: FunctionRule) -> OperationSignature:
    """Canonical label-free shape; equal for rules differing only in word or colors.

    Slot indices are renamed to left-hand-side first-occurrence order, which for
    well-formed rules (slots already numbered positionally) is the identity.
    """
    order: dict[int, int] = {}
    for i in range(1, rule.arity + 1):
        order[i] = len(order) + 1
    rhs = tuple(order[i] for i in rule.rhs)
    return OperationSignature(rule.arity, tuple(k.value for k in rule.slots), rhs)


CombinationKey = tuple[OperationSignature, ...]


def combination_key(g: Grammar) -> CombinationKey:
    """Order-insensitive multiset of the grammar's three operation signatures."""
    if len(g.functions) != 3:
        raise WrongFunctionCount(f"expected 3 function rules, got {len(g.functions)}")
    return tuple(sorted(signature_of(f) for f in g.functions))


# ---------------------------------------------------------------------------
# Textual rule form: one rule per line.
#   primitive   word -> color
#   unary       x1 word -> x1 x1       (or u1 word -> u1 ...)
#   binary      <slot> word <slot> -> <slot refs>
# Token slots are named u1, u2 and string slots x1, x2, numbered per kind in
# left-hand-side order.

_SLOT_RE = re.compile(r"^[ux][12]$")


def _slot_names(slots: tuple[SlotKind, ...]) -> list[str]:
    names: list[str] = []
    counts = {SlotKind.TOKEN: 0, SlotKind.STRING: 0}
    for kind in slots:
        counts[kind] += 1
        prefix = "u" if kind is SlotKind.TOKEN else "x"
        names.append(f"{prefix}{counts[kind]}")
    return names


def format_rule(rule: Rule) -> str:
    if isinstance(rule, Primitive):
        return f"{rule.word} -> {rule.color}"
    names = _slot_names(rule.slots)
    if rule.arity == 1:
        lhs = f"{names[0]} {rule.word}"
    else:
        lhs = f"{names[0]} {rule.word} {names[1]}"
    rhs = " ".join(names[i - 1] for i in rule.rhs)
    return f"{lhs} -> {rhs}"


def parse_rule(text: str) -> Rule:
    tokens = text.split()
    if "->" not in tokens:
        raise EpisodeParseError(f"rule {text!r} lacks '->'")
    arrow = tokens.index("->")
    lhs, rhs = tokens[:arrow], tokens[arrow + 1:]
    if not lhs or not rhs:
        raise EpisodeParseError(f"rule {text!r} has an empty side")
    if len(lhs) == 1:
        if len(rhs) != 1:
            raise EpisodeParseError(f"primitive rule {text!r} must map to one color")
        return Primitive(lhs[0], rhs[0])
    if len(lhs) == 2:
        slot_names, word = [lhs[0]], lhs[1]
    elif len(lhs) == 3:
        slot_names, word = [lhs[0], lhs[2]], lhs[1]
    else:
        raise EpisodeParseError(f"rule {text!r} has an unsupported left-hand side")
    slots: list[SlotKind] = []
    for name in slot_names:
        if not _SLOT_RE.match(name):
            raise EpisodeParseError(f"bad slot name {name!r} in {text!r}")
        slots.append(SlotKind.TOKEN if name.startswith("u") else SlotKind.STRING)
    rule = FunctionRule(word, tuple(slots), ())
    expected = _slot_names(rule.slots)
    if slot_names != expected:
        raise EpisodeParseError(
            f"slot names in {text!r} must be numbered per kind in order ({' '.join(expected)})")
    by_name = {name: i + 1 for i, name in enumerate(expected)}
    refs: list[int] = []
    for ref in rhs:
        if ref not in by_name:
            raise EpisodeParseError(f"rhs reference {ref!r} in {text!r} is not a declared slot")
        refs.append(by_name[ref])
    return FunctionRule(word, tuple(slots), tuple(refs))


def format_grammar(g: Grammar) -> list[str]:
    return [format_rule(r) for r in (*g.primitives, *g.functions)]


def parse_grammar(lines: list[str], alphabet: Alphabet | None = None) -> Grammar:
    """Build a grammar from textual rule lines.

    When no alphabet is given, one is inferred from the rule words and colors
    mentioned, widened to the full default color set.
    """
    rules = [parse_rule(line) for line in lines if line.strip()]
    prims = tuple(r for r in rules if isinstance(r, Primitive))
    funcs = tuple(r for r in rules if isinstance(r, FunctionRule))
    if alphabet is None:
        words = tuple(dict.fromkeys(r.word for r in rules))
        colors = tuple(dict.fromkeys([*DEFAULT_COLORS, *(p.color for p in prims)]))
        alphabet = Alphabet(words, colors)
    return Grammar(alphabet, prims, funcs)
