"""Episode types, seeded sampling, probe templates, and the episode file format.

An episode pairs a hidden grammar's SUPPORT demonstrations with QUERY inputs
whose targets a model must reproduce.  Files are UTF-8 JSON with the fields
``id``, ``seed``, ``grammar``, ``support``, ``query`` in that order; unknown
fields are rejected.  Generation is a pure function of (grammar, config,
seed), seeded with the 32-bit Mersenne Twister from the standard library and
recorded in the file so fixtures regenerate bit-identically.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from itertools import product

from .derive import (
    Apply,
    Concat,
    Derivation,
    ParsePolicy,
    Seq,
    canonical_derivation,
    canonical_derive,
    enumerate_outputs,
    yield_of,
)
from .errors import (
    AlphabetTooSmall,
    CapExceeded,
    ConsistencyError,
    EpisodeParseError,
    GenerationExhausted,
    NotTranslatable,
    TemplateInapplicable,
    UnknownWord,
)
from .grammar import (
    Alphabet,
    FunctionRule,
    Grammar,
    Primitive,
    SlotKind,
    format_grammar,
    parse_grammar,
    validate_grammar,
)

SEED_ALGORITHM = "mt19937"


@dataclass(frozen=True)
class SupportPair:
    inp: Seq
    out: Seq


@dataclass(frozen=True)
class QueryPair:
    inp: Seq
    target: Seq | None = None
    alts: tuple[Seq, ...] | None = None
    ambiguous: bool | None = None


@dataclass(frozen=True)
class SeedInfo:
    value: int
    algorithm: str = SEED_ALGORITHM


@dataclass(frozen=True)
class Episode:
    id: str
    grammar: Grammar | None
    support: tuple[SupportPair, ...]
    query: tuple[QueryPair, ...]
    seed: SeedInfo | None = None

    def support_inputs(self) -> frozenset[Seq]:
        return frozenset(p.inp for p in self.support)


@dataclass(frozen=True)
class GenConfig:
    """Counts, caps, and sampling knobs for episode generation.

    ``binary_max_rhs`` defaults below the family bound of 8 so that depth-2
    compositions still fit the output cap often enough to sample.
    """

    n_primitives: int = 4
    n_functions: int = 3
    support_size: int = 14
    query_size: int = 10
    input_cap: int = 10
    output_cap: int = 8
    unary_min_rep: int = 2
    unary_max_rep: int = 8
    binary_min_rhs: int = 2
    binary_max_rhs: int = 4
    allow_ambiguous_queries: bool = True
    max_rounds: int = 4000

    def policy(self) -> ParsePolicy:
        return ParsePolicy(input_cap=self.input_cap, output_cap=self.output_cap)


DEFAULT_CONFIG = GenConfig()


# ---------------------------------------------------------------------------
# Sampling


def sample_grammar(alphabet: Alphabet, cfg: GenConfig = DEFAULT_CONFIG, seed: int = 0) -> Grammar:
    """Draw a valid grammar uniformly from the bounded rule family."""
    rng = random.Random(seed)
    total = cfg.n_primitives + cfg.n_functions
    if total > len(alphabet.words):
        raise AlphabetTooSmall(f"need {total} words, alphabet has {len(alphabet.words)}")
    if cfg.n_primitives > len(alphabet.colors):
        raise AlphabetTooSmall(
            f"need {cfg.n_primitives} distinct colors, alphabet has {len(alphabet.colors)}")
    words = rng.sample(alphabet.words, total)
    colors = rng.sample(alphabet.colors, cfg.n_primitives)
    primitives = tuple(Primitive(w, c) for w, c in zip(words[: cfg.n_primitives], colors))
    functions = []
    for word in words[cfg.n_primitives:]:
        if rng.random() < 0.5:
            kind = rng.choice((SlotKind.STRING, SlotKind.TOKEN))
            n = rng.randint(cfg.unary_min_rep, cfg.unary_max_rep)
            functions.append(FunctionRule(word, (kind,), (1,) * n))
        else:
            kinds = (rng.choice((SlotKind.STRING, SlotKind.TOKEN)),
                     rng.choice((SlotKind.STRING, SlotKind.TOKEN)))
            length = rng.randint(max(cfg.binary_min_rhs, 2), cfg.binary_max_rhs)
            while True:
                rhs = tuple(rng.choice((1, 2)) for _ in range(length))
                if 1 in rhs and 2 in rhs:
                    break
            functions.append(FunctionRule(word, kinds, rhs))
    own_alphabet = Alphabet(tuple(words), alphabet.colors)
    g = Grammar(own_alphabet, primitives, tuple(functions))
    assert validate_grammar(g).ok
    return g


def _apply_depth(d: Derivation) -> int:
    if isinstance(d, Apply):
        return 1 + max((_apply_depth(c) for c in d.children), default=0)
    if isinstance(d, Concat):
        return max(_apply_depth(d.left), _apply_depth(d.right))
    return 0


class _Sampler:
    def __init__(self, g: Grammar, cfg: GenConfig, rng: random.Random):
        self.g = g
        self.cfg = cfg
        self.rng = rng
        self.policy = cfg.policy()
        self.rounds = 0

    def spend(self, what: str) -> None:
        self.rounds += 1
        if self.rounds > self.cfg.max_rounds:
            raise GenerationExhausted(f"gave up while sampling {what} "
                                      f"after {self.cfg.max_rounds} rejected draws")

    def draw_tokens(self, depth: int) -> list[str]:
        prim_words = [p.word for p in self.g.primitives]
        if depth <= 0:
            return [self.rng.choice(prim_words)]
        roll = self.rng.random()
        if roll < 0.25:
            return [self.rng.choice(prim_words)]
        if roll < 0.45:
            return self.draw_tokens(depth - 1) + self.draw_tokens(depth - 1)
        rule = self.rng.choice(self.g.functions)
        args = []
        for kind in rule.slots:
            if kind is SlotKind.TOKEN:
                args.append([self.rng.choice(prim_words)])
            else:
                args.append(self.draw_tokens(depth - 1))
        if rule.arity == 1:
            return args[0] + [rule.word]
        return args[0] + [rule.word] + args[1]

    def try_pair(self, tokens: list[str]) -> SupportPair | None:
        if len(tokens) > self.cfg.input_cap:
            return None
        inp = tuple(tokens)
        try:
            out = canonical_derive(self.g, inp, self.policy)
        except (NotTranslatable, CapExceeded):
            return None
        return SupportPair(inp, out)

    def draw_pair(self, depth: int, what: str,
                  taken: set[Seq], min_functions: int = 0) -> SupportPair:
        while True:
            self.spend(what)
            pair = self.try_pair(self.draw_tokens(depth))
            if pair is None or pair.inp in taken:
                continue
            if min_functions and _apply_depth(canonical_derivation(self.g, pair.inp, self.policy)) < min_functions:
                continue
            taken.add(pair.inp)
            return pair

    def exemplar(self, rule: FunctionRule, taken: set[Seq]) -> SupportPair:
        prim_words = [p.word for p in self.g.primitives]
        while True:
            self.spend(f"exemplar for {rule.word}")
            args = [[self.rng.choice(prim_words)] for _ in rule.slots]
            if rule.arity == 1:
                tokens = args[0] + [rule.word]
            else:
                tokens = args[0] + [rule.word] + args[1]
            pair = self.try_pair(tokens)
            if pair is not None and pair.inp not in taken:
                taken.add(pair.inp)
                return pair


def sample_episode(g: Grammar, cfg: GenConfig = DEFAULT_CONFIG, seed: int = 0,
                   episode_id: str | None = None) -> Episode:
    """Sample a coverage-complete, canonical-consistent episode for ``g``.

    Support covers every rule word at least once and contains at least one
    pair composing two or more function rules; queries avoid support inputs
    and at least one query nests function applications to depth two.
    """
    if cfg.support_size < cfg.n_primitives + cfg.n_functions:
        raise ValueError("support size smaller than the number of rules")
    rng = random.Random(seed)
    sampler = _Sampler(g, cfg, rng)
    taken: set[Seq] = set()
    support: list[SupportPair] = []
    for p in g.primitives:
        pair = sampler.try_pair([p.word])
        if pair is None:
            raise GenerationExhausted(f"primitive {p.word} unusable under caps")
        taken.add(pair.inp)
        support.append(pair)
    for f in g.functions:
        support.append(sampler.exemplar(f, taken))
    support.append(sampler.draw_pair(2, "composition pair", taken, min_functions=2))
    while len(support) < cfg.support_size:
        support.append(sampler.draw_pair(rng.choice((1, 1, 2)), "support filler", taken))

    queries: list[QueryPair] = []
    need_deep = True
    while len(queries) < cfg.query_size:
        depth = 2 if need_deep else rng.choice((1, 2))
        pair = sampler.draw_pair(depth, "query", taken, min_functions=2 if need_deep else 0)
        alts = tuple(sorted(enumerate_outputs(g, pair.inp, sampler.policy, caps=True)))
        ambiguous = len(alts) > 1
        if ambiguous and not cfg.allow_ambiguous_queries:
            continue
        queries.append(QueryPair(pair.inp, pair.out, alts, ambiguous))
        need_deep = False

    return Episode(
        id=episode_id or f"ep-{seed}",
        grammar=g,
        support=tuple(support),
        query=tuple(queries),
        seed=SeedInfo(seed),
    )


def generate_episode(alphabet: Alphabet, cfg: GenConfig = DEFAULT_CONFIG, seed: int = 0,
                     episode_id: str | None = None, grammar_attempts: int = 64) -> Episode:
    """Sample a grammar and an episode for it, retrying grammars whose shape
    cannot satisfy the caps; deterministic in ``seed``."""
    mixer = random.Random(seed)
    last: GenerationExhausted | None = None
    for _ in range(grammar_attempts):
        sub = mixer.getrandbits(48)
        g = sample_grammar(alphabet, cfg, sub)
        try:
            return sample_episode(g, cfg, sub, episode_id=episode_id or f"ep-{seed}")
        except GenerationExhausted as exc:
            last = exc
    raise GenerationExhausted(f"no feasible grammar after {grammar_attempts} attempts") from last


# ---------------------------------------------------------------------------
# Structure-sensitivity probe templates

PROBE_FAMILIES = ("unary-binary", "binary-unary")


def make_probe_queries(g: Grammar, family: str,
                       policy: ParsePolicy | None = None) -> tuple[QueryPair, ...]:
    """Instantiate a probe template across all primitive assignments.

    ``unary-binary`` builds inputs  p1 UNARY BINARY p2 p3  and
    ``binary-unary`` builds inputs  p1 BINARY p2 p3 UNARY, including
    repeated-color instances.  Every emitted query carries its canonical
    target and the complete enumerated alternative-output set.
    """
    if family not in PROBE_FAMILIES:
        raise ValueError(f"unknown probe family {family!r}")
    policy = policy or ParsePolicy()
    unaries = [f for f in g.functions if f.arity == 1]
    binaries = [f for f in g.functions if f.arity == 2]
    if not unaries or not binaries:
        raise TemplateInapplicable(f"family {family!r} needs a unary and a binary rule")
    prim_words = [p.word for p in g.primitives]
    out: list[QueryPair] = []
    for u, b in product(unaries, binaries):
        for p1, p2, p3 in product(prim_words, repeat=3):
            if family == "unary-binary":
                inp = (p1, u.word, b.word, p2, p3)
            else:
                inp = (p1, b.word, p2, p3, u.word)
            try:
                target = canonical_derive(g, inp, policy)
            except (NotTranslatable, CapExceeded):
                continue
            alts = tuple(sorted(enumerate_outputs(g, inp, policy, caps=True)))
            out.append(QueryPair(inp, target, alts, len(alts) > 1))
    if not out:
        raise TemplateInapplicable(f"no translatable instance of {family!r} for this grammar")
    return tuple(out)


# ---------------------------------------------------------------------------
# Episode files

_EPISODE_FIELDS = ("id", "seed", "grammar", "support", "query")
_QUERY_FIELDS = ("in", "out", "alts", "ambiguous")


def write_episode(e: Episode) -> str:
    doc: dict = {"id": e.id}
    if e.seed is not None:
        doc["seed"] = {"algorithm": e.seed.algorithm, "value": e.seed.value}
    if e.grammar is not None:
        doc["grammar"] = format_grammar(e.grammar)
    doc["support"] = [{"in": list(p.inp), "out": list(p.out)} for p in e.support]
    queries = []
    for q in e.query:
        item: dict = {"in": list(q.inp)}
        if q.target is not None:
            item["out"] = list(q.target)
        if q.alts is not None:
            item["alts"] = [list(a) for a in q.alts]
        if q.ambiguous is not None:
            item["ambiguous"] = q.ambiguous
        queries.append(item)
    doc["query"] = queries
    return json.dumps(doc, indent=2) + "\n"


def _want_list_of_words(value, where: str) -> Seq:
    if not isinstance(value, list) or not all(isinstance(w, str) for w in value):
        raise EpisodeParseError(f"{where} must be a list of strings")
    return tuple(value)


def read_episode(text: str, policy: ParsePolicy | None = None,
                 check_consistency: bool = True) -> Episode:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EpisodeParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise EpisodeParseError("episode file must hold a JSON object")
    unknown = set(doc) - set(_EPISODE_FIELDS)
    if unknown:
        raise EpisodeParseError(f"unknown episode fields: {sorted(unknown)}")
    for required in ("id", "support", "query"):
        if required not in doc:
            raise EpisodeParseError(f"missing field {required!r}")
    seed = None
    if "seed" in doc:
        raw = doc["seed"]
        if not isinstance(raw, dict) or set(raw) != {"algorithm", "value"}:
            raise EpisodeParseError("seed must be {algorithm, value}")
        seed = SeedInfo(int(raw["value"]), str(raw["algorithm"]))
    grammar = None
    if "grammar" in doc:
        lines = doc["grammar"]
        if not isinstance(lines, list) or not all(isinstance(x, str) for x in lines):
            raise EpisodeParseError("grammar must be a list of rule strings")
        grammar = parse_grammar(lines)
    support = []
    for i, item in enumerate(doc["support"]):
        if not isinstance(item, dict) or set(item) != {"in", "out"}:
            raise EpisodeParseError(f"support[{i}] must be {{in, out}}")
        support.append(SupportPair(_want_list_of_words(item["in"], f"support[{i}].in"),
                                   _want_list_of_words(item["out"], f"support[{i}].out")))
    query = []
    for i, item in enumerate(doc["query"]):
        if not isinstance(item, dict) or "in" not in item or set(item) - set(_QUERY_FIELDS):
            raise EpisodeParseError(f"query[{i}] must use fields {_QUERY_FIELDS}")
        alts = None
        if "alts" in item:
            alts = tuple(_want_list_of_words(a, f"query[{i}].alts") for a in item["alts"])
        ambiguous = item.get("ambiguous")
        if ambiguous is not None and not isinstance(ambiguous, bool):
            raise EpisodeParseError(f"query[{i}].ambiguous must be a boolean")
        target = _want_list_of_words(item["out"], f"query[{i}].out") if "out" in item else None
        query.append(QueryPair(_want_list_of_words(item["in"], f"query[{i}].in"),
                               target, alts, ambiguous))
    episode = Episode(str(doc["id"]), grammar, tuple(support), tuple(query), seed)
    if check_consistency and grammar is not None:
        problems = episode_problems(episode, policy or ParsePolicy())
        if problems:
            raise ConsistencyError(problems[0])
    return episode


def episode_problems(e: Episode, policy: ParsePolicy | None = None,
                     require_coverage: bool = False) -> list[str]:
    """Re-validation pass: canonical consistency, caps, and (optionally) the
    generator's coverage guarantees.  Returns human-readable problems."""
    policy = policy or ParsePolicy()
    problems: list[str] = []
    if e.grammar is None:
        return ["episode carries no grammar to validate against"]
    check = validate_grammar(e.grammar)
    problems.extend(str(v) for v in check.violations)
    for kind, pairs in (("support", e.support), ("query", e.query)):
        for pair in pairs:
            inp = pair.inp
            expected = pair.out if isinstance(pair, SupportPair) else pair.target
            if len(inp) > policy.input_cap:
                problems.append(f"{kind} input {' '.join(inp)!r} exceeds the input cap")
                continue
            try:
                got = canonical_derive(e.grammar, inp, policy)
            except (NotTranslatable, CapExceeded, UnknownWord) as exc:
                problems.append(f"{kind} pair {' '.join(inp)!r}: {exc}")
                continue
            if expected is not None and got != expected:
                problems.append(
                    f"{kind} pair {' '.join(inp)!r}: grammar yields "
                    f"{' '.join(got)}, file says {' '.join(expected)}")
            if expected is not None and len(expected) > policy.output_cap:
                problems.append(f"{kind} output for {' '.join(inp)!r} exceeds the output cap")
    support_inputs = e.support_inputs()
    for q in e.query:
        if q.inp in support_inputs:
            problems.append(f"query {' '.join(q.inp)!r} duplicates a support input")
    if require_coverage:
        mentioned = {w for p in e.support for w in p.inp}
        for word in e.grammar.rule_words():
            if word not in mentioned:
                problems.append(f"support never exercises {word!r}")
        if not any(
            _apply_depth(canonical_derivation(e.grammar, p.inp, policy)) >= 2
            for p in e.support
        ):
            problems.append("no support pair composes two function rules")
    return problems


def strip_targets(e: Episode) -> Episode:
    """Episode with hidden grammar and query targets, as a model would see it."""
    return replace(
        e,
        grammar=None,
        query=tuple(QueryPair(q.inp) for q in e.query),
    )
