import json

import pytest

from colorseq.derive import canonical_derive, enumerate_outputs
from colorseq.episodes import (
    Episode,
    GenConfig,
    QueryPair,
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
from colorseq.errors import (
    AlphabetTooSmall,
    ConsistencyError,
    EpisodeParseError,
    GenerationExhausted,
    TemplateInapplicable,
)
from colorseq.fixtures import fixture_episode, fixture_grammar
from colorseq.grammar import Alphabet, FunctionRule, Grammar, Primitive, SlotKind


def w(text):
    return tuple(text.split())


# -- grammar sampling ----------------------------------------------------------


def test_sampled_grammar_is_valid_and_deterministic():
    a = Alphabet()
    g1 = sample_grammar(a, seed=42)
    g2 = sample_grammar(a, seed=42)
    assert g1 == g2
    assert len(g1.primitives) == 4 and len(g1.functions) == 3


def test_sampled_unary_repetitions_stay_in_range():
    a = Alphabet()
    for seed in range(10_000):
        g = sample_grammar(a, seed=seed)
        for f in g.functions:
            if f.arity == 1:
                assert 2 <= len(f.rhs) <= 8


def test_alphabet_too_small():
    with pytest.raises(AlphabetTooSmall):
        sample_grammar(Alphabet(("a", "b"), ("RED",)), seed=0)


# -- episode sampling ----------------------------------------------------------


def test_episode_coverage_and_consistency():
    g = fixture_grammar("133")
    e = sample_episode(g, seed=5)
    assert episode_problems(e, require_coverage=True) == []
    mentioned = {word for p in e.support for word in p.inp}
    assert set(g.rule_words()) <= mentioned


def test_same_seed_gives_byte_identical_files():
    g = fixture_grammar("133")
    a = write_episode(sample_episode(g, seed=9))
    b = write_episode(sample_episode(g, seed=9))
    assert a == b


def test_impossible_caps_exhaust_generation():
    alphabet = Alphabet(("a", "b"), ("RED", "BLUE"))
    g = Grammar(alphabet, (Primitive("a", "RED"),),
                (FunctionRule("b", (SlotKind.STRING,), (1, 1, 1)),))
    cfg = GenConfig(n_primitives=1, n_functions=1, support_size=4, query_size=2,
                    output_cap=1, max_rounds=300)
    with pytest.raises(GenerationExhausted):
        sample_episode(g, cfg, seed=0)


def test_generate_episode_is_deterministic():
    a = write_episode(generate_episode(Alphabet(), seed=123))
    b = write_episode(generate_episode(Alphabet(), seed=123))
    assert a == b


def test_queries_avoid_support_inputs():
    e = generate_episode(Alphabet(), seed=77)
    assert not e.support_inputs() & {q.inp for q in e.query}


def test_ambiguous_queries_flagged_and_excludable():
    e = generate_episode(Alphabet(), seed=31)
    for q in e.query:
        outs = enumerate_outputs(e.grammar, q.inp, caps=True)
        assert q.ambiguous == (len(outs) > 1)
        assert q.target in q.alts
    cfg = GenConfig(allow_ambiguous_queries=False)
    strict = generate_episode(Alphabet(), cfg, seed=31)
    assert all(q.ambiguous is False for q in strict.query)


# -- probe templates -----------------------------------------------------------


def test_probe_includes_published_query():
    g = fixture_grammar("1")
    probes = make_probe_queries(g, "unary-binary")
    by_input = {q.inp: q for q in probes}
    q = by_input[w("fep gazzer kiki wif lug")]
    assert q.target == w("RED RED RED BLUE RED RED RED PURPLE")
    assert q.alts == (q.target,)


def test_probe_covers_same_color_instance():
    g = fixture_grammar("1")
    probes = make_probe_queries(g, "unary-binary")
    by_input = {q.inp: q for q in probes}
    q = by_input[w("wif gazzer kiki wif wif")]
    assert q.target == w("BLUE BLUE BLUE BLUE BLUE BLUE BLUE BLUE")
    assert all(set(alt) == {"BLUE"} for alt in q.alts)


def test_probe_emits_target_within_alternative_set():
    g = fixture_grammar("1")
    for family in ("unary-binary", "binary-unary"):
        for q in make_probe_queries(g, family):
            assert q.target in q.alts
            assert q.ambiguous == (len(q.alts) > 1)


def test_probe_needs_matching_rule_shapes():
    g = fixture_grammar("32")  # three binary rules, no unary
    with pytest.raises(TemplateInapplicable):
        make_probe_queries(g, "unary-binary")
    no_binary = Grammar(
        g.alphabet,
        g.primitives,
        tuple(FunctionRule(f.word, (SlotKind.STRING,), (1, 1)) for f in g.functions),
    )
    with pytest.raises(TemplateInapplicable):
        make_probe_queries(no_binary, "binary-unary")
    with pytest.raises(ValueError):
        make_probe_queries(g, "no-such-family")


# -- files ---------------------------------------------------------------------


def test_round_trip_identity():
    e = generate_episode(Alphabet(), seed=8)
    assert read_episode(write_episode(e)) == e


def test_fixture_round_trip():
    e = fixture_episode("122")
    assert read_episode(write_episode(e)) == e


def test_field_order_is_stable():
    e = generate_episode(Alphabet(), seed=8)
    doc = json.loads(write_episode(e))
    assert list(doc.keys()) == ["id", "seed", "grammar", "support", "query"]


def test_unknown_fields_rejected():
    e = generate_episode(Alphabet(), seed=8)
    doc = json.loads(write_episode(e))
    doc["comment"] = "nope"
    with pytest.raises(EpisodeParseError):
        read_episode(json.dumps(doc))


def test_parse_error_carries_location():
    with pytest.raises(EpisodeParseError) as err:
        read_episode("{\n  broken")
    assert err.value.line == 2


def test_inconsistent_pair_is_reported():
    e = fixture_episode("133")
    doc = json.loads(write_episode(e))
    doc["support"][0]["out"] = ["RED"]  # wif -> BLUE in truth
    with pytest.raises(ConsistencyError) as err:
        read_episode(json.dumps(doc))
    assert "wif" in str(err.value)


def test_pair_with_unknown_word_is_a_consistency_error():
    e = fixture_episode("133")
    doc = json.loads(write_episode(e))
    doc["support"][0] = {"in": ["blork"], "out": ["RED"]}
    with pytest.raises(ConsistencyError) as err:
        read_episode(json.dumps(doc))
    assert "blork" in str(err.value)


def test_strip_targets_hides_grammar_and_answers():
    e = fixture_episode("133")
    bare = strip_targets(e)
    assert bare.grammar is None
    assert all(q.target is None for q in bare.query)
    assert bare.support == e.support


def test_support_size_must_cover_rules():
    g = fixture_grammar("133")
    with pytest.raises(ValueError):
        sample_episode(g, GenConfig(support_size=5), seed=0)
