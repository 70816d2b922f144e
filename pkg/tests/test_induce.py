import pytest

from oracle import brute_force_induce, normalize_grammar

from colorseq.derive import canonical_derive
from colorseq.episodes import generate_episode
from colorseq.errors import BudgetExhausted
from colorseq.fixtures import FIXTURE_IDS, fixture_episode, fixture_grammar
from colorseq.grammar import Alphabet, FunctionRule, Grammar, Primitive, SlotKind
from colorseq.induce import (
    Contradiction,
    Hypothesis,
    SearchBudget,
    induce_grammars,
    is_identifying,
    refine,
)

S, T = SlotKind.STRING, SlotKind.TOKEN


def support_of(fid):
    return [(p.inp, p.out) for p in fixture_episode(fid).support]


def test_133_support_pins_the_two_fold_rule():
    e = fixture_episode("133")
    result = induce_grammars(support_of("133"), e.grammar.alphabet)
    assert result.complete
    norms = {normalize_grammar(g) for g in result.grammars}
    assert normalize_grammar(e.grammar) in norms
    for g in result.grammars:
        assert g.function_map()["fep"] == FunctionRule("fep", (S,), (1, 1))


def test_122_support_recovers_a_wrap_encoding():
    e = fixture_episode("122")
    result = induce_grammars(support_of("122"), e.grammar.alphabet)
    assert result.complete
    norms = {normalize_grammar(g) for g in result.grammars}
    assert normalize_grammar(e.grammar) in norms
    six_reds = (("blicket", "fep", "blicket", "gazzer"), ("RED",) * 6)
    for g in result.grammars:
        assert canonical_derive(g, six_reds[0]) == six_reds[1]


def test_primitive_only_support_leaves_functions_unconstrained():
    alphabet = Alphabet(("a", "b"), ("RED", "BLUE"))
    support = [(("a",), ("RED",))]
    small = induce_grammars(support, alphabet, SearchBudget(max_hypotheses=20, max_rhs_len=2))
    assert not small.complete  # the free word's family alone exceeds this budget
    assert all(g.primitive_map()["a"] == "RED" for g in small.grammars)
    full = induce_grammars(support, alphabet, SearchBudget(max_rhs_len=2))
    assert full.complete
    assert len(full.grammars) == len(set(full.grammars)) > 10
    assert all(g.primitive_map()["a"] == "RED" for g in full.grammars)


def test_induction_soundness_on_generated_episodes():
    for seed in (3, 11):
        e = generate_episode(Alphabet(), seed=seed)
        support = [(p.inp, p.out) for p in e.support]
        result = induce_grammars(support, e.grammar.alphabet)
        assert result.complete
        for g in result.grammars[:50]:
            for inp, out in support:
                assert canonical_derive(g, inp) == out
        assert normalize_grammar(e.grammar) in {normalize_grammar(g)
                                                for g in result.grammars}


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_induction_matches_brute_force(fid):
    e = fixture_episode(fid)
    result = induce_grammars(support_of(fid), e.grammar.alphabet)
    assert result.complete
    expected = brute_force_induce(support_of(fid), e.grammar.alphabet)
    assert {normalize_grammar(g) for g in result.grammars} == expected


# -- identifiability -----------------------------------------------------------


def test_episode_1_is_identifying():
    e = fixture_episode("1")
    assert is_identifying(support_of("1"), e.grammar) is True


def test_episode_133_is_not_identifying():
    # The before-rule's token slot is never separated from a plain string slot
    # by any support pair, so two encodings survive.
    e = fixture_episode("133")
    assert is_identifying(support_of("133"), e.grammar) is False


def test_missing_evidence_is_not_identifying():
    e = fixture_episode("133")
    trimmed = [(i, o) for i, o in support_of("133") if "fep" not in i]
    assert is_identifying(trimmed, e.grammar) is False


def test_identifying_needs_enough_budget():
    e = fixture_episode("1")
    with pytest.raises(BudgetExhausted):
        is_identifying(support_of("1"), e.grammar, SearchBudget(max_hypotheses=10))


def test_identifying_rejects_non_reproducing_grammar():
    e = fixture_episode("1")
    wrong = e.grammar.replace_rule("zup", FunctionRule("zup", (S,), (1, 1, 1)))
    with pytest.raises(ValueError):
        is_identifying(support_of("1"), wrong)


# -- hypothesis refinement -----------------------------------------------------


def _h133_with(fep_options=None):
    g = fixture_grammar("133")
    candidates = {
        "lug": (Primitive("lug", "PURPLE"),),
        "gazzer": (FunctionRule("gazzer", (S,), (1, 1, 1)),),
    }
    if fep_options is not None:
        candidates["fep"] = fep_options
    return Hypothesis(g.alphabet, SearchBudget(max_hypotheses=100_000), candidates)


PAIR = (("lug", "gazzer", "fep"), ("PURPLE",) * 6)


def test_refine_pins_fep_to_two_fold():
    h = refine(_h133_with(), PAIR)
    assert isinstance(h, Hypothesis)
    assert h.assigned("fep") == FunctionRule("fep", (S,), (1, 1))
    assert h.provenance["fep"] == PAIR


def test_refine_reports_contradiction_naming_fep():
    # A three-fold fep is only irreconcilable together with the pinned
    # three-fold gazzer (releasing either to the family repairs the pair), so
    # the minimal conflict names both, offender first.
    fixed = _h133_with((FunctionRule("fep", (S,), (1, 1, 1)),))
    result = refine(fixed, PAIR)
    assert isinstance(result, Contradiction)
    assert result.conflicting == ("fep", "gazzer")


def test_refine_is_idempotent_on_satisfied_pairs():
    h = refine(_h133_with(), PAIR)
    again = refine(h, PAIR)
    assert isinstance(again, Hypothesis)
    assert again.candidates == h.candidates


def test_refine_is_monotone():
    h0 = _h133_with()
    h1 = refine(h0, PAIR)
    before = set(h0.options("fep"))
    after = set(h1.options("fep"))
    assert after <= before
    h2 = refine(h1, (("lug", "fep"), ("PURPLE", "PURPLE")))
    assert isinstance(h2, Hypothesis)
    assert set(h2.options("fep")) <= after


def test_refine_rejects_unknown_words():
    with pytest.raises(ValueError):
        refine(_h133_with(), (("blork",), ("RED",)))
