"""Recovering grammars from support pairs by exhaustive search.

Runs induction on a bundled episode's support set, prints every consistent
grammar, and walks the refine loop on a single pair, including a planted
contradiction.
"""

from colorseq import (
    FunctionRule,
    Hypothesis,
    SearchBudget,
    SlotKind,
    fixture_episode,
    format_grammar,
    induce_grammars,
    is_identifying,
    refine,
)

e = fixture_episode("133")
support = [(p.inp, p.out) for p in e.support]

result = induce_grammars(support, e.grammar.alphabet)
print(f"{len(result.grammars)} grammars reproduce all {len(support)} support pairs "
      f"(search complete: {result.complete})")
for g in result.grammars:
    print()
    for line in format_grammar(g):
        print(" ", line)

print("\nsupport identifies the grammar uniquely:",
      is_identifying(support, e.grammar))

# One refinement step: the six-purples pair pins the two-fold rule.
pair = (tuple("lug gazzer fep".split()), ("PURPLE",) * 6)
h = Hypothesis(e.grammar.alphabet, SearchBudget(), {
    "lug": (e.grammar.primitives[3],),
    "gazzer": (e.grammar.function_map()["gazzer"],),
})
refined = refine(h, pair)
print("\nafter one refine step, fep is pinned to:",
      refined.candidates["fep"][0].rhs)

wrong = Hypothesis(e.grammar.alphabet, SearchBudget(), {
    "lug": (e.grammar.primitives[3],),
    "gazzer": (e.grammar.function_map()["gazzer"],),
    "fep": (FunctionRule("fep", (SlotKind.STRING,), (1, 1, 1)),),
})
print("with fep wrongly fixed to three-fold, refine reports a conflict over:",
      refine(wrong, pair).conflicting)
