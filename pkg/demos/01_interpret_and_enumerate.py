"""Interpreting inputs under a rule grammar, and seeing where parses fork.

Builds a small grammar from its textual form, translates a few inputs, and
enumerates the full output set of an ambiguous one.
"""

from colorseq import canonical_derive, enumerate_derivations, parse_grammar

grammar = parse_grammar([
    "wif -> BLUE",
    "tufa -> RED",
    "kiki -> PINK",
    "lug -> PURPLE",
    "u1 zup x1 -> u1 x1",      # token before a string: concatenate
    "x1 gazzer -> x1 x1 x1",   # three-fold repetition
    "x1 fep -> x1 x1",         # two-fold repetition
])

for text in ["wif", "wif gazzer", "wif zup tufa gazzer", "lug gazzer fep"]:
    words = tuple(text.split())
    print(f"{text:28s} -> {' '.join(canonical_derive(grammar, words))}")

print()
print("An input where the repetition can attach two ways:")
query = tuple("wif zup kiki fep".split())
for derivation, output in enumerate_derivations(grammar, query):
    print(f"  {' '.join(output):28s} (root rule: {type(derivation).__name__})")
print("The canonical parse picks the leftmost rule that spans the input:")
print(f"  {' '.join(canonical_derive(grammar, query))}")
