"""Auditing operation-combination overlap between two episode pools.

A grammar's combination key is the multiset of its three function-rule
shapes, with the function words and all colors abstracted away.  Overlap
counts how many validation grammars combine shapes some training grammar
already combined, which is how claims of "new combinations" get checked.
"""

from colorseq import Alphabet, GenConfig, combination_key, generate_episode, overlap_count, signature_of

# A narrow rule family makes shape collisions common enough to see.
cfg = GenConfig(unary_max_rep=3, binary_max_rhs=2)
train = [generate_episode(Alphabet(), cfg, seed=s).grammar for s in range(40)]
val = [generate_episode(Alphabet(), cfg, seed=1000 + s).grammar for s in range(20)]

report = overlap_count(train, val)
print(f"{report.overlap}/{report.pool_size} validation grammars reuse a "
      "training combination of operations\n")

g = val[0]
print("example combination key (label-free shapes):")
for f in g.functions:
    s = signature_of(f)
    print(f"  {f.word:10s} arity={s.arity} slots={s.slots} rhs={s.rhs}")
print("key:", combination_key(g))
