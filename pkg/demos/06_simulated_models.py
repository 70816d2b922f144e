"""End-to-end loop with simulated transducers.

A grammar oracle scores 100% with a zero non-systematic rate.  Planting a
rule substitution at probability one makes every affected query wrong in a
way the classifier names; pure noise is flagged as non-systematic.
"""

from collections import Counter

from colorseq import (
    FunctionRule,
    SimulatedTransducer,
    SlotKind,
    classify_run,
    consistency_metrics,
    fixture_episode,
    score_run,
    simulate,
)

e = fixture_episode("133")

oracle = SimulatedTransducer(e.grammar, seed=1)
run = simulate(oracle, e)
metrics = consistency_metrics(run, classify_run(e, run))
print("oracle:    rate", score_run(e, run).rate,
      " non-systematic", max(m.non_systematic_rate for m in metrics))

three_fold = FunctionRule("fep", (SlotKind.STRING,), (1, 1, 1))
confused = SimulatedTransducer(e.grammar, substitute=("fep", three_fold),
                               substitution_prob=1.0, seed=1)
run = simulate(confused, e)
labels = classify_run(e, run)
print("planted substitution: rate", score_run(e, run).rate)
print(Counter(label.describe() for row in labels for label in row))

noisy = SimulatedTransducer(e.grammar, noise_prob=1.0, seed=1)
run = simulate(noisy, e)
labels = classify_run(e, run)
kinds = Counter(label.kind for row in labels for label in row)
print("noise:", dict(kinds))
