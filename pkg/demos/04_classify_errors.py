"""Labeling a model's outputs as systematic or not.

Scores the bundled 10-samples-per-query run for episode 133 and classifies
every sampled output: correct, an alternative parse of the true grammar, a
single consistent rule substitution, both at once, or nothing systematic.
"""

from collections import Counter

from colorseq import classify_run, consistency_metrics, fixture_episode, fixture_run, score_run

e = fixture_episode("133")
run = fixture_run("133")

report = score_run(e, run)
print(f"exact-match success: {report.correct}/{report.total} = {100 * report.rate:.0f}%\n")

labels = classify_run(e, run)
histogram = Counter(label.describe() for row in labels for label in row)
for name, count in histogram.most_common():
    print(f"  {count:3d}  {name}")

print("\nper-query consistency (modal share / distinct outputs / non-systematic):")
for q, m in zip(e.query, consistency_metrics(run, labels)):
    print(f"  {' '.join(q.inp):28s} {m.modal_share:.1f} / {m.distinct_outputs} "
          f"/ {m.non_systematic_rate:.1f}")
