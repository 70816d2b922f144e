"""Seeded episode generation.

Samples a grammar and a support/query episode for it, shows the coverage
guarantees, and demonstrates that the same seed regenerates the same bytes.
"""

from colorseq import Alphabet, episode_problems, format_grammar, generate_episode, write_episode

episode = generate_episode(Alphabet(), seed=2024)

print("grammar:")
for line in format_grammar(episode.grammar):
    print(" ", line)

print("\nsupport pairs:", len(episode.support))
for pair in episode.support[:6]:
    print(f"  {' '.join(pair.inp):30s} -> {' '.join(pair.out)}")

print("\nqueries (targets hidden from models):")
for q in episode.query[:4]:
    flag = " (ambiguous)" if q.ambiguous else ""
    print(f"  {' '.join(q.inp):30s} -> {' '.join(q.target)}{flag}")

print("\nre-validation problems:", episode_problems(episode, require_coverage=True))
same = write_episode(generate_episode(Alphabet(), seed=2024)) == write_episode(episode)
print("same seed, byte-identical file:", same)
