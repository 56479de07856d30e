"""Aesthetics: per-view estimator average, or pairwise-judge ELO.

The cheap route averages an aesthetic estimator over the rendered views
and maps the raw range onto 0-100%. The judge route plays models against
each other pairwise and fits Bradley-Terry strengths, reported on the
ELO scale and min-max normalized across the compared set.
"""

import numpy as np

from eval3d.metrics import aesthetic_elo, aesthetic_mean, bradley_terry_elo

print("estimator average:")
for raw in ([0.4, 0.8, 1.2], [-2.0, 2.0], [2.0, 2.0]):
    score = aesthetic_mean(raw)
    print(f"  raw {raw} -> {score.value:.1f}")

print("\npairwise judge (A beats B 3:1):")
outcomes = [("A", "B", "A")] * 3 + [("A", "B", "B")]
elo = bradley_terry_elo(outcomes)
print(f"  ELO gap {elo['A'] - elo['B']:.1f} "
      f"(two-model closed form: 400*log10(3) = {400 * np.log10(3):.1f})")

print("\nthree models, strict order A > B > C:")
outcomes = [("A", "B", "A"), ("B", "C", "B"), ("A", "C", "A")] * 4
for model, score in sorted(aesthetic_elo(outcomes).items()):
    print(f"  {model}: {score.value:5.1f}  (raw ELO {score.evidence['elo']:+.1f})")

print("\nperfectly cyclic outcomes collapse to a tie:")
cyclic = aesthetic_elo([("A", "B", "A"), ("B", "C", "B"), ("C", "A", "C")])
print("  " + ", ".join(f"{m}={s.value:.1f}" for m, s in sorted(cyclic.items())))
