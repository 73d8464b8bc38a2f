"""Seeded random contexts through the theorem checks.

Run: python demos/random_corpus.py [seed] [count]
"""
import sys
from collections import Counter

from moritakit.catlab import theorem_regression
from moritakit.morita import butterfly_check, proposition_TT_check, random_data

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
count = int(sys.argv[2]) if len(sys.argv) > 2 else 20

data = random_data(seed, count, "context")
print(f"{len(data)} random contexts (seed {seed})")
print(f"Prop T=T ok on all: {all(proposition_TT_check(d)['ok'] for d in data)}")
print(f"butterfly ok on all: {all(butterfly_check(d)['ok'] for d in data)}")

tally: Counter = Counter()
for d in data:
    rep = theorem_regression(d, 8, theorems=["V=V", "CHECK", "X=X"])
    for r in rep.results:
        tally[(r.theorem, r.status)] += 1
for (thm, status), n in sorted(tally.items()):
    print(f"  {thm:6} {status:4} {n}")

flip = random_data(seed, count, "datum")
ctx = sum(d.is_context for d in flip)
print(f"independent brackets: {ctx} of {len(flip)} are contexts")
