"""Estimate set similarity from bottom-k sketches alone.

Two sketches built with the same hash function merge into the sketch of the
union, exactly as if the union had been sketched directly; the fraction of
the union's bottom-k shared by both sets estimates the Jaccard index.
"""

import numpy as np

from hashlab import build, descriptor_for, jaccard, merge_union, sketch_of

rng = np.random.default_rng(11)
universe = rng.integers(0, 2**52, size=30_000, dtype=np.uint64)
universe = np.unique(universe)

# |A| = |B| = 2t, overlap t  ->  true Jaccard 1/3
t = 8_000
a_keys = universe[: 2 * t]
b_keys = universe[t : 3 * t]

hf = build(descriptor_for("tab1perm", 64, 0xABBA))
sa = sketch_of(hf, a_keys, 1024)
sb = sketch_of(hf, b_keys, 1024)

print(f"true Jaccard {1 / 3:.4f}, estimate {jaccard(sa, sb):.4f}")

u = merge_union(sa, sb)
direct = sketch_of(hf, np.concatenate([a_keys, b_keys]), 1024)
assert u.to_bytes() == direct.to_bytes()
print("merged sketch == sketch of concatenated streams")
print(f"union size: true {3 * t}, estimate {u.estimate_distinct():.0f}")

# disjoint sets estimate 0, identical sets estimate 1
sc = sketch_of(hf, universe[3 * t : 4 * t], 1024)
print(f"disjoint {jaccard(sa, sc):.4f}, identical {jaccard(sa, sa):.4f}")
