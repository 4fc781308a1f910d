"""Structured key sets that expose weak schemes.

Independence numbers say nothing about concrete inputs: a discrete cube makes
simple and twisted tabulation split two bins exactly evenly almost every time
(one lucky table bit pairs the whole cube), and an arithmetic progression
makes multiply-shift far too uniform across 16 bins. Permuting the output
characters breaks most of that structure.
"""

import numpy as np

from hashlab.lab import Workload, perfect_split_fraction, run_quality

# cube {0,1}^7 x [64] into 2 bins: fraction of trials with a perfect
# 4096/4096 split (a fully random function manages this ~0.9% of the time)
cube = Workload("cube", key_bits=64, b1_dims=7, tail_bits=6)
print("perfect 2-bin splits of the cube, 400 trials:")
for scheme in ["simpletab", "twisted", "tabperm", "poly100"]:
    res = run_quality(scheme, cube, m=2, trials=400, seed=3)
    print(f"  {scheme:9s} {perfect_split_fraction(res, 4096):.3f}")

# progression {a*i : i < 50000} into 16 bins: 2-independent schemes place
# exactly 3125 keys per bin far too often, and their focal-bin counts spread
# much less than the fully random sd of ~54
prog = Workload("progression", key_bits=64, size=50_000)
ideal_sd = np.sqrt(50_000 * (1 / 16) * (15 / 16))
print("\n16-bin progression, 100 trials (perfect splits, focal sd):")
for scheme in ["multishift", "poly2", "tab1perm", "poly100"]:
    res = run_quality(scheme, prog, m=16, trials=100, seed=3)
    counts = np.array([r.focal_count for r in res])
    frac = perfect_split_fraction(res, 3125)
    print(f"  {scheme:9s} perfect {frac:.2f}, sd {counts.std():6.1f} "
          f"(fully random {ideal_sd:.1f})")
