"""Count distinct keys in one pass with a bottom-k sketch.

The sketch keeps the k smallest hash values seen; the k-th smallest value
estimates the distinct count as k / fraction. Repeats never change it.
"""

import numpy as np

from hashlab import (
    BottomKSketch,
    build,
    descriptor_for,
    estimate_distinct_median,
    sketch_of,
    stream_distinct,
)

rng = np.random.default_rng(7)
uniq = rng.integers(0, 2**52, size=200_000, dtype=np.uint64)
stream = np.concatenate([uniq, uniq[:60_000], uniq[:5_000]])  # heavy repeats
true = len(np.unique(uniq))

est = stream_distinct(stream, k=1024, seed=0x5EED)
print(f"true {true}, bottom-1024 estimate {est:.0f}, "
      f"relative error {abs(est - true) / true:.3%}")

# the same stream in any order gives byte-identical sketch state
hf = build(descriptor_for("tab1perm", 64, 0x5EED))
a = sketch_of(hf, stream, 1024)
b = sketch_of(hf, rng.permutation(stream), 1024)
assert a.to_bytes() == b.to_bytes()
print("sketch state is order and repeat blind")

# sketches serialize and reload
blob = a.to_bytes()
back = BottomKSketch.from_bytes(blob)
print(f"serialized {len(blob)} bytes, reloaded estimate {back.estimate_distinct():.0f}")

# median of repetitions trades time for a preset accuracy target
est_m = estimate_distinct_median(stream, eps=0.25, delta=0.05, seed=0x5EED)
print(f"median-of-repetitions (eps=0.25, delta=0.05): {est_m:.0f}")
