"""Map hash values into m bins and recover each bin's preimage interval.

The bin of a hash value h with out_bits output bits is (h * m) >> out_bits,
so each bin's preimage is one contiguous interval, and intervals split into
few dyadic (power-of-two aligned) pieces.
"""

import numpy as np

from hashlab import BinMap, Interval, build, descriptor_for, dyadic_decompose

# small output width so the numbers are readable
bm = BinMap(10, 16)
for h in [0, 6553, 6554, 65535]:
    print(f"h={h:5d} -> bin {bm.to_bin(h)}")

# every bin maps back to exactly the hash values that land in it
for d in range(10):
    iv = bm.bin_to_interval(d)
    assert bm.to_bin(iv.lo) == d and bm.to_bin(iv.hi - 1) == d
    print(f"bin {d}: [{iv.lo:5d}, {iv.hi:5d})  size {iv.size}")

# an arbitrary interval decomposes into at most 2*out_bits dyadic pieces
iv = Interval(700, 5000)
parts = dyadic_decompose(iv, 16)
print(f"\n[{iv.lo}, {iv.hi}) splits into {len(parts)} dyadic intervals:")
for p in parts:
    print(f"  [{p.lo:4d}, {p.hi:4d})  size {p.size}")
assert sum(p.size for p in parts) == iv.size

# binning a full 64-bit hash stream: counts come out near n/m
hf = build(descriptor_for("tab1perm", 64, 0x51))
bm64 = BinMap(10, 64)
bins = bm64.to_bin_array(hf.hash_array(np.arange(100_000, dtype=np.uint64)))
print("\ncounts over 10 bins:", np.bincount(bins.astype(np.int64), minlength=10))
