"""Throughput of every scheme on this machine.

Medians of 3 repeats over 2 million keys; the checksum pins the outputs so
runs are comparable. Absolute numbers are machine bound, the ordering is the
interesting part: tabulation schemes sit between multiply-shift and high
degree polynomials.
"""

from hashlab.lab import run_timing

SCHEMES = ["multishift", "simpletab", "twisted", "mixed",
           "tab1perm", "tabperm", "poly2", "poly100"]

rows = run_timing(SCHEMES, 64, 2_000_000, seed=1, repeats=3)
print(f"{'scheme':10s} {'ms':>9s} {'keys/sec':>13s}  checksum")
for r in rows:
    print(f"{r.scheme:10s} {r.ms:9.2f} {r.keys_per_sec:13.0f}  {r.checksum:016x}")

rows32 = run_timing(["simpletab", "tab1perm", "tabperm", "doubletab"],
                    32, 2_000_000, seed=1, repeats=3)
print("\n32-bit widths (doubletab only exists here):")
for r in rows32:
    print(f"{r.scheme:10s} {r.ms:9.2f} {r.keys_per_sec:13.0f}  {r.checksum:016x}")
