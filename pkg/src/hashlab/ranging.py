"""Mapping ell-bit hash values onto m bins and onto dyadic intervals.

The default bin rule is multiply-shift: bin(h) = (h * m) >> ell, computed on
the double-width product. Its preimages are the half-open intervals
[ceil(m_inv * d), ceil(m_inv * (d+1))) with m_inv = 2^ell / m, so bins form a
partition into consecutive runs whose sizes differ by at most one. A plain
mod-m rule is kept for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams

_MODES = ("shiftmul", "mod")


@dataclass(frozen=True)
class Interval:
    """Half-open interval [lo, hi) of hash values."""

    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise InvalidParams("need 0 <= lo <= hi")

    @property
    def size(self) -> int:
        return self.hi - self.lo

    def __contains__(self, h: int) -> bool:
        return self.lo <= h < self.hi


def in_interval(h: int, iv: Interval) -> bool:
    return iv.lo <= h < iv.hi


class BinMap:
    """Maps ell-bit hash values to bin indices in [m]."""

    def __init__(self, bins: int, out_bits: int, mode: str = "shiftmul"):
        if mode not in _MODES:
            raise InvalidParams(f"mode must be one of {_MODES}")
        if not 1 <= bins <= (1 << out_bits):
            raise InvalidParams("need 1 <= bins <= 2^out_bits")
        if not 1 <= out_bits <= 64:
            raise InvalidParams("out_bits must be in 1..64")
        self.bins = bins
        self.out_bits = out_bits
        self.mode = mode

    def to_bin(self, h: int) -> int:
        h = int(h)
        if not 0 <= h < (1 << self.out_bits):
            raise InvalidParams("hash value wider than out_bits")
        if self.mode == "mod":
            return h % self.bins
        return (h * self.bins) >> self.out_bits

    def to_bin_array(self, hs: np.ndarray) -> np.ndarray:
        hs = np.asarray(hs, dtype=np.uint64)
        m = self.bins
        ell = self.out_bits
        if self.mode == "mod":
            return hs % np.uint64(m)
        if ell + (m - 1).bit_length() <= 64:
            # product fits in uint64
            return (hs * np.uint64(m)) >> np.uint64(ell)
        # full 128-bit product, then shift: (hi << (64-ell)) | (lo >> ell)
        hi = _mulhi64(np.uint64(m), hs)
        lo = hs * np.uint64(m)
        if ell == 64:
            return hi
        return (hi << np.uint64(64 - ell)) | (lo >> np.uint64(ell))

    def bin_to_interval(self, d: int) -> Interval:
        """Exact preimage of bin d under the multiply-shift rule:
        to_bin(h) == d iff h in the returned interval."""
        if self.mode != "shiftmul":
            raise InvalidParams("preimage intervals exist only for shiftmul")
        if not 0 <= d < self.bins:
            raise InvalidParams("bin index out of range")
        r = 1 << self.out_bits
        m = self.bins
        lo = -(-r * d // m)  # ceil division
        hi = -(-r * (d + 1) // m)
        return Interval(lo, hi)


def _mulhi64(a: np.uint64, x: np.ndarray) -> np.ndarray:
    m32 = np.uint64(0xFFFFFFFF)
    al = np.uint64(int(a) & 0xFFFFFFFF)
    ah = np.uint64(int(a) >> 32)
    xl = x & m32
    xh = x >> np.uint64(32)
    t1 = al * xl
    t2 = ah * xl + (t1 >> np.uint64(32))
    t3 = al * xh + (t2 & m32)
    return ah * xh + (t2 >> np.uint64(32)) + (t3 >> np.uint64(32))


def dyadic_decompose(iv: Interval, ell: int) -> list[Interval]:
    """Partition [lo, hi) into aligned power-of-two pieces [q*2^h, (q+1)*2^h),
    greedily taking the largest aligned piece that fits. The result is sorted,
    disjoint, covers iv exactly, and uses at most two pieces of each size."""
    if iv.hi > (1 << ell):
        raise InvalidParams("interval exceeds 2^ell")
    pieces = []
    lo, hi = iv.lo, iv.hi
    while lo < hi:
        align = lo & -lo if lo else 1 << ell
        biggest = 1 << ((hi - lo).bit_length() - 1)
        size = min(align, biggest)
        pieces.append(Interval(lo, lo + size))
        lo += size
    return pieces


def weight_in_interval(hf, keys, weights, iv: Interval) -> float:
    """Total weight of keys whose hash lands in iv."""
    keys = np.asarray(keys, dtype=np.uint64)
    weights = np.asarray(weights, dtype=np.float64)
    if keys.shape != weights.shape:
        raise InvalidParams("keys and weights must align")
    if len(keys) == 0:
        return 0.0
    hs = hf.hash_array(keys)
    sel = hs >= np.uint64(iv.lo)
    if iv.hi < (1 << 64):
        sel &= hs < np.uint64(iv.hi)
    return float(weights[sel].sum())
