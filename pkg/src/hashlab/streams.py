"""Streaming sketches over hashed keys: bottom-k distinct counting, bottom-k
set similarity, and the power-of-two-threshold counter.

Hash values are ell-bit integers ("raw"); as fractions they are read as
(raw + 1) / 2^ell in (0, 1], which keeps the k-th smallest value nonzero and
preserves order. All internal comparisons use the raw integers, with ties
broken by key, so every operation is deterministic and independent of stream
order and of duplicate frequencies.
"""

from __future__ import annotations

import math
import statistics
import struct

import numpy as np

from .errors import InvalidParams, SeedMismatch, Underfull
from .hashers import build, descriptor_for

_MAGIC = b"HLSK1"


def fraction_of(raw: int, ell: int) -> float:
    """Map an ell-bit hash into (0, 1]."""
    return (int(raw) + 1) / (1 << ell)


def split_hash_bits(h: int, ell0: int, ell1: int) -> tuple[int, int]:
    """Split an (ell0+ell1)-bit hash into (top ell0 bits, bottom ell1 bits).

    The bottom part indexes hash tables; with tab1perm those bits come
    straight from the underlying simple tabulation, so reusing them does not
    disturb the permuted top part."""
    h = int(h)
    return h >> ell1, h & ((1 << ell1) - 1)


class BottomKSketch:
    """The k smallest distinct hash values seen, with their keys.

    Appends are O(1) amortized: entries accumulate in a buffer of up to 2k
    and are compacted to the k smallest by quickselect. Duplicate keys are
    detected through an open-addressing table indexed by the low bits of the
    raw hash. Once full, anything hashing above the current k-th smallest is
    dropped immediately.
    """

    def __init__(self, k: int, ell: int, digest: str = ""):
        if k < 1:
            raise InvalidParams("k must be >= 1")
        if not 1 <= ell <= 64:
            raise InvalidParams("ell must be in 1..64")
        self.k = k
        self.ell = ell
        self.digest = digest
        self._buf: list[tuple[int, int]] = []  # (raw, key), unordered
        self._cut: tuple[int, int] | None = None  # k-th smallest once full
        self._slot_bits = max(1, (4 * k - 1).bit_length())
        self._table = np.full(1 << self._slot_bits, -1, dtype=np.int64)

    # -- membership table ---------------------------------------------------

    def _probe(self, raw: int, key: int) -> int:
        """Return slot index where key sits or the first empty slot."""
        mask = (1 << self._slot_bits) - 1
        slot = raw & mask
        table = self._table
        buf = self._buf
        while True:
            idx = int(table[slot])
            if idx < 0 or buf[idx][1] == key:
                return slot
            slot = (slot + 1) & mask

    def _rebuild_table(self) -> None:
        self._table.fill(-1)
        for i, (raw, key) in enumerate(self._buf):
            self._table[self._probe(raw, key)] = i

    def _compact(self) -> None:
        if len(self._buf) <= self.k:
            return
        self._buf.sort()
        del self._buf[self.k :]
        self._cut = self._buf[-1]
        self._rebuild_table()

    # -- updates ------------------------------------------------------------

    def offer(self, key: int, raw: int) -> None:
        """Account for one stream element; duplicates are no-ops."""
        key = int(key)
        raw = int(raw)
        if self._cut is not None and (raw, key) > self._cut:
            return
        slot = self._probe(raw, key)
        if self._table[slot] >= 0:
            return
        self._buf.append((raw, key))
        self._table[slot] = len(self._buf) - 1
        if len(self._buf) >= 2 * self.k:
            self._compact()

    def offer_many(self, keys, raws) -> None:
        keys = np.asarray(keys, dtype=np.uint64)
        raws = np.asarray(raws, dtype=np.uint64)
        if self._cut is not None:
            cr, ck = self._cut
            sel = (raws < np.uint64(cr)) | (
                (raws == np.uint64(cr)) & (keys <= np.uint64(ck))
            )
            keys = keys[sel]
            raws = raws[sel]
        for key, raw in zip(keys.tolist(), raws.tolist()):
            self.offer(key, raw)

    # -- queries ------------------------------------------------------------

    @property
    def count(self) -> int:
        """Distinct keys the sketch retains: k once full, fewer before."""
        return min(len(self._buf), self.k)

    @property
    def is_full(self) -> bool:
        return len(self._buf) >= self.k

    def stored(self) -> list[tuple[int, int]]:
        """The k smallest (raw, key) pairs seen, sorted ascending."""
        self._compact()
        return sorted(self._buf)

    def fractions(self) -> list[float]:
        return [fraction_of(raw, self.ell) for raw, _ in self.stored()]

    def keys(self) -> set[int]:
        return {key for _, key in self.stored()}

    def estimate_distinct(self) -> float:
        """k / h_(k) where h_(k) is the k-th smallest stored fraction."""
        entries = self.stored()
        if len(entries) < self.k:
            raise Underfull(len(entries))
        raw_k = entries[-1][0]
        return self.k * (1 << self.ell) / (raw_k + 1)

    # -- serialization ------------------------------------------------------

    def to_bytes(self) -> bytes:
        """Canonical encoding: header, then sorted raw hashes, then keys."""
        entries = self.stored()
        tag = self.digest.encode("utf-8")
        head = _MAGIC + struct.pack(
            "<IBH", self.k, self.ell, len(tag)
        ) + tag + struct.pack("<I", len(entries))
        raws = np.array([r for r, _ in entries], dtype="<u8").tobytes()
        keys = np.array([x for _, x in entries], dtype="<u8").tobytes()
        return head + raws + keys

    @classmethod
    def from_bytes(cls, data: bytes) -> "BottomKSketch":
        if data[:5] != _MAGIC:
            raise ValueError("bad sketch magic")
        k, ell, taglen = struct.unpack_from("<IBH", data, 5)
        off = 12
        tag = data[off : off + taglen].decode("utf-8")
        off += taglen
        (count,) = struct.unpack_from("<I", data, off)
        off += 4
        need = off + 16 * count
        if len(data) != need:
            raise ValueError("sketch payload truncated or oversized")
        raws = np.frombuffer(data, dtype="<u8", count=count, offset=off)
        keys = np.frombuffer(data, dtype="<u8", count=count, offset=off + 8 * count)
        sk = cls(k, ell, tag)
        sk.offer_many(keys, raws)
        return sk


def sketch_of(hf, keys, k: int) -> BottomKSketch:
    """Build a full sketch of the distinct keys in `keys` under hf."""
    sk = BottomKSketch(k, hf.out_bits, hf.descriptor.canonical())
    keys = np.asarray(keys, dtype=np.uint64)
    if len(keys):
        sk.offer_many(keys, hf.hash_array(keys))
    return sk


def _compatible(a: BottomKSketch, b: BottomKSketch) -> None:
    if a.k != b.k or a.ell != b.ell or a.digest != b.digest:
        raise SeedMismatch(
            "sketches disagree on k, hash width, or hash function identity"
        )


def merge_union(a: BottomKSketch, b: BottomKSketch) -> BottomKSketch:
    """Sketch of the union: bottom-k of the two stored sets combined.

    Because both sides hash with the same function, the k smallest of the
    union's distinct hashes all appear in one of the two stored sets, so the
    merge is exact."""
    _compatible(a, b)
    out = BottomKSketch(a.k, a.ell, a.digest)
    for raw, key in a.stored():
        out.offer(key, raw)
    for raw, key in b.stored():
        out.offer(key, raw)
    return out


def jaccard(a: BottomKSketch, b: BottomKSketch) -> float:
    """|MIN_k(A u B) n MIN_k(A) n MIN_k(B)| / k."""
    _compatible(a, b)
    for sk in (a, b):
        if len(sk.stored()) < sk.k:
            raise Underfull(len(sk.stored()))
    union = merge_union(a, b)
    inter = union.keys() & a.keys() & b.keys()
    return len(inter) / a.k


class PowTwoSketch:
    """Keep keys whose hash fraction is below 1/2^b, doubling the threshold
    (incrementing b) whenever more than k are kept; estimate = 2^b * kept."""

    def __init__(self, k: int, ell: int):
        if k < 1:
            raise InvalidParams("k must be >= 1")
        self.k = k
        self.ell = ell
        self.b = 0
        self._kept: dict[int, int] = {}  # key -> raw

    def _threshold(self) -> int:
        return 1 << (self.ell - self.b) if self.b <= self.ell else 0

    def _shrink(self) -> None:
        while len(self._kept) > self.k:
            self.b += 1
            t = self._threshold()
            self._kept = {key: raw for key, raw in self._kept.items() if raw < t}

    def offer(self, key: int, raw: int) -> None:
        if int(raw) < self._threshold():
            self._kept[int(key)] = int(raw)
            self._shrink()

    def offer_many(self, keys, raws) -> None:
        keys = np.asarray(keys, dtype=np.uint64)
        raws = np.asarray(raws, dtype=np.uint64)
        t = self._threshold()
        if t <= (1 << 64) - 1:
            sel = raws < np.uint64(t)
            keys = keys[sel]
            raws = raws[sel]
        for key, raw in zip(keys.tolist(), raws.tolist()):
            self.offer(key, raw)

    def estimate(self) -> float:
        return float((1 << self.b) * len(self._kept))


def estimate_distinct_median(
    keys,
    k0: int | None = None,
    r: int | None = None,
    *,
    eps: float | None = None,
    delta: float | None = None,
    scheme: str = "tab1perm",
    key_bits: int = 64,
    seed: int = 0,
) -> float:
    """Median of r independent bottom-k0 estimates, each under its own hash
    function derived from the master seed. Defaults: k0 = ceil(12/eps^2),
    r = ceil(12 ln(1/delta))."""
    from .seeding import make_generator

    if k0 is None:
        if eps is None:
            raise InvalidParams("need k0 or eps")
        k0 = math.ceil(12 / (eps * eps))
    if r is None:
        if delta is None:
            raise InvalidParams("need r or delta")
        r = math.ceil(12 * math.log(1 / delta))
    if k0 < 1 or r < 1:
        raise InvalidParams("k0 and r must be >= 1")
    gen = make_generator(seed, "median")
    words = gen.next_words64(4 * r)
    keys = np.asarray(keys, dtype=np.uint64)
    estimates = []
    for i in range(r):
        sub = sum(int(words[4 * i + j]) << (64 * j) for j in range(4))
        hf = build(descriptor_for(scheme, key_bits, sub))
        estimates.append(sketch_of(hf, keys, k0).estimate_distinct())
    return float(statistics.median(estimates))


def stream_distinct(
    keys,
    k: int,
    *,
    scheme: str = "tab1perm",
    key_bits: int = 64,
    seed: int = 0,
) -> float:
    """One-shot distinct-count estimate; exact count when fewer than k."""
    hf = build(descriptor_for(scheme, key_bits, seed))
    sk = sketch_of(hf, keys, k)
    try:
        return sk.estimate_distinct()
    except Underfull as uf:
        return float(uf.count)
