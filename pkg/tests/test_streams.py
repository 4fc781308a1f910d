"""Bottom-k sketches, merging, similarity, and the threshold counter.

The offline oracle for a bottom-k sketch is: deduplicate keys, sort the
(raw, key) pairs, take the first k. Sketches must match it for any offer
order and any duplication pattern.
"""

import numpy as np
import pytest

from hashlab import (
    BottomKSketch,
    InvalidParams,
    PowTwoSketch,
    SchemeDescriptor,
    SeedMismatch,
    Underfull,
    build,
    estimate_distinct_median,
    fraction_of,
    jaccard,
    merge_union,
    sketch_of,
    split_hash_bits,
    stream_distinct,
)


def oracle_bottom_k(pairs, k):
    # pairs: iterable of (key, raw); last write wins is irrelevant since a
    # key always carries one raw
    dedup = {}
    for key, raw in pairs:
        dedup[key] = raw
    return sorted((raw, key) for key, raw in dedup.items())[:k]


def test_fraction_of():
    assert fraction_of(0, 4) == 1 / 16
    assert fraction_of(15, 4) == 1.0
    assert fraction_of(7, 4) == 0.5


def test_split_hash_bits():
    assert split_hash_bits(0xAB, 4, 4) == (0xA, 0xB)
    assert split_hash_bits(0x12345678, 16, 16) == (0x1234, 0x5678)
    hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=0x31))
    h = hf(123456)
    top, bottom = split_hash_bits(h, 8, 56)
    assert (top << 56) | bottom == h


def test_sketch_matches_offline_oracle():
    rng = np.random.default_rng(20)
    k = 32
    n = 3000
    keys = rng.integers(0, 500, size=n, dtype=np.uint64)  # heavy duplication
    raw_of = {int(x): int(rng.integers(0, 1 << 20)) for x in set(keys.tolist())}
    raws = np.array([raw_of[int(x)] for x in keys], dtype=np.uint64)

    sk = BottomKSketch(k, 20)
    # interleave scalar offers and batches
    sk.offer(int(keys[0]), int(raws[0]))
    sk.offer_many(keys[1:1500], raws[1:1500])
    for x, r in zip(keys[1500:2000].tolist(), raws[1500:2000].tolist()):
        sk.offer(x, r)
    sk.offer_many(keys[2000:], raws[2000:])

    want = oracle_bottom_k(zip(keys.tolist(), raws.tolist()), k)
    assert sk.stored() == want
    assert sk.count == k
    assert sk.is_full
    assert sk.keys() == {key for _, key in want}


def test_underfull_path():
    sk = BottomKSketch(8, 16)
    for x in range(3):
        sk.offer(x, x * 100)
    assert sk.count == 3
    assert not sk.is_full
    with pytest.raises(Underfull) as exc:
        sk.estimate_distinct()
    assert exc.value.count == 3


def test_duplicate_keys_are_no_ops():
    sk = BottomKSketch(4, 16)
    for _ in range(10):
        sk.offer(42, 7)
    assert sk.stored() == [(7, 42)]
    sk.offer_many(np.full(10, 42, dtype=np.uint64), np.full(10, 7, dtype=np.uint64))
    assert sk.stored() == [(7, 42)]


def test_estimate_hand_values():
    sk = BottomKSketch(1, 1)
    sk.offer(5, 0)  # fraction (0+1)/2 = 0.5
    assert sk.estimate_distinct() == pytest.approx(2.0)

    sk = BottomKSketch(2, 2)
    sk.offer(1, 0)  # 0.25
    sk.offer(2, 1)  # 0.5
    assert sk.estimate_distinct() == pytest.approx(4.0)

    sk = BottomKSketch(3, 4)
    for key, raw in enumerate((1, 4, 6, 9, 12)):
        sk.offer(key, raw)
    assert sk.estimate_distinct() == pytest.approx(3 * 16 / 7)


def test_frequency_and_order_blindness():
    rng = np.random.default_rng(21)
    keys = rng.integers(0, 4000, size=6000, dtype=np.uint64)
    hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=0x32))
    raws = hf.hash_array(keys)

    a = BottomKSketch(64, 64, "t")
    a.offer_many(keys, raws)

    order = rng.permutation(len(keys))
    tripled_keys = np.concatenate([keys[order]] * 3)
    tripled_raws = np.concatenate([raws[order]] * 3)
    b = BottomKSketch(64, 64, "t")
    b.offer_many(tripled_keys, tripled_raws)

    assert a.to_bytes() == b.to_bytes()
    assert a.stored() == b.stored()


def test_serialization_round_trip():
    hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=0x33))
    keys = np.arange(5000, dtype=np.uint64)
    sk = sketch_of(hf, keys, 100)
    blob = sk.to_bytes()
    back = BottomKSketch.from_bytes(blob)
    assert back.k == sk.k
    assert back.ell == sk.ell
    assert back.digest == sk.digest
    assert back.stored() == sk.stored()
    assert back.to_bytes() == blob

    with pytest.raises(ValueError):
        BottomKSketch.from_bytes(b"NOPE" + blob[4:])
    with pytest.raises(ValueError):
        BottomKSketch.from_bytes(blob[:-1])
    with pytest.raises(ValueError):
        BottomKSketch.from_bytes(blob + b"\x00")


def test_serialization_of_underfull_sketch():
    sk = BottomKSketch(10, 8, "partial")
    sk.offer(1, 3)
    back = BottomKSketch.from_bytes(sk.to_bytes())
    assert back.stored() == [(3, 1)]
    assert back.count == 1


def test_merge_equals_union_sketch():
    hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=0x34))
    rng = np.random.default_rng(22)
    for trial in range(20):
        a_keys = rng.integers(0, 1 << 40, size=2000, dtype=np.uint64)
        b_keys = rng.integers(0, 1 << 40, size=1500, dtype=np.uint64)
        sa = sketch_of(hf, a_keys, 64)
        sb = sketch_of(hf, b_keys, 64)
        merged = merge_union(sa, sb)
        direct = sketch_of(hf, np.concatenate([a_keys, b_keys]), 64)
        assert merged.stored() == direct.stored()


def test_merge_laws():
    hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=0x35))
    rng = np.random.default_rng(23)
    ka = rng.integers(0, 1 << 30, size=500, dtype=np.uint64)
    kb = rng.integers(0, 1 << 30, size=500, dtype=np.uint64)
    kc = rng.integers(0, 1 << 30, size=500, dtype=np.uint64)
    sa, sb, sc = (sketch_of(hf, ks, 32) for ks in (ka, kb, kc))
    assert merge_union(sa, sa).stored() == sa.stored()
    assert merge_union(sa, sb).stored() == merge_union(sb, sa).stored()
    left = merge_union(merge_union(sa, sb), sc)
    right = merge_union(sa, merge_union(sb, sc))
    assert left.stored() == right.stored()
    empty = BottomKSketch(sa.k, sa.ell, sa.digest)
    assert merge_union(sa, empty).stored() == sa.stored()


def test_merge_rejects_mismatches():
    h1 = build(SchemeDescriptor("tab1perm", key_bits=64, seed=1))
    h2 = build(SchemeDescriptor("tab1perm", key_bits=64, seed=2))
    keys = np.arange(100, dtype=np.uint64)
    with pytest.raises(SeedMismatch):
        merge_union(sketch_of(h1, keys, 16), sketch_of(h2, keys, 16))
    with pytest.raises(SeedMismatch):
        merge_union(sketch_of(h1, keys, 16), sketch_of(h1, keys, 8))
    with pytest.raises(SeedMismatch):
        a = BottomKSketch(16, 32, "x")
        b = BottomKSketch(16, 64, "x")
        merge_union(a, b)


def test_jaccard_identical_and_disjoint():
    hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=0x36))
    a = np.arange(5000, dtype=np.uint64)
    b = np.arange(5000, 10000, dtype=np.uint64)
    sa = sketch_of(hf, a, 256)
    sb = sketch_of(hf, b, 256)
    assert jaccard(sa, sa) == 1.0
    assert jaccard(sa, sb) == 0.0
    assert jaccard(sa, sb) == jaccard(sb, sa)


def test_jaccard_planted_overlap():
    # |A n B| / |A u B| = 1/3 by construction
    n = 30000
    third = n // 3
    universe = np.arange(n, dtype=np.uint64)
    a = universe[: 2 * third]
    b = universe[third:]
    true_j = third / n
    errs = []
    for seed in range(5):
        hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=seed))
        est = jaccard(sketch_of(hf, a, 1024), sketch_of(hf, b, 1024))
        errs.append(abs(est - true_j))
    # sd of a single estimate is about 0.015 at k=1024
    assert min(errs) < 0.05
    assert sum(errs) / len(errs) < 0.08


def test_jaccard_underfull():
    hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=0x37))
    small = sketch_of(hf, np.arange(10, dtype=np.uint64), 256)
    big = sketch_of(hf, np.arange(5000, dtype=np.uint64), 256)
    with pytest.raises(Underfull):
        jaccard(small, big)


def test_sketch_of_metadata():
    hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=0x38))
    sk = sketch_of(hf, np.arange(10, dtype=np.uint64), 4)
    assert sk.ell == 64
    assert sk.digest == hf.descriptor.canonical()
    h32 = build(SchemeDescriptor("simpletab", key_bits=32, seed=0))
    assert sketch_of(h32, np.arange(10, dtype=np.uint64), 4).ell == 32
    assert sketch_of(hf, [], 4).count == 0


class TestPowTwo:
    def test_exact_below_capacity(self):
        sk = PowTwoSketch(16, 32)
        for x in range(10):
            sk.offer(x, x * 1000)
        assert sk.b == 0
        assert sk.estimate() == 10.0

    def test_all_hashes_above_half(self):
        sk = PowTwoSketch(1, 4)
        for key, raw in ((1, 8), (2, 9), (3, 12)):
            sk.offer(key, raw)
        assert sk.estimate() == 0.0

    def test_order_and_frequency_blind(self):
        rng = np.random.default_rng(24)
        keys = rng.integers(0, 3000, size=5000, dtype=np.uint64)
        hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=0x39))
        raws = hf.hash_array(keys)
        a = PowTwoSketch(64, 64)
        a.offer_many(keys, raws)
        b = PowTwoSketch(64, 64)
        order = rng.permutation(len(keys))
        b.offer_many(np.concatenate([keys[order]] * 2), np.concatenate([raws[order]] * 2))
        assert (a.b, a._kept) == (b.b, b._kept)
        assert a.estimate() == b.estimate()

    def test_accuracy(self):
        n = 100_000
        keys = np.arange(n, dtype=np.uint64)
        good = 0
        trials = 40
        for seed in range(trials):
            hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=seed))
            sk = PowTwoSketch(4096, 64)
            sk.offer_many(keys, hf.hash_array(keys))
            if abs(sk.estimate() - n) <= 0.1 * n:
                good += 1
        assert good >= 0.9 * trials

    def test_validation(self):
        with pytest.raises(InvalidParams):
            PowTwoSketch(0, 32)


class TestMedianEstimator:
    def test_parameter_resolution(self):
        with pytest.raises(InvalidParams):
            estimate_distinct_median(np.arange(10, dtype=np.uint64))
        with pytest.raises(InvalidParams):
            estimate_distinct_median(np.arange(10, dtype=np.uint64), k0=16)
        with pytest.raises(InvalidParams):
            estimate_distinct_median(np.arange(10, dtype=np.uint64), k0=0, r=1)

    def test_deterministic(self):
        keys = np.arange(3000, dtype=np.uint64)
        a = estimate_distinct_median(keys, k0=64, r=5, seed=7)
        b = estimate_distinct_median(keys, k0=64, r=5, seed=7)
        assert a == b
        c = estimate_distinct_median(keys, k0=64, r=5, seed=8)
        assert a != c  # different master seed, different sub-hashes

    def test_eps_delta_accuracy(self):
        # eps=0.25 -> k0=192, r from delta=0.05 -> 36 repetitions
        n = 10_000
        keys = np.arange(n, dtype=np.uint64)
        good = 0
        trials = 30
        for seed in range(trials):
            est = estimate_distinct_median(keys, eps=0.25, delta=0.05, seed=seed)
            if abs(est - n) <= 0.25 * n:
                good += 1
        assert good >= 0.9 * trials


def test_stream_distinct_exact_until_k():
    keys = np.arange(37, dtype=np.uint64)
    assert stream_distinct(keys, k=64) == 37.0
    est = stream_distinct(np.arange(50_000, dtype=np.uint64), k=1024, seed=3)
    assert abs(est - 50_000) < 0.2 * 50_000


def test_validation_bottom_k():
    with pytest.raises(InvalidParams):
        BottomKSketch(0, 16)
    with pytest.raises(InvalidParams):
        BottomKSketch(4, 0)
    with pytest.raises(InvalidParams):
        BottomKSketch(4, 65)


def test_estimation_error_tracks_a_random_control():
    # same failure-rate envelope as an ideal hash, within a factor of two
    from hashlab.lab import FullyRandomReference

    n = 20_000
    keys = np.arange(n, dtype=np.uint64)
    trials = 150
    for k in (256, 1024):
        eps = (6 * np.log(20) / k) ** 0.5
        tab_fail = ref_fail = 0
        for seed in range(trials):
            hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=seed))
            if abs(sketch_of(hf, keys, k).estimate_distinct() - n) > eps * n:
                tab_fail += 1
            ref = FullyRandomReference(64, seed)
            if abs(sketch_of(ref, keys, k).estimate_distinct() - n) > eps * n:
                ref_fail += 1
        assert tab_fail <= max(2 * ref_fail, 3)
