"""Workload generation, experiment runners, and CSV output."""

import io

import numpy as np
import pytest

from hashlab import InvalidParams, SchemeDescriptor, build
from hashlab.lab import (
    FullyRandomReference,
    TrialResult,
    Workload,
    cdf,
    cube_top_bit_predicate,
    gen_workload,
    perfect_split_fraction,
    run_quality,
    run_timing,
    simulated_perfect_fraction,
    trial_seeds,
    variance_check,
    write_cdf_csv,
    write_quality_csv,
    write_timing_csv,
)


# ------------------------------------------------------------------ workloads


def test_progression_workload():
    w = Workload("progression", key_bits=64, size=4, a=1)
    assert list(gen_workload(w)) == [0, 1, 2, 3]
    assert w.n == 4
    assert not w.stochastic
    assert w.label() == "progression a=1 n=4 kb=64"

    w32 = Workload("progression", key_bits=32, size=100, a=(1 << 31) + 1)
    keys = gen_workload(w32)
    assert keys.max() < 1 << 32
    assert len(set(keys.tolist())) == 100

    rand_step = Workload("progression", key_bits=64, size=10)
    assert rand_step.stochastic
    a_keys = gen_workload(rand_step, seed=1)
    b_keys = gen_workload(rand_step, seed=2)
    assert not np.array_equal(a_keys, b_keys)
    assert int(a_keys[1]) % 2 == 1  # drawn step is forced odd


def test_random_workload():
    w = Workload("random", key_bits=64, size=5000)
    keys = gen_workload(w, seed=3)
    assert len(keys) == 5000
    assert len(np.unique(keys)) == 5000
    assert w.stochastic
    again = gen_workload(w, seed=3)
    assert np.array_equal(keys, again)
    other = gen_workload(w, seed=4)
    assert not np.array_equal(keys, other)

    w32 = Workload("random", key_bits=32, size=3000)
    k32 = gen_workload(w32, seed=5)
    assert k32.max() < 1 << 32
    assert len(np.unique(k32)) == 3000


def test_cube_workload():
    w = Workload("cube", key_bits=64, b1_dims=7, tail_bits=6)
    assert w.n == 8192
    assert w.label() == "cube b1=7 tail=6 kb=64"
    assert not w.stochastic
    keys = gen_workload(w)
    assert len(keys) == 8192
    assert len(np.unique(keys)) == 8192
    for x in (int(v) for v in keys[:: 257]):
        for i in range(7):
            assert (x >> (8 * i)) & 0xFF in (0, 1)
        assert (x >> 56) & 0xFF < 64  # tail character, nothing above it


def test_collapse_workload():
    w = Workload("collapse", key_bits=32, k=2, c=3)
    assert w.n == 1024
    keys = gen_workload(w)
    assert len(keys) == len(np.unique(keys)) == 1024
    for x in (int(v) for v in keys):
        assert (x >> 0) & 0xFF < 2
        assert (x >> 8) & 0xFF < 2
    assert {(int(x) >> 16) & 0xFF for x in keys} == set(range(256))
    assert w.label() == "collapse k=2 c=3 kb=32"

    default_c = Workload("collapse", key_bits=64, k=3)
    assert default_c.n == 3 ** 7 * 256


def test_workload_validation():
    with pytest.raises(InvalidParams):
        Workload("diagonal", size=5)
    with pytest.raises(InvalidParams):
        Workload("random", key_bits=16, size=5)
    with pytest.raises(InvalidParams):
        Workload("random", size=0)
    with pytest.raises(InvalidParams):
        Workload("progression", size=10, a=4)
    with pytest.raises(InvalidParams):
        Workload("cube", key_bits=64, b1_dims=8)  # needs 9 characters
    with pytest.raises(InvalidParams):
        Workload("cube", b1_dims=0)
    with pytest.raises(InvalidParams):
        Workload("cube", tail_bits=9)
    with pytest.raises(InvalidParams):
        Workload("collapse", key_bits=32, c=1)
    with pytest.raises(InvalidParams):
        Workload("collapse", key_bits=32, c=5)
    with pytest.raises(InvalidParams):
        Workload("collapse", k=0)
    with pytest.raises(InvalidParams):
        Workload("collapse", k=257)


def test_trial_seeds():
    seeds = trial_seeds(9, "quality", 50)
    assert len(seeds) == 50
    assert len(set(seeds)) == 50
    assert all(0 <= s < (1 << 256) for s in seeds)
    assert seeds == trial_seeds(9, "quality", 50)
    assert seeds != trial_seeds(9, "variance", 50)
    assert seeds[:10] == trial_seeds(9, "quality", 10)


# ------------------------------------------------------------------- quality


def test_run_quality_shapes_and_conservation():
    w = Workload("random", key_bits=64, size=100)
    results = run_quality("tab1perm", w, m=4, trials=3, seed=1)
    assert [r.trial for r in results] == [0, 1, 2]
    for r in results:
        assert r.scheme == "tab1perm"
        assert len(r.bin_counts) == 4
        assert sum(r.bin_counts) == 100
        assert r.workload == w.label()
        assert r.digest.startswith("tab1perm kb=64")
        assert r.focal_count == r.bin_counts[0]
    # distinct per-trial hash functions
    assert len({r.digest for r in results}) == 3


def test_run_quality_single_bin():
    w = Workload("progression", key_bits=64, size=57, a=3)
    (r,) = run_quality("simpletab", w, m=1, trials=1)
    assert r.bin_counts == (57,)


def test_run_quality_reference_and_poly():
    w = Workload("random", key_bits=64, size=64)
    (r,) = run_quality("reference", w, m=2, trials=1)
    assert r.digest.startswith("reference")
    (rp,) = run_quality("poly", w, m=2, trials=1, k=2)
    assert "k=2" in rp.digest
    with pytest.raises(InvalidParams):
        run_quality("simpletab", w, m=2, trials=0)


def test_run_quality_fixed_workload_reused():
    w = Workload("progression", key_bits=64, size=200, a=9)
    results = run_quality("tab1perm", w, m=2, trials=4, seed=5)
    # same keys per trial, different hash functions: counts move around
    assert all(sum(r.bin_counts) == 200 for r in results)
    assert len({r.bin_counts for r in results}) > 1


def test_run_quality_parallel_matches_serial():
    w = Workload("random", key_bits=64, size=300)
    serial = run_quality("tabperm", w, m=8, trials=6, seed=2, jobs=1)
    parallel = run_quality("tabperm", w, m=8, trials=6, seed=2, jobs=2)
    assert serial == parallel


# ----------------------------------------------------------------------- cdf


def test_cdf_hand_values():
    def tr(i, focal):
        return TrialResult(i, "s", "d", "w", (focal,))

    assert cdf([tr(0, 7), tr(1, 7), tr(2, 7)]) == [(7, 1.0)]
    assert cdf([tr(0, 5), tr(1, 3)]) == [(3, 0.5), (5, 1.0)]
    with pytest.raises(InvalidParams):
        cdf([])


def test_cdf_matches_rank_oracle():
    rng = np.random.default_rng(6)
    vals = rng.integers(0, 50, size=1000)
    results = [TrialResult(i, "s", "d", "w", (int(v),)) for i, v in enumerate(vals)]
    points = cdf(results)
    counts = [c for c, _ in points]
    assert counts == sorted(set(int(v) for v in vals))
    for c, frac in points:
        assert frac == pytest.approx(np.mean(vals <= c))
    assert points[-1][1] == 1.0
    fracs = [f for _, f in points]
    assert fracs == sorted(fracs)


def test_cdf_focal_bin_selector():
    results = [
        TrialResult(0, "s", "d", "w", (1, 9)),
        TrialResult(1, "s", "d", "w", (2, 9)),
    ]
    assert cdf(results, focal_bin=1) == [(9, 1.0)]


def test_perfect_split_fraction():
    results = [TrialResult(i, "s", "d", "w", (v,)) for i, v in enumerate((5, 5, 6))]
    assert perfect_split_fraction(results, 5) == pytest.approx(2 / 3)
    assert perfect_split_fraction(results, 7) == 0.0


def test_simulated_perfect_fraction():
    from scipy import stats

    with pytest.raises(InvalidParams):
        simulated_perfect_fraction(10, 3, 100)
    trials = 200_000
    got = simulated_perfect_fraction(50_000, 16, trials, seed=1)
    want = float(stats.binom.pmf(3125, 50_000, 1 / 16))
    sd = (want * (1 - want) / trials) ** 0.5
    assert abs(got - want) < 5 * sd


# ----------------------------------------------------------- cube predicate


def test_cube_predicate_validation():
    hf = build(SchemeDescriptor("simpletab", key_bits=64, seed=0))
    with pytest.raises(InvalidParams):
        cube_top_bit_predicate(hf, Workload("random", size=5))


def test_cube_predicate_forces_even_split():
    from hashlab import BinMap

    w = Workload("cube", key_bits=64, b1_dims=7, tail_bits=6)
    keys = gen_workload(w)
    bm = BinMap(2, 64)
    hits = 0
    for seed in range(200):
        hf = build(SchemeDescriptor("simpletab", key_bits=64, seed=seed))
        if cube_top_bit_predicate(hf, w):
            hits += 1
            bins = bm.to_bin_array(hf.hash_array(keys))
            assert int(np.count_nonzero(bins == 0)) == 4096
    # any of 7 dimensions hits the top bit with chance 1/2 each
    assert hits >= 0.95 * 200


# --------------------------------------------------------------------- timing


def test_run_timing_basics():
    with pytest.raises(InvalidParams):
        run_timing(["simpletab"], 64, 0)
    rows = run_timing(["simpletab", "multishift"], 64, 1000, seed=4, repeats=2)
    assert [r.scheme for r in rows] == ["simpletab", "multishift"]
    for r in rows:
        assert r.key_bits == 64 and r.n == 1000
        assert r.ms > 0
        assert r.keys_per_sec == pytest.approx(1000 / (r.ms / 1e3))
    tiny = run_timing(["poly2"], 32, 1, seed=4, repeats=1)
    assert tiny[0].n == 1


def test_run_timing_checksum_deterministic():
    a = run_timing(["tab1perm"], 64, 2000, seed=7, repeats=1)[0]
    b = run_timing(["tab1perm"], 64, 2000, seed=7, repeats=3)[0]
    assert a.checksum == b.checksum
    hf = build(SchemeDescriptor("tab1perm", key_bits=64, seed=7))
    keys = gen_workload(Workload("random", key_bits=64, size=2000), 7)
    assert a.checksum == int(np.bitwise_xor.reduce(hf.hash_array(keys)))


# ------------------------------------------------------------------- variance


def test_variance_check():
    with pytest.raises(InvalidParams):
        variance_check("simpletab", 100, 4, trials=99)
    assert variance_check("simpletab", 1000, 1, trials=100) == 0.0
    z_ref = variance_check("reference", 2000, 16, trials=200, seed=1)
    assert abs(z_ref) <= 5.0
    z_tab = variance_check("simpletab", 2000, 16, trials=200, seed=1)
    assert abs(z_tab) <= 5.0


# ----------------------------------------------------------------------- CSV


def quality_csv_text(seed):
    w = Workload("random", key_bits=64, size=50)
    results = run_quality("tab1perm", w, m=4, trials=5, seed=seed)
    out = io.StringIO()
    write_quality_csv(out, results, config=f"tab1perm {w.label()} m=4", seed=seed)
    return out.getvalue()


def test_quality_csv_layout_and_determinism():
    text = quality_csv_text(3)
    lines = text.splitlines()
    assert lines[0].startswith("# hashlab ")
    assert lines[1] == "# config: tab1perm random n=50 kb=64 m=4"
    assert lines[2] == "# seed: 0x3"
    assert lines[3] == "trial,scheme,workload,focal_count"
    assert len(lines) == 4 + 5
    assert lines[4].startswith("0,tab1perm,")
    assert text == quality_csv_text(3)
    assert text != quality_csv_text(4)


def test_cdf_csv_layout():
    out = io.StringIO()
    write_cdf_csv(out, [(3, 0.5), (5, 1.0)], config="demo", seed=0)
    lines = out.getvalue().splitlines()
    assert lines[3] == "count,cum_frac"
    assert lines[4] == "3,0.5"
    assert lines[5] == "5,1.0"


def test_timing_csv_layout(tmp_path):
    rows = run_timing(["simpletab"], 64, 500, seed=2, repeats=1)
    path = tmp_path / "t.csv"
    write_timing_csv(path, rows, config="bench", seed=2)
    lines = path.read_text().splitlines()
    assert lines[3] == "scheme,bits,n,ms,keys_per_sec,checksum"
    cells = lines[4].split(",")
    assert cells[0] == "simpletab"
    assert cells[1] == "64" and cells[2] == "500"
    float(cells[3])
    float(cells[4])
    assert cells[5].startswith("0x") and len(cells[5]) == 18


def test_reference_hasher_is_consistent():
    ref = FullyRandomReference(64, seed=5)
    keys = np.array([10, 20, 10, 30], dtype=np.uint64)
    first = ref.hash_array(keys)
    assert first[0] == first[2]
    again = ref.hash_array(keys[:2])
    assert int(again[0]) == int(first[0])
    assert int(ref(20)) == int(first[1])
    r32 = FullyRandomReference(32, seed=5)
    assert int(r32.hash_array(np.array([1], dtype=np.uint64))[0]) < 1 << 32
