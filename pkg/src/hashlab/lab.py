"""Experiment harness: structured workloads, bin-count quality trials with
CDF output, a timing harness, and variance checks against the 2-independent
prediction.

Reproducibility contract: every experiment is a pure function of (master
seed, config). Per-trial seeds come from one generator stream tagged
"lab:<experiment>", four 64-bit words per trial; stochastic workloads are
regenerated per trial from that trial's seed. The focal bin is bin 0.
"""

from __future__ import annotations

import csv
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import InvalidParams
from .hashers import build, descriptor_for
from .ranging import BinMap
from .seeding import make_generator

_WORKLOAD_KINDS = ("random", "progression", "cube", "collapse")


@dataclass(frozen=True)
class Workload:
    """A reproducible key-set recipe.

    kinds:
      random       `size` distinct uniform keys
      progression  {a * i mod 2^key_bits : i < size}; a random odd when None
      cube         keys whose first b1_dims characters each take bit values
                   {0, 1} and whose next character runs over [2^tail_bits]
      collapse     keys with the first c-1 characters in [k] and the last
                   character running over the full 8-bit alphabet
    """

    kind: str
    key_bits: int = 64
    size: int = 0
    a: int | None = None
    b1_dims: int = 7
    tail_bits: int = 6
    k: int = 2
    c: int | None = None

    def __post_init__(self):
        if self.kind not in _WORKLOAD_KINDS:
            raise InvalidParams(f"unknown workload kind {self.kind!r}")
        if self.key_bits not in (32, 64):
            raise InvalidParams("key_bits must be 32 or 64")
        if self.kind in ("random", "progression"):
            if self.size < 1:
                raise InvalidParams("size must be >= 1")
            if self.a is not None and self.a % 2 == 0:
                raise InvalidParams("progression step must be odd")
        elif self.kind == "cube":
            if self.b1_dims < 1 or self.tail_bits < 1 or self.tail_bits > 8:
                raise InvalidParams("need b1_dims >= 1 and 1 <= tail_bits <= 8")
            if 8 * (self.b1_dims + 1) > self.key_bits:
                raise InvalidParams("cube does not fit in key_bits")
        else:
            c = self.c if self.c is not None else self.key_bits // 8
            if c < 2 or 8 * c > self.key_bits:
                raise InvalidParams("collapse needs 2 <= c <= key_bits/8")
            if not 1 <= self.k <= 256:
                raise InvalidParams("collapse k must be in 1..256")

    @property
    def n(self) -> int:
        if self.kind in ("random", "progression"):
            return self.size
        if self.kind == "cube":
            return (1 << self.b1_dims) << self.tail_bits
        c = self.c if self.c is not None else self.key_bits // 8
        return self.k ** (c - 1) * 256

    @property
    def stochastic(self) -> bool:
        """True when the key set itself depends on the trial seed."""
        return self.kind == "random" or (self.kind == "progression" and self.a is None)

    def label(self) -> str:
        if self.kind == "random":
            return f"random n={self.size} kb={self.key_bits}"
        if self.kind == "progression":
            a = "rand" if self.a is None else str(self.a)
            return f"progression a={a} n={self.size} kb={self.key_bits}"
        if self.kind == "cube":
            return f"cube b1={self.b1_dims} tail={self.tail_bits} kb={self.key_bits}"
        c = self.c if self.c is not None else self.key_bits // 8
        return f"collapse k={self.k} c={c} kb={self.key_bits}"


def gen_workload(w: Workload, seed: int = 0) -> np.ndarray:
    """Materialize the key set; exactly reproducible from (fields, seed)."""
    if w.kind == "random":
        gen = make_generator(seed, "workload")
        keys = np.frombuffer(gen.next_bytes(8 * w.size), dtype="<u8").copy()
        if w.key_bits < 64:
            keys >>= np.uint64(64 - w.key_bits)
        keys = np.unique(keys)
        while len(keys) < w.size:  # top up after duplicate removal
            extra = np.frombuffer(gen.next_bytes(8 * (w.size - len(keys))), dtype="<u8")
            extra = extra.copy()
            if w.key_bits < 64:
                extra >>= np.uint64(64 - w.key_bits)
            keys = np.unique(np.concatenate([keys, extra]))
        return keys[: w.size]
    if w.kind == "progression":
        a = w.a
        if a is None:
            gen = make_generator(seed, "workload")
            a = gen.next_word(w.key_bits) | 1
        keys = np.arange(w.size, dtype=np.uint64) * np.uint64(a)
        if w.key_bits < 64:
            keys &= np.uint64((1 << w.key_bits) - 1)
        return keys
    if w.kind == "cube":
        dims = np.arange(1 << w.b1_dims, dtype=np.uint64)
        corner = np.zeros_like(dims)
        for i in range(w.b1_dims):  # spread bit i of the index to character i
            corner |= ((dims >> np.uint64(i)) & np.uint64(1)) << np.uint64(8 * i)
        tail = np.arange(1 << w.tail_bits, dtype=np.uint64) << np.uint64(8 * w.b1_dims)
        return (corner[:, None] | tail[None, :]).ravel()
    c = w.c if w.c is not None else w.key_bits // 8
    lead = np.zeros(1, dtype=np.uint64)
    for i in range(c - 1):
        vals = np.arange(w.k, dtype=np.uint64) << np.uint64(8 * i)
        lead = (lead[:, None] | vals[None, :]).ravel()
    last = np.arange(256, dtype=np.uint64) << np.uint64(8 * (c - 1))
    return (lead[:, None] | last[None, :]).ravel()


class _RefDescriptor:
    def __init__(self, key_bits: int, seed: int):
        self.key_bits = key_bits
        self.seed = seed

    def canonical(self) -> str:
        return f"reference kb={self.key_bits} seed=0x{self.seed:x}"


class FullyRandomReference:
    """Idealized fully random hash function for baseline comparisons.

    Values are drawn lazily from a seeded PRNG; repeated keys always map to
    the value first drawn for them, so it behaves as one consistent random
    function within a run."""

    def __init__(self, key_bits: int = 64, seed: int = 0, out_bits: int | None = None):
        self.descriptor = _RefDescriptor(key_bits, seed)
        self.key_bits = key_bits
        self.out_bits = out_bits if out_bits is not None else key_bits
        self._rng = np.random.default_rng(seed)
        self._known_keys = np.empty(0, dtype=np.uint64)
        self._known_raws = np.empty(0, dtype=np.uint64)

    def _draw(self, count: int) -> np.ndarray:
        if self.out_bits == 64:
            return self._rng.integers(0, (1 << 64) - 1, size=count,
                                      dtype=np.uint64, endpoint=True)
        return self._rng.integers(0, 1 << self.out_bits, size=count, dtype=np.uint64)

    def hash_array(self, keys) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.uint64)
        uniq, inv = np.unique(keys, return_inverse=True)
        pos = np.searchsorted(self._known_keys, uniq)
        pos_c = np.minimum(pos, max(len(self._known_keys) - 1, 0))
        found = (
            (pos < len(self._known_keys)) & (self._known_keys[pos_c] == uniq)
            if len(self._known_keys)
            else np.zeros(len(uniq), dtype=bool)
        )
        new = uniq[~found]
        if len(new):  # assign fresh draws in sorted-key order
            draws = self._draw(len(new))
            merged_keys = np.concatenate([self._known_keys, new])
            merged_raws = np.concatenate([self._known_raws, draws])
            order = np.argsort(merged_keys, kind="stable")
            self._known_keys = merged_keys[order]
            self._known_raws = merged_raws[order]
        pos = np.searchsorted(self._known_keys, uniq)
        return self._known_raws[pos][inv]

    def __call__(self, x: int) -> int:
        return int(self.hash_array(np.array([x], dtype=np.uint64))[0])


def _hasher_for(scheme: str, key_bits: int, seed: int, k: int | None = None):
    if scheme == "reference":
        return FullyRandomReference(key_bits, seed)
    return build(descriptor_for(scheme, key_bits, seed, k))


def trial_seeds(seed: int, experiment: str, trials: int) -> list[int]:
    """Per-trial 256-bit seeds: four words each from one tagged stream."""
    gen = make_generator(seed, "lab:" + experiment)
    words = gen.next_words64(4 * trials)
    return [
        sum(int(words[4 * i + j]) << (64 * j) for j in range(4))
        for i in range(trials)
    ]


@dataclass(frozen=True)
class TrialResult:
    trial: int
    scheme: str
    digest: str
    workload: str
    bin_counts: tuple[int, ...]

    @property
    def focal_count(self) -> int:
        return self.bin_counts[0]


def _one_quality_trial(scheme, k, w: Workload, m, idx, tseed,
                       fixed_keys) -> TrialResult:
    hf = _hasher_for(scheme, w.key_bits, tseed, k)
    keys = gen_workload(w, tseed) if fixed_keys is None else fixed_keys
    bins = BinMap(m, hf.out_bits).to_bin_array(hf.hash_array(keys))
    counts = np.bincount(bins.astype(np.int64), minlength=m)
    return TrialResult(idx, scheme, hf.descriptor.canonical(), w.label(),
                       tuple(int(x) for x in counts))


def run_quality(scheme: str, w: Workload, m: int, trials: int, seed: int = 0,
                jobs: int = 1, k: int | None = None) -> list[TrialResult]:
    """Hash the workload into m bins `trials` times with independent hash
    functions; one TrialResult per trial, ordered by trial index."""
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    seeds = trial_seeds(seed, "quality", trials)
    fixed = None if w.stochastic else gen_workload(w, 0)
    args = [(scheme, k, w, m, i, seeds[i], fixed) for i in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunk = max(1, trials // (8 * jobs))
            return list(pool.map(_quality_star, args, chunksize=chunk))
    return [_one_quality_trial(*a) for a in args]


def _quality_star(a):
    return _one_quality_trial(*a)


def cdf(results: list[TrialResult], focal_bin: int = 0) -> list[tuple[int, float]]:
    """Right-continuous empirical CDF of focal-bin counts."""
    if not results:
        raise InvalidParams("need at least one trial")
    vals = sorted(r.bin_counts[focal_bin] for r in results)
    total = len(vals)
    out = []
    for i, v in enumerate(vals, 1):
        if i == total or vals[i] != v:
            out.append((v, i / total))
    return out


def perfect_split_fraction(results: list[TrialResult], target: int) -> float:
    """Fraction of trials whose focal bin holds exactly `target` keys."""
    hits = sum(1 for r in results if r.focal_count == target)
    return hits / len(results)


def simulated_perfect_fraction(n: int, m: int, trials: int, seed: int = 0) -> float:
    """Fully random baseline for the perfect-split event, by direct binomial
    simulation of the focal-bin count."""
    if n % m:
        raise InvalidParams("perfect split needs m | n")
    rng = np.random.default_rng(seed)
    draws = rng.binomial(n, 1.0 / m, size=trials)
    return float(np.mean(draws == n // m))


def cube_top_bit_predicate(hf, w: Workload) -> bool:
    """For simple tabulation on a cube workload split into 2 bins: if any
    binary dimension's two table entries differ in the hash's top bit, the
    split is exactly even (pairing keys along that dimension flips the bin).
    One-directional: True forces a perfect split."""
    if w.kind != "cube":
        raise InvalidParams("predicate applies to cube workloads")
    top = hf.out_bits - 1
    for i in range(w.b1_dims):
        t = hf.tables[i]
        if ((int(t[0]) ^ int(t[1])) >> top) & 1:
            return True
    return False


@dataclass(frozen=True)
class TimingRow:
    scheme: str
    key_bits: int
    n: int
    ms: float
    keys_per_sec: float
    checksum: int


def run_timing(schemes: list[str], key_bits: int, n: int, seed: int = 0,
               repeats: int = 5) -> list[TimingRow]:
    """Median-of-`repeats` wall time to hash the same pre-generated n keys,
    per scheme. Build time is excluded; an XOR checksum of the outputs is
    recorded so the work cannot be skipped."""
    if n < 1:
        raise InvalidParams("n must be >= 1")
    w = Workload("random", key_bits=key_bits, size=n)
    keys = gen_workload(w, seed)
    rows = []
    for scheme in schemes:
        hf = _hasher_for(scheme, key_bits, seed)
        times = []
        checksum = 0
        for _ in range(repeats):
            t0 = time.perf_counter()
            out = hf.hash_array(keys)
            times.append(time.perf_counter() - t0)
            checksum = int(np.bitwise_xor.reduce(out))
        ms = statistics.median(times) * 1e3
        rows.append(TimingRow(scheme, key_bits, n, ms, n / (ms / 1e3), checksum))
    return rows


def variance_check(scheme: str, n_keys: int, m: int, trials: int,
                   seed: int = 0) -> float:
    """z-score of the focal-bin count variance over independent hash draws
    against the pairwise-independence prediction n(1/m)(1-1/m)."""
    if trials < 100:
        raise InvalidParams("variance needs trials >= 100")
    if m == 1:
        return 0.0  # single bin: predicted and observed variance both zero
    key_bits = 32 if scheme == "doubletab" else 64
    w = Workload("random", key_bits=key_bits, size=n_keys)
    seeds = trial_seeds(seed, "variance", trials)
    focal = np.empty(trials, dtype=np.float64)
    for i, tseed in enumerate(seeds):
        hf = _hasher_for(scheme, key_bits, tseed)
        keys = gen_workload(w, tseed)
        bins = BinMap(m, hf.out_bits).to_bin_array(hf.hash_array(keys))
        focal[i] = int(np.count_nonzero(bins == 0))
    s2 = float(np.var(focal, ddof=1))
    sigma2 = n_keys * (1.0 / m) * (1.0 - 1.0 / m)
    return (s2 - sigma2) / (sigma2 * np.sqrt(2.0 / (trials - 1)))


# -- CSV output -------------------------------------------------------------


def _open_and_write(path, header_lines, columns, rows):
    if hasattr(path, "write"):
        _emit(path, header_lines, columns, rows)
        return
    with open(path, "w", newline="") as fh:
        _emit(fh, header_lines, columns, rows)


def _emit(fh, header_lines, columns, rows):
    for line in header_lines:
        fh.write(f"# {line}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)


def _headers(config: str, seed: int) -> list[str]:
    return [f"hashlab {__version__}", f"config: {config}", f"seed: 0x{seed:x}"]


def write_quality_csv(path, results: list[TrialResult], config: str, seed: int) -> None:
    rows = [(r.trial, r.scheme, r.workload, r.focal_count) for r in results]
    _open_and_write(path, _headers(config, seed),
                    ["trial", "scheme", "workload", "focal_count"], rows)


def write_cdf_csv(path, points: list[tuple[int, float]], config: str, seed: int) -> None:
    _open_and_write(path, _headers(config, seed), ["count", "cum_frac"], points)


def write_timing_csv(path, rows: list[TimingRow], config: str, seed: int) -> None:
    body = [
        (r.scheme, r.key_bits, r.n, f"{r.ms:.6f}", f"{r.keys_per_sec:.3f}",
         f"0x{r.checksum:016x}")
        for r in rows
    ]
    _open_and_write(path, _headers(config, seed),
                    ["scheme", "bits", "n", "ms", "keys_per_sec", "checksum"], body)
