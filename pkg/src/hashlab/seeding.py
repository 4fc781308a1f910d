"""Deterministic expansion of a small master seed into table entries,
permutations, and word streams.

The generator family is a degree-99 polynomial over the Mersenne prime
p = 2^89 - 1, evaluated at successive counter values; a drawn word is the
low bits of the next evaluation. Coefficients are derived from the master
seed by a counter-mode evaluation of a small base polynomial, with the
domain tag selecting a disjoint block of evaluation points, so distinct
tags yield independent-by-construction streams.

Canonical derivation (all little-endian):
  - master seed s < 2^256 with 64-bit limbs l0..l3,
  - base polynomial B(x) = x^5 + l3*x^4 + l2*x^3 + l1*x^2 + l0*x + K
    over p, K = 0x9E3779B97F4A7C15,
  - tag integer t = little-endian bytes of the ASCII tag,
  - coefficient i of the stream polynomial = B((t*128 + i) mod p).

Streams are single-owner mutable objects; share the seed, not the stream.
"""

from __future__ import annotations

import numpy as np

P89 = (1 << 89) - 1
SEED_BITS = 256
MAX_TAG_BYTES = 32
GENERATOR_DEGREE = 100  # number of coefficients
WORD_BITS = (8, 16, 32, 64)

_BASE_K = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def parse_seed(text: str) -> int:
    """Parse a 0x-prefixed hex master seed of at most 64 digits."""
    if not isinstance(text, str) or not text.lower().startswith("0x"):
        raise ValueError(f"master seed must be 0x-prefixed hex, got {text!r}")
    digits = text[2:]
    if not digits or len(digits) > 64:
        raise ValueError("master seed must have 1..64 hex digits")
    return int(digits, 16)


def seed_to_hex(seed: int) -> str:
    return f"0x{seed:x}"


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < (1 << SEED_BITS):
        raise ValueError("master seed must fit in 256 bits")
    return seed


def _tag_int(tag: str | bytes) -> int:
    raw = tag.encode("ascii") if isinstance(tag, str) else bytes(tag)
    if len(raw) > MAX_TAG_BYTES:
        raise ValueError(f"domain tag longer than {MAX_TAG_BYTES} bytes: {raw!r}")
    return int.from_bytes(raw, "little")


def derive_coefficients(seed: int, tag: str | bytes) -> tuple[int, ...]:
    """Expand (seed, tag) into the generator's 100 polynomial coefficients."""
    seed = check_seed(seed)
    limbs = [(seed >> (64 * j)) & _MASK64 for j in range(4)]
    base = (_BASE_K, limbs[0], limbs[1], limbs[2], limbs[3], 1)
    offset = (_tag_int(tag) * 128) % P89
    out = []
    for i in range(GENERATOR_DEGREE):
        x = (offset + i) % P89
        acc = 0
        for c in reversed(base):
            acc = (acc * x + c) % P89
        out.append(acc)
    return tuple(out)


def _difference_table(coefficients: tuple[int, ...], t0: int) -> list[int]:
    """Forward-difference table of f at t0: entry j = delta^j f(t0) mod p."""
    n = len(coefficients)
    vals = []
    for i in range(n):
        x = (t0 + i) % P89
        acc = 0
        for c in reversed(coefficients):
            acc = (acc * x + c) % P89
        vals.append(acc)
    for k in range(1, n):
        for j in range(n - 1, k - 1, -1):
            vals[j] = (vals[j] - vals[j - 1]) % P89
    return vals


class _PackedDiffEngine:
    """Pure-Python bulk stream: the whole difference table lives in one big
    integer with 96-bit limb slots, so one table advance is a handful of
    big-int operations instead of a Python loop over 100 entries."""

    _LIMB = 96

    def __init__(self, coefficients: tuple[int, ...], t0: int):
        n = len(coefficients)
        table = _difference_table(coefficients, t0)
        self._n = n
        self._state = sum(v << (self._LIMB * j) for j, v in enumerate(table))
        self._m89 = sum(((1 << 89) - 1) << (self._LIMB * j) for j in range(n))
        self._m7 = sum(0x7F << (self._LIMB * j) for j in range(n))
        self._masklimb = (1 << self._LIMB) - 1

    def draw(self, count: int) -> np.ndarray:
        out = np.empty(count, dtype=np.uint64)
        state = self._state
        m89, m7, masklimb = self._m89, self._m7, self._masklimb
        for t in range(count):
            limb0 = state & masklimb
            r = (limb0 & ((1 << 89) - 1)) + (limb0 >> 89)
            if r >= P89:
                r -= P89
            out[t] = r & _MASK64
            s = state + (state >> 96)
            state = (s & m89) + ((s >> 89) & m7)
        self._state = state
        return out


class _NumbaDiffEngine:
    """Bulk stream backed by the jitted forward-difference kernel."""

    def __init__(self, coefficients: tuple[int, ...], t0: int):
        from . import _kernels

        n = len(coefficients)
        clo = np.array([c & _MASK64 for c in coefficients], dtype=np.uint64)
        chi = np.array([c >> 64 for c in coefficients], dtype=np.uint64)
        self._dlo = np.empty(n, dtype=np.uint64)
        self._dhi = np.empty(n, dtype=np.uint64)
        _kernels.diff_init(clo, chi, np.uint64(t0), self._dlo, self._dhi)
        self._kernels = _kernels

    def draw(self, count: int) -> np.ndarray:
        out = np.empty(count, dtype=np.uint64)
        self._kernels.fd_draw(self._dlo, self._dhi, out)
        return out


def _have_numba() -> bool:
    try:
        from . import _kernels

        return _kernels.HAVE_NUMBA
    except ImportError:  # pragma: no cover
        return False


class PolyStream:
    """Word stream from one polynomial over p = 2^89 - 1.

    next_word(bits) returns the low `bits` bits of the polynomial evaluated
    at the current counter, then advances the counter by one. The counter
    starts at 0 (or at an explicit starting index) and the evaluation points
    never wrap: counters stay below 2^64 < p.
    """

    _BLOCK = 512

    def __init__(self, coefficients, counter: int = 0):
        coefficients = tuple(int(c) for c in coefficients)
        if not coefficients:
            raise ValueError("need at least one coefficient")
        if any(not 0 <= c < P89 for c in coefficients):
            raise ValueError("coefficients must be canonical residues mod 2^89-1")
        if counter < 0:
            raise ValueError("counter must be non-negative")
        self.coefficients = coefficients
        self._served = counter  # next evaluation index visible to the caller
        self._buf = np.empty(0, dtype=np.uint64)
        self._pos = 0
        self._engine = None  # positioned at _served + len(pending buffer)

    @classmethod
    def from_seed(cls, seed: int, tag: str | bytes) -> "PolyStream":
        return cls(derive_coefficients(seed, tag))

    @property
    def counter(self) -> int:
        return self._served

    def value_at(self, t: int) -> int:
        """Reference evaluation: full mod-p value of the polynomial at t."""
        x = t % P89
        acc = 0
        for c in reversed(self.coefficients):
            acc = (acc * x + c) % P89
        return acc

    def _ensure_engine(self, at: int) -> None:
        if self._engine is None:
            cls = _NumbaDiffEngine if _have_numba() else _PackedDiffEngine
            self._engine = cls(self.coefficients, at)

    def _pending(self) -> int:
        return len(self._buf) - self._pos

    def next_words64(self, count: int) -> np.ndarray:
        """Low-64 words of the next `count` evaluations."""
        if count < 0:
            raise ValueError("count must be non-negative")
        out = np.empty(count, dtype=np.uint64)
        got = min(count, self._pending())
        if got:
            out[:got] = self._buf[self._pos : self._pos + got]
            self._pos += got
        if got < count:
            self._ensure_engine(self._served + got)
            out[got:] = self._engine.draw(count - got)
        self._served += count
        return out

    def next_word(self, bits: int = 64) -> int:
        if bits not in WORD_BITS:
            raise ValueError(f"bits must be one of {WORD_BITS}")
        if self._pending() == 0:
            self._ensure_engine(self._served)
            self._buf = self._engine.draw(self._BLOCK)
            self._pos = 0
        w = int(self._buf[self._pos])
        self._pos += 1
        self._served += 1
        return w & ((1 << bits) - 1)

    def next_bytes(self, nbytes: int) -> bytes:
        """Little-endian byte stream; consumes whole 64-bit words."""
        nwords = -(-nbytes // 8)
        words = self.next_words64(nwords)
        return words.astype("<u8").tobytes()[:nbytes]


def make_generator(seed: int, tag: str | bytes) -> PolyStream:
    """The canonical (seed, domain tag) -> stream constructor."""
    return PolyStream.from_seed(seed, tag)


def random_permutation(gen: PolyStream, n: int) -> np.ndarray:
    """Uniform permutation of [n] by Fisher-Yates over the stream.

    Each swap index comes from 32-bit draws with exact rejection: a draw w
    is rejected when w >= floor(2^32 / range) * range, so accepted draws are
    exactly uniform. n must be a power of two, at most 2^16.
    """
    if n < 1 or n > (1 << 16) or (n & (n - 1)) != 0:
        raise ValueError("permutation size must be a power of two <= 2^16")
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        rng = i + 1
        limit = ((1 << 32) // rng) * rng
        while True:
            w = gen.next_word(32)
            if w < limit:
                break
        j = w % rng
        perm[i], perm[j] = perm[j], perm[i]
    return np.array(perm, dtype=np.uint32)
