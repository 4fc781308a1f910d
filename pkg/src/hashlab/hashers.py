"""Hash function schemes over fixed-width unsigned integer keys.

Conventions shared by every scheme:

  - Keys are unsigned integers of key_bits bits. Input character i (0-based)
    is bits [i*char_bits, (i+1)*char_bits), so character 0 is the least
    significant byte group.
  - Hash values of the tabulation family are words of d output characters
    where output character 0 is the MOST significant: a value is
    sum(y_j * sigma^(d-1-j)). The top character therefore decides coarse
    bucketing, and the permutation stage of tab1perm touches exactly it.
  - Tables are filled from one generator tagged "fill:<scheme>" consumed as
    a little-endian byte stream (tables in index order, each entry taking
    its byte-aligned width). Permutations come from a second generator
    tagged "perm:<scheme>", one Fisher-Yates pass per permuted output
    character, most significant first.

Every scheme offers a scalar path (__call__, plain Python ints, used by the
conformance vectors and the read-count instrumentation) and a batch path
(hash_array over numpy arrays). The two are tested to agree bit-for-bit.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDescriptor, UnsupportedConfig
from .seeding import P89, check_seed, make_generator

P61 = (1 << 61) - 1

SCHEMES = (
    "simpletab",
    "tabperm",
    "tab1perm",
    "twisted",
    "mixed",
    "doubletab",
    "multishift",
    "poly",
)
SCHEME_IDS = {name: i + 1 for i, name in enumerate(SCHEMES)}

_TABULATION = {"simpletab", "tabperm", "tab1perm", "twisted", "mixed"}
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SchemeDescriptor:
    """Complete, canonical description of one hash function instance."""

    scheme: str
    key_bits: int = 64
    char_bits: int | None = None
    d: int | None = None
    k: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise InvalidDescriptor(f"unknown scheme {self.scheme!r}")
        if self.key_bits not in (32, 64):
            raise InvalidDescriptor("key_bits must be 32 or 64")
        object.__setattr__(self, "seed", check_seed(self.seed))

        cb = self.char_bits
        if cb is None:
            cb = 16 if self.scheme == "doubletab" else 8
            object.__setattr__(self, "char_bits", cb)
        want = 16 if self.scheme == "doubletab" else 8
        if cb != want:
            raise InvalidDescriptor(
                f"char_bits must be {want} for {self.scheme}, got {cb}"
            )

        if self.scheme == "poly":
            if self.k is None or self.k < 1:
                raise InvalidDescriptor("poly needs independence k >= 1")
        elif self.k is not None:
            raise InvalidDescriptor("k is only meaningful for poly")

        if self.scheme == "doubletab":
            if self.key_bits != 32:
                raise UnsupportedConfig(
                    "double tabulation on 64-bit keys needs tables beyond memory"
                )
            if self.d is None:
                object.__setattr__(self, "d", 20)
            if self.d != 20:
                raise InvalidDescriptor("double tabulation is pinned to d=20")
        elif self.scheme in _TABULATION:
            if self.d is None:
                object.__setattr__(self, "d", self.c)
            if self.d < 1 or self.d * cb > 64:
                raise InvalidDescriptor("need 1 <= d and d*char_bits <= 64")
            if self.scheme == "mixed" and self.d != self.c:
                raise InvalidDescriptor("mixed tabulation is pinned to d == c")
        else:
            if self.d is not None:
                raise InvalidDescriptor("d is only meaningful for tabulation schemes")
            object.__setattr__(self, "d", 0)

    @property
    def c(self) -> int:
        return self.key_bits // self.char_bits

    @property
    def sigma(self) -> int:
        return 1 << self.char_bits

    @property
    def out_bits(self) -> int:
        if self.scheme == "doubletab":
            return self.key_bits
        if self.scheme in _TABULATION:
            return self.d * self.char_bits
        return self.key_bits

    @property
    def modulus(self) -> int:
        """Prime modulus used by poly at this key width."""
        return P61 if self.key_bits == 32 else P89

    def canonical(self) -> str:
        return (
            f"{self.scheme} kb={self.key_bits} cb={self.char_bits}"
            f" d={self.d} k={self.k or 0} seed=0x{self.seed:x}"
        )


class _CountingTable:
    """Indexable wrapper that counts reads; used by hash_with_read_count."""

    def __init__(self, inner, hits):
        self._inner = inner
        self._hits = hits

    def __getitem__(self, idx):
        self._hits[0] += 1
        return self._inner[idx]


def hash_with_read_count(hf, key: int) -> tuple[int, int]:
    """Evaluate hf(key) through the production scalar path while counting
    how many logical table entries were read."""
    hf._materialize()
    hits = [0]
    clone = copy.copy(hf)
    clone.tables = [_CountingTable(t, hits) for t in hf.tables]
    return clone(key), hits[0]


class _Hasher:
    def __init__(self, desc: SchemeDescriptor):
        self.descriptor = desc
        self.out_bits = desc.out_bits
        self.tables: list = []

    def _materialize(self) -> None:
        pass

    def _check_key(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < (1 << self.descriptor.key_bits):
            raise ValueError(f"key out of range for {self.descriptor.key_bits}-bit scheme")
        return x

    def _keys_u64(self, keys) -> np.ndarray:
        arr = np.asarray(keys)
        if arr.dtype != np.uint64:
            arr = arr.astype(np.uint64)
        return arr


def _u64_table(buf: memoryview, off: int, count: int, width: int) -> tuple[np.ndarray, int]:
    """Read `count` little-endian entries of `width` bytes (<= 8) as uint64."""
    end = off + count * width
    raw = np.frombuffer(buf[off:end], dtype=np.uint8).reshape(count, width)
    out = np.zeros(count, dtype=np.uint64)
    for b in range(width):
        out |= raw[:, b].astype(np.uint64) << np.uint64(8 * b)
    return out, end


class _SimpleTabBase(_Hasher):
    """Common fill and evaluation for the XOR-of-tables family."""

    def __init__(self, desc: SchemeDescriptor):
        super().__init__(desc)
        c, sigma, cb, d = desc.c, desc.sigma, desc.char_bits, desc.d
        ew = d * cb // 8
        gen = make_generator(desc.seed, "fill:" + desc.scheme)
        buf = memoryview(gen.next_bytes(c * sigma * ew))
        off = 0
        self.tables = []
        for _ in range(c):
            t, off = _u64_table(buf, off, sigma, ew)
            self.tables.append(t)

    def _simple_scalar(self, x: int) -> int:
        cb = self.descriptor.char_bits
        mask = self.descriptor.sigma - 1
        h = 0
        for i in range(self.descriptor.c):
            h ^= int(self.tables[i][(x >> (cb * i)) & mask])
        return h

    def _simple_batch(self, keys: np.ndarray) -> np.ndarray:
        cb = np.uint64(self.descriptor.char_bits)
        mask = np.uint64(self.descriptor.sigma - 1)
        h = self.tables[0][(keys & mask).astype(np.intp)]
        for i in range(1, self.descriptor.c):
            idx = ((keys >> (cb * np.uint64(i))) & mask).astype(np.intp)
            h = h ^ self.tables[i][idx]
        return h


class SimpleTabulation(_SimpleTabBase):
    """h(x) = T_0[x_0] xor ... xor T_{c-1}[x_{c-1}]: c lookups, 3-independent."""

    def __call__(self, x: int) -> int:
        return self._simple_scalar(self._check_key(x))

    def hash_array(self, keys) -> np.ndarray:
        return self._simple_batch(self._keys_u64(keys))


def _fold_permutation(perm: np.ndarray, out_char: int, d: int, cb: int,
                      with_identity: bool) -> np.ndarray:
    """Embed a permutation of one output character into a full-width table
    whose other characters are zero: entry v = tau(v) << shift, or
    (v xor tau(v)) << shift when the XOR-in form is wanted."""
    shift = np.uint64((d - 1 - out_char) * cb)
    vals = perm.astype(np.uint64)
    if with_identity:
        vals = vals ^ np.arange(len(perm), dtype=np.uint64)
    return vals << shift


class TabulationPermutation(_SimpleTabBase):
    """Simple tabulation followed by one random permutation per output
    character, applied as d folded-table XORs: c+d lookups total."""

    def __init__(self, desc: SchemeDescriptor):
        super().__init__(desc)
        d, cb, sigma = desc.d, desc.char_bits, desc.sigma
        pg = make_generator(desc.seed, "perm:" + desc.scheme)
        from .seeding import random_permutation

        self.permutations = [random_permutation(pg, sigma) for _ in range(d)]
        for j, perm in enumerate(self.permutations):
            self.tables.append(_fold_permutation(perm, j, d, cb, with_identity=False))

    def __call__(self, x: int) -> int:
        desc = self.descriptor
        z = self._simple_scalar(self._check_key(x))
        cb, mask, c, d = desc.char_bits, desc.sigma - 1, desc.c, desc.d
        h = 0
        for j in range(d):
            h ^= int(self.tables[c + j][(z >> (cb * (d - 1 - j))) & mask])
        return h

    def hash_array(self, keys) -> np.ndarray:
        desc = self.descriptor
        z = self._simple_batch(self._keys_u64(keys))
        cb = np.uint64(desc.char_bits)
        mask = np.uint64(desc.sigma - 1)
        c, d = desc.c, desc.d
        h = np.zeros(len(z), dtype=np.uint64)
        for j in range(d):
            idx = ((z >> (cb * np.uint64(d - 1 - j))) & mask).astype(np.intp)
            h = h ^ self.tables[c + j][idx]
        return h


class TabulationOnePermutation(_SimpleTabBase):
    """Simple tabulation with only the most significant output character
    permuted: h(x) = z xor T[z_top], T[v] = (v xor tau(v)) << shift.
    c+1 lookups; the low (d-1) characters of h equal those of z."""

    def __init__(self, desc: SchemeDescriptor):
        super().__init__(desc)
        pg = make_generator(desc.seed, "perm:" + desc.scheme)
        from .seeding import random_permutation

        self.permutation = random_permutation(pg, desc.sigma)
        self.tables.append(
            _fold_permutation(self.permutation, 0, desc.d, desc.char_bits,
                              with_identity=True)
        )

    def __call__(self, x: int) -> int:
        desc = self.descriptor
        z = self._simple_scalar(self._check_key(x))
        top = (z >> (desc.char_bits * (desc.d - 1))) & (desc.sigma - 1)
        return z ^ int(self.tables[desc.c][top])

    def hash_array(self, keys) -> np.ndarray:
        desc = self.descriptor
        z = self._simple_batch(self._keys_u64(keys))
        shift = np.uint64(desc.char_bits * (desc.d - 1))
        mask = np.uint64(desc.sigma - 1)
        idx = ((z >> shift) & mask).astype(np.intp)
        return z ^ self.tables[desc.c][idx]


class TwistedTabulation(_Hasher):
    """Feistel-style twist: tables for characters 0..c-2 hold packed
    (value, twist) pairs; the last character is XORed with the combined
    twist before its plain lookup. c lookups of (mostly) double entries."""

    def __init__(self, desc: SchemeDescriptor):
        super().__init__(desc)
        c, sigma, cb, d = desc.c, desc.sigma, desc.char_bits, desc.d
        vw = d * cb // 8
        tw = cb // 8
        ew = vw + tw
        gen = make_generator(desc.seed, "fill:" + desc.scheme)
        buf = gen.next_bytes((c - 1) * sigma * ew + sigma * vw)
        mv = memoryview(buf)
        off = 0
        self.tables = []
        self._twists = []
        self._values = []
        for _ in range(c - 1):
            raw = np.frombuffer(mv[off : off + sigma * ew], dtype=np.uint8)
            raw = raw.reshape(sigma, ew)
            twist = np.zeros(sigma, dtype=np.uint64)
            for b in range(tw):
                twist |= raw[:, b].astype(np.uint64) << np.uint64(8 * b)
            value = np.zeros(sigma, dtype=np.uint64)
            for b in range(vw):
                value |= raw[:, tw + b].astype(np.uint64) << np.uint64(8 * b)
            # packed scalar entry: low char_bits = twist, rest = value
            packed = [int(v) << cb | int(t) for v, t in zip(value, twist)]
            self.tables.append(packed)
            self._twists.append(twist)
            self._values.append(value)
            off += sigma * ew
        last, off = _u64_table(mv, off, sigma, vw)
        self.tables.append(last)

    def __call__(self, x: int) -> int:
        desc = self.descriptor
        x = self._check_key(x)
        cb, mask, c = desc.char_bits, desc.sigma - 1, desc.c
        tacc = 0
        vacc = 0
        for i in range(c - 1):
            e = self.tables[i][(x >> (cb * i)) & mask]
            tacc ^= e & mask
            vacc ^= e >> cb
        last_char = ((x >> (cb * (c - 1))) & mask) ^ tacc
        return vacc ^ int(self.tables[c - 1][last_char])

    def hash_array(self, keys) -> np.ndarray:
        desc = self.descriptor
        keys = self._keys_u64(keys)
        cb = np.uint64(desc.char_bits)
        mask = np.uint64(desc.sigma - 1)
        c = desc.c
        tacc = np.zeros(len(keys), dtype=np.uint64)
        vacc = np.zeros(len(keys), dtype=np.uint64)
        for i in range(c - 1):
            idx = ((keys >> (cb * np.uint64(i))) & mask).astype(np.intp)
            tacc = tacc ^ self._twists[i][idx]
            vacc = vacc ^ self._values[i][idx]
        last = (((keys >> (cb * np.uint64(c - 1))) & mask) ^ tacc).astype(np.intp)
        return vacc ^ self.tables[c - 1][last]


class MixedTabulation(_Hasher):
    """Simple tabulation plus derived characters: each input lookup yields a
    (hash part, derived characters) pair, and the XOR of derived characters
    is hashed through c more tables. 2c lookups, c of them double length."""

    def __init__(self, desc: SchemeDescriptor):
        super().__init__(desc)
        c, sigma, cb, d = desc.c, desc.sigma, desc.char_bits, desc.d
        vw = d * cb // 8
        gen = make_generator(desc.seed, "fill:" + desc.scheme)
        buf = memoryview(gen.next_bytes(c * sigma * 2 * vw + c * sigma * vw))
        off = 0
        self.tables = []
        self._hash_parts = []
        self._derived_parts = []
        vbits = d * cb
        for _ in range(c):
            raw = np.frombuffer(buf[off : off + sigma * 2 * vw], dtype=np.uint8)
            raw = raw.reshape(sigma, 2 * vw)
            hp = np.zeros(sigma, dtype=np.uint64)
            dp = np.zeros(sigma, dtype=np.uint64)
            for b in range(vw):
                hp |= raw[:, b].astype(np.uint64) << np.uint64(8 * b)
                dp |= raw[:, vw + b].astype(np.uint64) << np.uint64(8 * b)
            # packed scalar entry: low d*cb bits = hash part, high = derived
            self.tables.append([int(dv) << vbits | int(hv) for hv, dv in zip(hp, dp)])
            self._hash_parts.append(hp)
            self._derived_parts.append(dp)
            off += sigma * 2 * vw
        for _ in range(c):
            t, off = _u64_table(buf, off, sigma, vw)
            self.tables.append(t)

    def __call__(self, x: int) -> int:
        desc = self.descriptor
        x = self._check_key(x)
        cb, mask, c = desc.char_bits, desc.sigma - 1, desc.c
        vbits = desc.d * cb
        vmask = (1 << vbits) - 1
        hacc = 0
        dacc = 0
        for i in range(c):
            e = self.tables[i][(x >> (cb * i)) & mask]
            hacc ^= e & vmask
            dacc ^= e >> vbits
        for j in range(c):
            hacc ^= int(self.tables[c + j][(dacc >> (cb * j)) & mask])
        return hacc

    def hash_array(self, keys) -> np.ndarray:
        desc = self.descriptor
        keys = self._keys_u64(keys)
        cb = np.uint64(desc.char_bits)
        mask = np.uint64(desc.sigma - 1)
        c = desc.c
        hacc = np.zeros(len(keys), dtype=np.uint64)
        dacc = np.zeros(len(keys), dtype=np.uint64)
        for i in range(c):
            idx = ((keys >> (cb * np.uint64(i))) & mask).astype(np.intp)
            hacc = hacc ^ self._hash_parts[i][idx]
            dacc = dacc ^ self._derived_parts[i][idx]
        for j in range(c):
            idx = ((dacc >> (cb * np.uint64(j))) & mask).astype(np.intp)
            hacc = hacc ^ self.tables[c + j][idx]
        return hacc


class DoubleTabulation(_Hasher):
    """Two rounds of simple tabulation, 32-bit keys only: h1 maps the two
    16-bit input characters to 20 derived characters (320-bit entries), h2
    hashes those back to 32 bits. 22 lookups."""

    _D = 20

    def __init__(self, desc: SchemeDescriptor):
        super().__init__(desc)
        sigma = desc.sigma
        gen = make_generator(desc.seed, "fill:" + desc.scheme)
        h1_bytes = 2 * sigma * 40
        h2_bytes = self._D * sigma * 4
        buf = memoryview(gen.next_bytes(h1_bytes + h2_bytes))
        raw = np.frombuffer(buf[:h1_bytes], dtype="<u8")
        self._h1 = raw.reshape(2, sigma, 5).astype(np.uint64)
        self._h2 = []
        off = h1_bytes
        for _ in range(self._D):
            t, off = _u64_table(buf, off, sigma, 4)
            self._h2.append(t)
        self._h1_scalar = None
        self.tables = None  # built lazily; the scalar path rarely runs

    def _materialize(self) -> None:
        if self.tables is not None:
            return
        scalar_h1 = []
        for t in range(2):
            limbs = self._h1[t]
            scalar_h1.append([
                int(limbs[i, 0])
                | int(limbs[i, 1]) << 64
                | int(limbs[i, 2]) << 128
                | int(limbs[i, 3]) << 192
                | int(limbs[i, 4]) << 256
                for i in range(limbs.shape[0])
            ])
        self.tables = scalar_h1 + list(self._h2)

    def __call__(self, x: int) -> int:
        x = self._check_key(x)
        self._materialize()
        z = self.tables[0][x & 0xFFFF] ^ self.tables[1][(x >> 16) & 0xFFFF]
        h = 0
        for j in range(self._D):
            h ^= int(self.tables[2 + j][(z >> (16 * j)) & 0xFFFF])
        return h

    def hash_array(self, keys) -> np.ndarray:
        keys = self._keys_u64(keys)
        i0 = (keys & np.uint64(0xFFFF)).astype(np.intp)
        i1 = ((keys >> np.uint64(16)) & np.uint64(0xFFFF)).astype(np.intp)
        z = self._h1[0][i0] ^ self._h1[1][i1]  # (n, 5) limbs
        h = np.zeros(len(keys), dtype=np.uint64)
        for j in range(self._D):
            limb = z[:, j // 4]
            cj = ((limb >> np.uint64(16 * (j % 4))) & np.uint64(0xFFFF)).astype(np.intp)
            h = h ^ self._h2[j][cj]
        return h


class MultiplyShift(_Hasher):
    """h(x) = ((a*x + b) mod 2^(2w)) >> w with a odd; one multiplication."""

    def __init__(self, desc: SchemeDescriptor):
        super().__init__(desc)
        w = desc.key_bits
        gen = make_generator(desc.seed, "fill:" + desc.scheme)
        buf = gen.next_bytes(2 * (2 * w // 8))
        half = 2 * w // 8
        self.a = int.from_bytes(buf[:half], "little") | 1  # forced odd
        self.b = int.from_bytes(buf[half:], "little")

    def __call__(self, x: int) -> int:
        x = self._check_key(x)
        w = self.descriptor.key_bits
        return ((self.a * x + self.b) & ((1 << (2 * w)) - 1)) >> w

    def hash_array(self, keys) -> np.ndarray:
        keys = self._keys_u64(keys)
        w = self.descriptor.key_bits
        if w == 32:
            a = np.uint64(self.a)
            b = np.uint64(self.b)
            return (a * keys + b) >> np.uint64(32)
        # 64-bit keys: emulate the high half of a 128-bit a*x + b
        a_lo = np.uint64(self.a & _MASK64)
        a_hi = np.uint64(self.a >> 64)
        b_lo = np.uint64(self.b & _MASK64)
        b_hi = np.uint64(self.b >> 64)
        hi = _mulhi64(a_lo, keys)
        low = a_lo * keys
        low_b = low + b_lo
        carry = (low_b < low).astype(np.uint64)
        return hi + a_hi * keys + b_hi + carry


def _mulhi64(a: np.uint64, x: np.ndarray) -> np.ndarray:
    """High 64 bits of a full 64x64 product, scalar a times vector x."""
    m32 = np.uint64(0xFFFFFFFF)
    al = np.uint64(int(a) & 0xFFFFFFFF)
    ah = np.uint64(int(a) >> 32)
    xl = x & m32
    xh = x >> np.uint64(32)
    t1 = al * xl
    t2 = ah * xl + (t1 >> np.uint64(32))
    t3 = al * xh + (t2 & m32)
    return ah * xh + (t2 >> np.uint64(32)) + (t3 >> np.uint64(32))


class PolyHash(_Hasher):
    """Degree k-1 polynomial over a Mersenne prime (2^61-1 for 32-bit keys,
    2^89-1 for 64-bit), evaluated by Horner's rule, truncated to key_bits.
    k-independent."""

    def __init__(self, desc: SchemeDescriptor):
        super().__init__(desc)
        p = desc.modulus
        gen = make_generator(desc.seed, "fill:" + desc.scheme)
        self.coefficients = []
        if p == P61:
            limit = ((1 << 64) // p) * p
            while len(self.coefficients) < desc.k:
                w = gen.next_word(64)
                if w < limit:
                    self.coefficients.append(w % p)
        else:
            limit = ((1 << 128) // p) * p
            while len(self.coefficients) < desc.k:
                w = gen.next_word(64) | (gen.next_word(64) << 64)
                if w < limit:
                    self.coefficients.append(w % p)

    def __call__(self, x: int) -> int:
        x = self._check_key(x)
        p = self.descriptor.modulus
        bits = 61 if p == P61 else 89
        acc = self.coefficients[-1]
        for c in reversed(self.coefficients[:-1]):
            acc = acc * x + c
            acc = (acc & p) + (acc >> bits)
            if acc >= p:
                acc -= p
        return acc & ((1 << self.descriptor.key_bits) - 1)

    def hash_array(self, keys) -> np.ndarray:
        keys = self._keys_u64(keys)
        desc = self.descriptor
        mask = np.uint64((1 << desc.key_bits) - 1) if desc.key_bits < 64 else np.uint64(_MASK64)
        try:
            from . import _kernels

            have = _kernels.HAVE_NUMBA
        except ImportError:  # pragma: no cover
            have = False
        out = np.empty(len(keys), dtype=np.uint64)
        if have:
            if desc.modulus == P61:
                coeffs = np.array(self.coefficients, dtype=np.uint64)
                _kernels.poly61_eval(coeffs, keys, out, mask)
            else:
                clo = np.array([c & _MASK64 for c in self.coefficients], dtype=np.uint64)
                chi = np.array([c >> 64 for c in self.coefficients], dtype=np.uint64)
                _kernels.poly89_eval(clo, chi, keys, out, mask)
            return out
        # exact big-int fallback
        p = desc.modulus
        xs = keys.astype(object)
        acc = np.full(len(keys), self.coefficients[-1], dtype=object)
        for c in reversed(self.coefficients[:-1]):
            acc = (acc * xs + c) % p
        m = int(mask)
        return np.array([int(v) & m for v in acc], dtype=np.uint64)


_CLASSES = {
    "simpletab": SimpleTabulation,
    "tabperm": TabulationPermutation,
    "tab1perm": TabulationOnePermutation,
    "twisted": TwistedTabulation,
    "mixed": MixedTabulation,
    "doubletab": DoubleTabulation,
    "multishift": MultiplyShift,
    "poly": PolyHash,
}


def build(desc: SchemeDescriptor):
    """Construct the hash function an already-validated descriptor names."""
    return _CLASSES[desc.scheme](desc)


def descriptor_for(scheme: str, key_bits: int, seed: int,
                   k: int | None = None) -> SchemeDescriptor:
    """Resolve a scheme name, including the polyN shorthand (poly2, poly100),
    to a full descriptor."""
    if scheme.startswith("poly") and scheme != "poly":
        k = int(scheme[4:])
        scheme = "poly"
    return SchemeDescriptor(scheme, key_bits=key_bits, seed=seed, k=k)


def dump_tables(hf) -> bytes:
    """Canonical binary dump: magic "HLAB1", scheme id byte, c, d, char_bits,
    then all tables in index order, entries little-endian at their natural
    byte widths (poly coefficients take 12 bytes, multiply-shift constants
    2*key_bits/8 bytes)."""
    desc = hf.descriptor
    head = b"HLAB1" + bytes([SCHEME_IDS[desc.scheme], desc.c, desc.d, desc.char_bits])
    body = bytearray()
    if desc.scheme == "multishift":
        half = 2 * desc.key_bits // 8
        body += hf.a.to_bytes(half, "little")
        body += hf.b.to_bytes(half, "little")
    elif desc.scheme == "poly":
        for c in hf.coefficients:
            body += c.to_bytes(12, "little")
    else:
        hf._materialize()
        widths = _dump_entry_widths(desc)
        for tbl, width in zip(hf.tables, widths):
            for i in range(len(tbl)):
                body += int(tbl[i]).to_bytes(width, "little")
    return head + bytes(body)


def _dump_entry_widths(desc: SchemeDescriptor) -> list[int]:
    vw = desc.d * desc.char_bits // 8
    c = desc.c
    if desc.scheme == "doubletab":
        return [40, 40] + [4] * 20
    if desc.scheme == "twisted":
        return [vw + desc.char_bits // 8] * (c - 1) + [vw]
    if desc.scheme == "mixed":
        return [2 * vw] * c + [vw] * c
    if desc.scheme == "tabperm":
        return [vw] * (c + desc.d)
    if desc.scheme == "tab1perm":
        return [vw] * (c + 1)
    return [vw] * c
