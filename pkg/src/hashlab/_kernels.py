"""Optional numba kernels for the hot arithmetic paths.

Everything here is a speed-up only: each kernel computes exactly the same
bits as the pure-Python reference it shadows (the test suite asserts
bit-for-bit agreement against independent big-integer oracles). When numba
is unavailable the library falls back to those reference paths.

Values mod p = 2^89 - 1 are carried as two uint64 limbs (lo = bits 0..63,
hi = bits 64..88); all intermediate arithmetic stays inside uint64, with
products split at 32 bits.
"""

from __future__ import annotations

try:
    import numpy as np
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

if HAVE_NUMBA:
    _U64 = np.uint64
    _LO25 = _U64((1 << 25) - 1)  # high-limb mask: p = 2^89 - 1 has 25 high bits
    _LO32 = _U64((1 << 32) - 1)
    _ALL1 = _U64((1 << 64) - 1)
    _P61 = _U64((1 << 61) - 1)

    @njit(cache=True, inline="always")
    def _mul64(a, b):
        """Full 64x64 -> 128 bit product as (hi, lo) uint64 limbs."""
        al = a & _LO32
        ah = a >> _U64(32)
        bl = b & _LO32
        bh = b >> _U64(32)
        t1 = al * bl
        t2 = ah * bl + (t1 >> _U64(32))
        t3 = al * bh + (t2 & _LO32)
        hi = ah * bh + (t2 >> _U64(32)) + (t3 >> _U64(32))
        lo = a * b  # wrapping low half
        return hi, lo

    @njit(cache=True, inline="always")
    def _canon89(hi, lo):
        """Reduce (hi*2^64 + lo), hi <= 2^26, to the canonical residue < p."""
        for _ in range(3):
            if hi > _LO25:
                e = hi >> _U64(25)
                hi = hi & _LO25
                s = lo + e
                if s < e:
                    hi += _U64(1)
                lo = s
            else:
                break
        if hi == _LO25 and lo == _ALL1:  # exactly p
            hi = _U64(0)
            lo = _U64(0)
        return hi, lo

    @njit(cache=True, inline="always")
    def _mulmod89(ahi, alo, x):
        """(ahi*2^64 + alo) * x mod 2^89-1 for canonical a and x < 2^64."""
        rhi, rlo = _mul64(alo, x)
        shi, slo = _mul64(ahi, x)  # ahi < 2^25 so shi <= 2^25 - 2
        m = rhi + slo
        n2 = shi
        if m < rhi:
            n2 += _U64(1)
        # value = n2*2^128 + m*2^64 + rlo < 2^153; split at bit 89
        hi = m & _LO25
        lo = rlo
        q = (m >> _U64(25)) | (n2 << _U64(39))
        s = lo + q
        if s < q:
            hi += _U64(1)
        return _canon89(hi, s)

    @njit(cache=True, inline="always")
    def _addmod89(ahi, alo, bhi, blo):
        lo = alo + blo
        c = _U64(1) if lo < alo else _U64(0)
        return _canon89(ahi + bhi + c, lo)

    @njit(cache=True, inline="always")
    def _submod89(ahi, alo, bhi, blo):
        """(a - b) mod p for canonical a, b."""
        if ahi > bhi or (ahi == bhi and alo >= blo):
            lo = alo - blo
            borrow = _U64(1) if alo < blo else _U64(0)
            return ahi - bhi - borrow, lo
        # a + p - b, with p = (LO25, ALL1): p - b = (LO25 - bhi, ALL1 - blo)
        dhi = _LO25 - bhi
        dlo = _ALL1 - blo
        return _addmod89(ahi, alo, dhi, dlo)

    @njit(cache=True, inline="always")
    def _horner89(clo, chi, x):
        """Evaluate sum(c_i * x^i) mod 2^89-1; coefficients canonical."""
        n = clo.shape[0]
        hi = chi[n - 1]
        lo = clo[n - 1]
        for i in range(n - 2, -1, -1):
            hi, lo = _mulmod89(hi, lo, x)
            hi, lo = _addmod89(hi, lo, chi[i], clo[i])
        return hi, lo

    @njit(cache=True)
    def diff_init(clo, chi, t0, dlo, dhi):
        """Fill dlo/dhi with the forward-difference table of the polynomial
        at consecutive points t0, t0+1, ...: entry j = delta^j f(t0)."""
        n = clo.shape[0]
        for i in range(n):
            hi, lo = _horner89(clo, chi, t0 + _U64(i))
            dhi[i] = hi
            dlo[i] = lo
        for k in range(1, n):
            for j in range(n - 1, k - 1, -1):
                hi, lo = _submod89(dhi[j], dlo[j], dhi[j - 1], dlo[j - 1])
                dhi[j] = hi
                dlo[j] = lo

    @njit(cache=True)
    def fd_draw(dlo, dhi, out):
        """Emit low-64 canonical words of f(t), f(t+1), ... advancing the
        difference table in place. Table limbs stay semi-reduced (hi <= 2^25)."""
        n = out.shape[0]
        m = dlo.shape[0]
        for t in range(n):
            hi, lo = _canon89(dhi[0], dlo[0])
            out[t] = lo
            for j in range(m - 1):
                s = dlo[j] + dlo[j + 1]
                c = _U64(1) if s < dlo[j] else _U64(0)
                h = dhi[j] + dhi[j + 1] + c
                e = h >> _U64(25)
                h = h & _LO25
                s2 = s + e
                if s2 < e:
                    h += _U64(1)
                dlo[j] = s2
                dhi[j] = h

    @njit(cache=True, inline="always")
    def _mulmod61(a, b):
        """a * b mod 2^61-1 for canonical a, b < 2^61."""
        ah = a >> _U64(31)  # < 2^30
        al = a & _U64(0x7FFFFFFF)
        bh = b >> _U64(31)
        bl = b & _U64(0x7FFFFFFF)
        # a*b = ah*bh*2^62 + (ah*bl + al*bh)*2^31 + al*bl; 2^61 == 1 (mod p)
        mid = ah * bl + al * bh  # < 2^62
        mh = mid >> _U64(30)
        ml = mid & _U64(0x3FFFFFFF)
        r = (ah * bh << _U64(1)) + mh + (ml << _U64(31)) + al * bl
        r = (r & _P61) + (r >> _U64(61))
        if r >= _P61:
            r -= _P61
        return r

    @njit(cache=True)
    def poly61_eval(coeffs, keys, out, mask):
        """Batch Horner mod 2^61-1, truncated to `mask` bits."""
        n = keys.shape[0]
        k = coeffs.shape[0]
        for i in range(n):
            x = keys[i]
            acc = coeffs[k - 1]
            for j in range(k - 2, -1, -1):
                acc = _mulmod61(acc, x)
                acc = acc + coeffs[j]
                if acc >= _P61:
                    acc -= _P61
            out[i] = acc & mask

    @njit(cache=True)
    def poly89_eval(clo, chi, keys, out, mask):
        """Batch Horner mod 2^89-1, truncated to `mask` bits."""
        n = keys.shape[0]
        for i in range(n):
            hi, lo = _horner89(clo, chi, keys[i])
            out[i] = lo & mask
