"""Kronecker substitution: multiply integer polynomials by packing them into one big integer.

A polynomial with (signed) integer coefficients c_0, ..., c_{n-1} is sent to
sum c_i 2^(B i) for a slot width B large enough that no coefficient of the
product overflows.  Multiplying the packed integers then multiplies the
polynomials; multivariate arrays are flattened with strides wide enough to hold
the full convolution along every inner axis.

gmpy2 is used for the big multiplications when it is importable (GMP's FFT
multiplication is orders of magnitude faster than CPython's Karatsuba at the
sizes the catalytic solver produces).
"""

from __future__ import annotations

from math import prod

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import gmpy2

    _mpz = gmpy2.mpz
except ImportError:  # pragma: no cover
    _mpz = int


def _slot_bytes(max_abs: int) -> int:
    """Bytes per slot able to hold values in (-max_abs-1, max_abs+1) with a sign bit."""
    return max(1, (max_abs.bit_length() + 1 + 7) // 8)


def pack(values, nbytes: int):
    """Pack signed ints into a big integer, slot width ``8*nbytes`` bits."""
    offset = 1 << (8 * nbytes - 1)
    count = len(values)
    if count == 0:
        return _mpz(0)
    buf = b"".join((v + offset).to_bytes(nbytes, "little") for v in values)
    raw = int.from_bytes(buf, "little")
    base = int.from_bytes(offset.to_bytes(nbytes, "little") * count, "little")
    return _mpz(raw - base)


def unpack(packed, count: int, nbytes: int) -> list[int]:
    """Inverse of :func:`pack` for the lowest ``count`` slots (balanced residues)."""
    if count == 0:
        return []
    offset = 1 << (8 * nbytes - 1)
    base = int.from_bytes(offset.to_bytes(nbytes, "little") * count, "little")
    width = 8 * nbytes * count
    w = (int(packed) + base) & ((1 << width) - 1)
    buf = w.to_bytes(nbytes * count, "little")
    return [
        int.from_bytes(buf[i : i + nbytes], "little") - offset
        for i in range(0, nbytes * count, nbytes)
    ]


def max_abs(values) -> int:
    m = 0
    for v in values:
        if v < 0:
            v = -v
        if v > m:
            m = v
    return m


def mul_1d(a: list[int], b: list[int], n: int | None = None) -> list[int]:
    """Product of two integer coefficient lists, truncated to ``n`` terms."""
    if not a or not b:
        return [0] * (n or 0)
    full = len(a) + len(b) - 1
    n = full if n is None else n
    a = a[:n]
    b = b[:n]
    if len(a) * len(b) <= 64:
        out = [0] * min(n, len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b[: n - i]):
                    out[i + j] += x * y
        return out + [0] * (n - len(out))
    ma, mb = max_abs(a), max_abs(b)
    if not ma or not mb:
        return [0] * n
    # slots must hold the inputs as well as the product coefficients
    nb = _slot_bytes(max(ma * mb * min(len(a), len(b)), ma, mb))
    cnt = min(n, len(a) + len(b) - 1)
    res = unpack(pack(a, nb) * pack(b, nb), cnt, nb)
    return res + [0] * (n - cnt)


def mul_nd(a: np.ndarray, b: np.ndarray, out_shape) -> np.ndarray:
    """Truncated N-dimensional convolution of integer object arrays.

    The result has shape ``out_shape``; entries beyond the full convolution are
    zero.  Inner axes are padded to the full convolution length so carries
    never wrap into the next axis.
    """
    return sum_of_products([(a, b)], out_shape)


def sum_of_products(pairs, out_shape) -> np.ndarray:
    """Compute sum_k conv(a_k, b_k) truncated to ``out_shape`` with one unpack.

    All arrays must have the same number of dimensions.  Strides are chosen
    from the largest operand shapes so every product shares one layout.
    """
    pairs = [(a, b) for a, b in pairs if a.size and b.size]
    out_shape = tuple(out_shape)
    ndim = len(out_shape)
    if not pairs:
        return np.zeros(out_shape, dtype=object)
    # full convolution extent per axis
    ext = [
        max(a.shape[d] + b.shape[d] - 1 for a, b in pairs) for d in range(ndim)
    ]
    strides_len = [max(ext[d], out_shape[d]) for d in range(ndim)]
    bound = 0
    for a, b in pairs:
        ma = max_abs(a.flat)
        mb = max_abs(b.flat)
        inner = min(a.size, b.size)
        bound += ma * mb * inner
        bound = max(bound, ma, mb)
    nb = _slot_bytes(bound)

    def packed(arr):
        pad = [(0, strides_len[d] - arr.shape[d]) for d in range(ndim)]
        pad[0] = (0, 0)  # outermost axis needs no padding
        flat = np.pad(arr, pad, constant_values=0).ravel().tolist()
        return pack([int(v) for v in flat], nb)

    total = _mpz(0)
    for a, b in pairs:
        total += packed(a) * packed(b)
    inner_size = prod(strides_len[1:])
    rows = min(out_shape[0], ext[0])
    flat = unpack(total, rows * inner_size, nb)
    res = np.empty(len(flat), dtype=object)
    res[:] = flat
    res = res.reshape((rows,) + tuple(strides_len[1:]))
    out = np.zeros(out_shape, dtype=object)
    sl = tuple(slice(0, min(out_shape[d], res.shape[d])) for d in range(ndim))
    out[sl] = res[sl]
    return out
