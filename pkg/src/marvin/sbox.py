"""4-bit involutive S-box: gate circuit, table, bitsliced form and analysis.

Input nibble bits are ``(a, b, c, d)`` from MSB to LSB.  The circuit is four
AND and four XOR gates evaluated top to bottom::

    z = b & c;  x = a ^ z
    q = x & c;  s = q ^ d
    m = s & b;  t = m ^ c
    n = x & s;  p = n ^ b
    (a', b', c', d') = (p, x, s, t)
"""

import numpy as np

from .state import State256

N = 16


def eval_circuit(v):
    if not 0 <= v < N:
        raise ValueError(f"S-box input {v} is not a nibble")
    a, b, c, d = (v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1
    z = b & c
    x = a ^ z
    q = x & c
    s = q ^ d
    m = s & b
    t = m ^ c
    n = x & s
    p = n ^ b
    return p << 3 | x << 2 | s << 1 | t


class SBoxTable(tuple):
    """Immutable 16-entry table; ``table[i] == S(i)``."""

    __slots__ = ()

    def __new__(cls, entries):
        entries = tuple(int(e) for e in entries)
        if len(entries) != N or sorted(entries) != list(range(N)):
            raise ValueError("S-box table must be a permutation of 0..15")
        return super().__new__(cls, entries)

    @property
    def is_involution(self):
        return all(self[self[i]] == i for i in range(N))

    def as_array(self):
        return np.array(self, dtype=np.uint8)


def build_table():
    table = SBoxTable(eval_circuit(i) for i in range(N))
    if not table.is_involution:
        raise AssertionError(f"S-box circuit is not an involution: {list(table)}")
    return table


SBOX = build_table()
_SBOX_ARRAY = SBOX.as_array()


def apply_bits(bits, table=None):
    """S-layer on bit arrays of shape (..., 4, 4, 16): every column substituted."""
    lut = _SBOX_ARRAY if table is None else np.asarray(table, dtype=np.uint8)
    nib = bits[..., 0, :] << 3 | bits[..., 1, :] << 2 | bits[..., 2, :] << 1 | bits[..., 3, :]
    out = lut[nib]
    return np.stack([(out >> 3) & 1, (out >> 2) & 1, (out >> 1) & 1, out & 1], axis=-2)


def apply_columns(state, table=None):
    return State256._wrap(apply_bits(state.bits, table))


def apply_bitsliced(r0, r1, r2, r3):
    """Word-parallel S-box: lane ``i`` carries row ``i`` of many columns.

    Lanes may be any width (Python ints). Eight bitwise operations.
    """
    x = r0 ^ (r1 & r2)
    s = r3 ^ (x & r2)
    t = r2 ^ (s & r1)
    p = r1 ^ (x & s)
    return p, x, s, t


def compute_ddt(table=SBOX):
    ddt = [[0] * N for _ in range(N)]
    for dx in range(N):
        for x in range(N):
            ddt[dx][table[x] ^ table[x ^ dx]] += 1
    return ddt


def _parity(v):
    return bin(v).count("1") & 1


def compute_lat(table=SBOX):
    """``lat[a][b] = #{x : a.x == b.S(x)} - 8``."""
    lat = [[0] * N for _ in range(N)]
    for a in range(N):
        for b in range(N):
            agree = sum(1 for x in range(N) if _parity(a & x) == _parity(b & table[x]))
            lat[a][b] = agree - N // 2
    return lat


def max_differential(table=SBOX):
    ddt = compute_ddt(table)
    return max(ddt[dx][dy] for dx in range(1, N) for dy in range(N))


def max_linear_bias(table=SBOX):
    lat = compute_lat(table)
    return max(abs(lat[a][b]) for a in range(N) for b in range(N) if (a, b) != (0, 0))


def anf(table=SBOX):
    """ANF coefficient vectors of the four output bits, MSB output first.

    ``coeffs[k][u] == 1`` iff monomial ``prod(x_i for i in bits of u)`` appears
    in output bit ``3 - k``.
    """
    coeffs = []
    for k in range(4):
        f = [(table[x] >> (3 - k)) & 1 for x in range(N)]
        # Moebius transform, in place
        for i in range(4):
            for u in range(N):
                if u >> i & 1:
                    f[u] ^= f[u ^ (1 << i)]
        coeffs.append(f)
    return coeffs


def eval_anf(coeffs, x):
    out = 0
    for k, f in enumerate(coeffs):
        bit = 0
        for u in range(N):
            if f[u] and (x & u) == u:
                bit ^= 1
        out |= bit << (3 - k)
    return out


def algebraic_degree(table=SBOX):
    return max(
        (bin(u).count("1") for f in anf(table) for u in range(N) if f[u]),
        default=0,
    )
