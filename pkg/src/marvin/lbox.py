"""16x16 binary diffusion matrix applied to every 16-bit state row.

Vectors are 16-bit ints with component 0 in bit 15, matching the row
convention of :mod:`marvin.state`.  A matrix is stored as 16 such ints, one
per row.
"""

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .state import State256, pack_rows, unpack_rows

DIM = 16
MASK = (1 << DIM) - 1

POPCOUNT16 = np.array([bin(v).count("1") for v in range(1 << DIM)], dtype=np.uint8)


class MatrixFormatError(ValueError):
    pass


@dataclass(frozen=True)
class LBoxMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if len(rows) != DIM or any(not 0 <= r <= MASK for r in rows):
            raise ValueError("L-box matrix needs 16 rows of 16 bits")
        object.__setattr__(self, "rows", rows)

    def entry(self, i, j):
        return (self.rows[i] >> (DIM - 1 - j)) & 1

    def column(self, j):
        return sum(self.entry(i, j) << (DIM - 1 - i) for i in range(DIM))

    def mul_vector(self, v):
        """Row-parity product M.v (the slow, obviously-correct form)."""
        out = 0
        for i, row in enumerate(self.rows):
            out |= (bin(row & v).count("1") & 1) << (DIM - 1 - i)
        return out

    def __matmul__(self, other):
        # (A.B) row i = XOR of rows of B selected by row i of A
        rows = []
        for row in self.rows:
            acc = 0
            for j in range(DIM):
                if row >> (DIM - 1 - j) & 1:
                    acc ^= other.rows[j]
            rows.append(acc)
        return LBoxMatrix(tuple(rows))

    def to_text(self):
        return "\n".join(format(r, "016b") for r in self.rows) + "\n"

    @classmethod
    def identity(cls):
        return cls(tuple(1 << (DIM - 1 - i) for i in range(DIM)))

    @classmethod
    def zero(cls):
        return cls((0,) * DIM)


def load_matrix(text):
    """Parse 16 lines of 16 ``0``/``1`` chars; ``#`` lines and blanks skipped.

    No validation beyond shape; call :func:`validate`.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if len(line) != DIM:
            raise MatrixFormatError(f"line {lineno}: expected {DIM} columns, got {len(line)}")
        if set(line) - {"0", "1"}:
            raise MatrixFormatError(f"line {lineno}: only 0/1 allowed")
        rows.append(int(line, 2))
    if len(rows) != DIM:
        raise MatrixFormatError(f"expected {DIM} matrix rows, got {len(rows)}")
    return LBoxMatrix(tuple(rows))


def load_matrix_file(path):
    with open(path) as fh:
        return load_matrix(fh.read())


def default_matrix():
    text = resources.files("marvin").joinpath("data/lbox_default.txt").read_text()
    return load_matrix(text)


def rank(m):
    """Rank over GF(2) by Gaussian elimination on the row ints."""
    rows = list(m.rows)
    r = 0
    for bit in range(DIM - 1, -1, -1):
        pivot = next((i for i in range(r, DIM) if rows[i] >> bit & 1), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(DIM):
            if i != r and rows[i] >> bit & 1:
                rows[i] ^= rows[r]
        r += 1
    return r


def is_invertible(m):
    return rank(m) == DIM


def is_involutive(m):
    return m @ m == LBoxMatrix.identity()


def _image_table(m):
    # entry[v] = XOR of the columns selected by v
    v = np.arange(1 << DIM, dtype=np.uint32)
    out = np.zeros(1 << DIM, dtype=np.uint32)
    for j in range(DIM):
        out ^= ((v >> (DIM - 1 - j)) & 1) * np.uint32(m.column(j))
    return out.astype(np.uint16)


def branch_number(m):
    """min over all 65535 nonzero v of wt(v) + wt(M.v); exhaustive."""
    image = _image_table(m)
    weights = POPCOUNT16[1:].astype(np.int32) + POPCOUNT16[image[1:]]
    return int(weights.min())


@dataclass(frozen=True)
class LBoxReport:
    invertible: bool
    involutive: bool
    branch_number: int

    @property
    def usable(self):
        """Safe to use as a cipher layer (decryption reuses the same matrix)."""
        return self.invertible and self.involutive


def validate(m):
    return LBoxReport(
        invertible=is_invertible(m),
        involutive=is_involutive(m),
        branch_number=branch_number(m),
    )


class LBoxLookup:
    """65536-entry row lookup for a matrix; ``lookup[v] == M.v``."""

    def __init__(self, matrix):
        self.matrix = matrix
        self.table = _image_table(matrix)
        self.table.setflags(write=False)
        self._list = self.table.tolist()

    def __getitem__(self, v):
        return self._list[v]

    def __len__(self):
        return len(self._list)

    def as_list(self):
        return self._list

    def apply_bits(self, bits):
        """L-layer on bit arrays (..., 4, 4, 16): every row replaced by M.row."""
        return unpack_rows(self.table[pack_rows(bits)])


def build_lookup(m):
    return LBoxLookup(m)


def apply_state(state, lookup):
    return State256._wrap(lookup.apply_bits(state.bits))
