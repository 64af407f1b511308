"""PermuteSets: moves 4-bit Sets between the four state blocks.

A Set is half of a column pair: columns ``2p`` and ``2p+1`` of one block,
restricted to rows 0-1 (half 0) or rows 2-3 (half 1).  Its four bits are read
MSB-first as (top row, left col), (top row, right col), (bottom row, left
col), (bottom row, right col).

Sets are flattened as ``16*block + 2*pair + half``; within a block
``s = 2*pair + half`` runs over 0..15.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .state import NBLOCKS, NCOLS, NROWS, State256

NSETS = 64
SETS_PER_BLOCK = 16


class SetIndex(NamedTuple):
    block: int
    pair: int
    half: int

    @property
    def flat(self):
        return SETS_PER_BLOCK * self.block + 2 * self.pair + self.half

    @classmethod
    def from_flat(cls, i):
        if not 0 <= i < NSETS:
            raise IndexError(f"Set index {i} out of range 0..63")
        block, s = divmod(i, SETS_PER_BLOCK)
        return cls(block, s // 2, s % 2)

    def bit_positions(self):
        """(block, row, col) of the Set's bits, MSB first."""
        if not (0 <= self.block < NBLOCKS and 0 <= self.pair < 8 and self.half in (0, 1)):
            raise IndexError(f"invalid Set index {tuple(self)}")
        r0, c0 = 2 * self.half, 2 * self.pair
        return [
            (self.block, r0, c0),
            (self.block, r0, c0 + 1),
            (self.block, r0 + 1, c0),
            (self.block, r0 + 1, c0 + 1),
        ]


def _as_index(idx):
    return SetIndex.from_flat(idx) if isinstance(idx, int) else SetIndex(*idx)


def extract_set(state, idx):
    value = 0
    for b, r, c in _as_index(idx).bit_positions():
        value = value << 1 | int(state.bits[b, r, c])
    return value


def inject_set(state, idx, value):
    """Write a Set in place."""
    if not 0 <= value < 16:
        raise ValueError(f"Set value {value} is not a nibble")
    for k, (b, r, c) in enumerate(_as_index(idx).bit_positions()):
        state.bits[b, r, c] = (value >> (3 - k)) & 1


def _bit_flat(b, r, c):
    return (b * NROWS + r) * NCOLS + c


@dataclass(frozen=True)
class PermutationTable:
    """``dest[i]`` is the flattened destination of source Set ``i``."""

    dest: tuple

    def __post_init__(self):
        dest = tuple(int(d) for d in self.dest)
        if len(dest) != NSETS or any(not 0 <= d < NSETS for d in dest):
            raise ValueError("permutation table needs 64 entries in 0..63")
        object.__setattr__(self, "dest", dest)

    @property
    def is_bijective(self):
        return len(set(self.dest)) == NSETS

    def bit_gather(self):
        """Index array g with ``out_flat = in_flat[g]`` over the 256 state bits."""
        if not self.is_bijective:
            raise ValueError("permutation table is not bijective")
        gather = np.empty(NBLOCKS * NROWS * NCOLS, dtype=np.intp)
        for src in range(NSETS):
            src_bits = SetIndex.from_flat(src).bit_positions()
            dst_bits = SetIndex.from_flat(self.dest[src]).bit_positions()
            for s, d in zip(src_bits, dst_bits):
                gather[_bit_flat(*d)] = _bit_flat(*s)
        return gather

    def to_text(self):
        lines = [" ".join(str(d) for d in self.dest[i:i + 16]) for i in range(0, NSETS, 16)]
        return "\n".join(lines) + "\n"


def identity_table():
    return PermutationTable(tuple(range(NSETS)))


def default_table():
    """Source Set ``s = 4q + r`` of block ``b`` goes to block ``(b + r) % 4``,
    Set ``4q + b``."""
    dest = []
    for i in range(NSETS):
        b, s = divmod(i, SETS_PER_BLOCK)
        q, r = divmod(s, 4)
        dest.append(SETS_PER_BLOCK * ((b + r) % NBLOCKS) + 4 * q + b)
    return PermutationTable(tuple(dest))


def invert_table(t):
    if not t.is_bijective:
        raise ValueError("cannot invert a non-bijective permutation table")
    inv = [0] * NSETS
    for src, dst in enumerate(t.dest):
        inv[dst] = src
    return PermutationTable(tuple(inv))


def load_table(text):
    """Parse 64 whitespace-separated integers; ``#`` starts a comment."""
    tokens = []
    for line in text.splitlines():
        tokens.extend(line.split("#", 1)[0].split())
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as exc:
        raise ValueError(f"permutation file: {exc}") from None
    if len(values) != NSETS:
        raise ValueError(f"permutation file needs {NSETS} integers, got {len(values)}")
    return PermutationTable(tuple(values))


def load_table_file(path):
    with open(path) as fh:
        return load_table(fh.read())


class PermuteLayer:
    """Precompiled bit gathers for a validated table and its inverse."""

    def __init__(self, table):
        self.table = table
        self.inverse = invert_table(table)
        self._fwd = table.bit_gather()
        self._inv = self.inverse.bit_gather()

    def _gather(self, bits, idx):
        lead = bits.shape[:-3]
        flat = bits.reshape(lead + (-1,))
        return flat[..., idx].reshape(bits.shape)

    def apply_bits(self, bits):
        return self._gather(bits, self._fwd)

    def apply_inverse_bits(self, bits):
        return self._gather(bits, self._inv)


def apply(state, t):
    """Move every Set, as an atomic nibble, to ``t.dest``."""
    gather = t.bit_gather()
    return State256._wrap(state.bits.reshape(-1)[gather].reshape(state.bits.shape))


@dataclass(frozen=True)
class PermuteReport:
    bijective: bool
    block_spreading: bool
    pair_splitting: bool

    @property
    def ok(self):
        return self.bijective and self.block_spreading and self.pair_splitting


def validate_table(t):
    dest_block = [d // SETS_PER_BLOCK for d in t.dest]
    spreading = all(
        sorted(dest_block[b * SETS_PER_BLOCK:(b + 1) * SETS_PER_BLOCK]) == [0] * 4 + [1] * 4 + [2] * 4 + [3] * 4
        for b in range(NBLOCKS)
    )
    splitting = all(dest_block[i] != dest_block[i + 1] for i in range(0, NSETS, 2))
    return PermuteReport(bijective=t.is_bijective, block_spreading=spreading, pair_splitting=splitting)
