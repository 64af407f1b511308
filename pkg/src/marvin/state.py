"""256-bit Marvin state: 4 blocks of 4 rows x 16 columns of bits.

Byte layout (the wire format used by the CLI and KAT files): block ``b``
occupies bytes ``8b..8b+7``; row ``r`` of that block is bytes ``8b+2r`` and
``8b+2r+1``, MSB-first, so column 0 is bit 7 of byte ``8b+2r``.

Bits are kept in a numpy ``uint8`` array of shape ``(4, 4, 16)`` indexed
``[block, row, column]``.  The array helpers at the bottom accept any number
of leading batch dimensions.
"""

import numpy as np

NBLOCKS = 4
NROWS = 4
NCOLS = 16
NBYTES = 32
SHAPE = (NBLOCKS, NROWS, NCOLS)

_ROW_WEIGHTS = (1 << np.arange(NCOLS - 1, -1, -1)).astype(np.uint32)
_ROW_SHIFTS = np.arange(NCOLS - 1, -1, -1, dtype=np.uint32)


def _check_index(name, value, bound):
    if not 0 <= value < bound:
        raise IndexError(f"{name} index {value} out of range 0..{bound - 1}")


class State256:
    """Mutable-by-setter value holding the 256 state bits.

    Every operation other than ``set_column``/``set_row`` returns a new state.
    """

    __slots__ = ("bits",)

    def __init__(self, bits=None):
        if bits is None:
            self.bits = np.zeros(SHAPE, dtype=np.uint8)
            return
        bits = np.asarray(bits)
        if bits.shape != SHAPE:
            raise ValueError(f"state must have shape {SHAPE}, got {bits.shape}")
        if np.any(bits > 1):
            raise ValueError("state bits must be 0 or 1")
        self.bits = bits.astype(np.uint8, copy=True)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def from_bytes(cls, data):
        data = bytes(data)
        if len(data) != NBYTES:
            raise ValueError(f"state needs exactly {NBYTES} bytes, got {len(data)}")
        arr = np.frombuffer(data, dtype=np.uint8)
        return cls._wrap(bytes_to_bits(arr))

    @classmethod
    def _wrap(cls, bits):
        # trusted internal constructor, no validation or copy
        obj = cls.__new__(cls)
        obj.bits = bits
        return obj

    def to_bytes(self):
        return bits_to_bytes(self.bits).tobytes()

    def copy(self):
        return State256._wrap(self.bits.copy())

    def get_column(self, block, col):
        """Column nibble; row 0 is the MSB (bit ``a``), row 3 the LSB."""
        _check_index("block", block, NBLOCKS)
        _check_index("column", col, NCOLS)
        b = self.bits[block, :, col]
        return int(b[0]) << 3 | int(b[1]) << 2 | int(b[2]) << 1 | int(b[3])

    def set_column(self, block, col, value):
        _check_index("block", block, NBLOCKS)
        _check_index("column", col, NCOLS)
        if not 0 <= value < 16:
            raise ValueError(f"column value {value} is not a nibble")
        for r in range(NROWS):
            self.bits[block, r, col] = (value >> (3 - r)) & 1

    def get_row(self, block, row):
        """16-bit row; column 0 is the MSB."""
        _check_index("block", block, NBLOCKS)
        _check_index("row", row, NROWS)
        return int(pack_rows(self.bits[block, row]))

    def set_row(self, block, row, value):
        _check_index("block", block, NBLOCKS)
        _check_index("row", row, NROWS)
        if not 0 <= value < 1 << 16:
            raise ValueError(f"row value {value} is not 16 bits")
        self.bits[block, row] = unpack_rows(np.uint32(value))

    def get_bit(self, block, row, col):
        _check_index("block", block, NBLOCKS)
        _check_index("row", row, NROWS)
        _check_index("column", col, NCOLS)
        return int(self.bits[block, row, col])

    def xor(self, other):
        return State256._wrap(self.bits ^ other.bits)

    __xor__ = xor

    def popcount(self):
        return int(self.bits.sum())

    def __eq__(self, other):
        if not isinstance(other, State256):
            return NotImplemented
        return bool(np.array_equal(self.bits, other.bits))

    __hash__ = None

    def __repr__(self):
        return f"State256({self.to_bytes().hex()})"


def bytes_to_bits(arr):
    """uint8 array (..., 32) -> bit array (..., 4, 4, 16)."""
    arr = np.asarray(arr, dtype=np.uint8)
    bits = np.unpackbits(arr, axis=-1)
    return bits.reshape(arr.shape[:-1] + SHAPE)


def bits_to_bytes(bits):
    """Bit array (..., 4, 4, 16) -> uint8 array (..., 32)."""
    flat = bits.reshape(bits.shape[:-3] + (NBLOCKS * NROWS * NCOLS,))
    return np.packbits(flat, axis=-1)


def pack_rows(bits):
    """Bit array (..., 16) -> row values (...), column 0 as MSB."""
    return (bits.astype(np.uint32) * _ROW_WEIGHTS).sum(axis=-1, dtype=np.uint32)


def unpack_rows(values):
    """Row values (...) -> bit array (..., 16)."""
    values = np.asarray(values, dtype=np.uint32)
    return ((values[..., None] >> _ROW_SHIFTS) & 1).astype(np.uint8)


def hamming(a, b):
    """Bit distance between two equal-length byte strings."""
    return sum(bin(x ^ y).count("1") for x, y in zip(a, b, strict=True))
