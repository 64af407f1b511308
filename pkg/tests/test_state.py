import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from marvin.state import State256, bits_to_bytes, bytes_to_bits

blocks32 = st.binary(min_size=32, max_size=32)


def test_zero_bytes_is_zero_state():
    s = State256.from_bytes(bytes(32))
    assert s == State256.zero()
    assert s.to_bytes() == bytes(32)


def test_msb_of_first_byte_is_block0_row0_col0():
    s = State256.from_bytes(b"\x80" + bytes(31))
    assert s.popcount() == 1
    assert s.get_bit(0, 0, 0) == 1


def test_byte8_lsb_is_block1_row0_col7():
    data = bytearray(32)
    data[8] = 0x01
    s = State256.from_bytes(data)
    assert s.popcount() == 1
    assert s.get_bit(1, 0, 7) == 1


def test_last_bit_serializes_to_byte31_lsb():
    s = State256.zero()
    s.set_column(3, 15, 0x1)  # row 3 is the nibble LSB
    assert s.to_bytes() == bytes(31) + b"\x01"


@pytest.mark.parametrize("n", [0, 31, 33])
def test_from_bytes_rejects_wrong_length(n):
    with pytest.raises(ValueError):
        State256.from_bytes(bytes(n))


def test_column_accessors():
    s = State256.zero()
    assert s.get_column(1, 4) == 0
    t = State256.zero()
    t.bits[0, 0, 5] = 1
    assert t.get_column(0, 5) == 0x8
    s.set_column(2, 9, 0xA)
    assert s.get_column(2, 9) == 0xA


def test_row_accessors_share_bits_with_columns():
    s = State256.zero()
    assert s.get_row(0, 0) == 0
    s.set_column(3, 0, 0x8)
    assert s.get_row(3, 0) == 0x8000
    t = State256.zero()
    t.set_row(1, 2, 0xFFFF)
    assert all(t.get_column(1, c) == 0x2 for c in range(16))


@pytest.mark.parametrize("args", [(4, 0), (0, 16), (-1, 0)])
def test_column_index_errors(args):
    with pytest.raises(IndexError):
        State256.zero().get_column(*args)


def test_row_index_errors():
    with pytest.raises(IndexError):
        State256.zero().get_row(0, 4)
    with pytest.raises(ValueError):
        State256.zero().set_row(0, 0, 1 << 16)


def test_shape_is_enforced():
    with pytest.raises(ValueError):
        State256(np.zeros((4, 4, 8), dtype=np.uint8))


@given(blocks32)
def test_roundtrip(x):
    assert State256.from_bytes(x).to_bytes() == x


@given(blocks32)
def test_row_and_column_views_agree(x):
    s = State256.from_bytes(x)
    for b in range(4):
        for r in range(4):
            row = s.get_row(b, r)
            for c in range(16):
                assert (row >> (15 - c)) & 1 == (s.get_column(b, c) >> (3 - r)) & 1


@given(blocks32, blocks32, blocks32)
def test_xor_laws(x, y, z):
    a, b, c = (State256.from_bytes(v) for v in (x, y, z))
    zero = State256.zero()
    assert a ^ zero == a
    assert a ^ a == zero
    assert a ^ b == b ^ a
    assert (a ^ b) ^ c == a ^ (b ^ c)
    assert (a ^ b).to_bytes() == bytes(p ^ q for p, q in zip(x, y))


def test_batched_helpers_match_single(rng):
    raw = rng.integers(0, 256, (5, 32), dtype=np.uint8)
    bits = bytes_to_bits(raw)
    assert bits.shape == (5, 4, 4, 16)
    for i in range(5):
        assert np.array_equal(bits[i], State256.from_bytes(raw[i].tobytes()).bits)
    assert np.array_equal(bits_to_bytes(bits), raw)


def test_setters_do_not_alias():
    s = State256.zero()
    t = s.copy()
    t.set_column(0, 0, 0xF)
    assert s == State256.zero()
    u = s ^ State256.zero()
    u.set_row(0, 0, 1)
    assert s == State256.zero()
