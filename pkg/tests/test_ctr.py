import numpy as np
import pytest

from marvin import ctr
from marvin.cipher import encrypt_block

KEY = bytes(range(32))
NONCE = bytes.fromhex("000102030405060708090a0b0c0d0e0f")


def test_counter_block_layout():
    assert ctr.counter_block(NONCE, 0) == NONCE + bytes(16)
    assert ctr.counter_block(NONCE, 258)[-2:] == b"\x01\x02"
    with pytest.raises(ValueError):
        ctr.counter_block(b"short", 0)


@pytest.mark.parametrize("n", [0, 1, 31, 32, 33, 1000])
def test_roundtrip(params, n, rng):
    data = rng.integers(0, 256, n, dtype=np.uint8).tobytes()
    ct = ctr.ctr_xor(params, KEY, NONCE, data)
    assert len(ct) == n
    assert ctr.ctr_xor(params, KEY, NONCE, ct) == data


def test_nonce_changes_ciphertext(params, rng):
    data = rng.integers(0, 256, 1024, dtype=np.uint8).tobytes()
    other = bytes(15) + b"\x01"
    assert ctr.ctr_xor(params, KEY, NONCE, data) != ctr.ctr_xor(params, KEY, other, data)


def test_keystream_is_block_encryptions(params):
    ks = ctr.keystream(params, KEY, NONCE, 5 * 32 - 7)
    expected = b"".join(encrypt_block(params, KEY, ctr.counter_block(NONCE, i)) for i in range(5))
    assert ks == expected[: 5 * 32 - 7]


def test_mib_keystream_matches_block_oracle(params):
    n = 1 << 20
    nblocks = n // 32
    ks = ctr.keystream(params, KEY, NONCE, n)
    assert len(ks) == n
    rnd = np.random.default_rng(5)
    # chunk edges plus a random sample; a full single-block sweep takes ~1 min
    picks = {0, 1, ctr.CHUNK_BLOCKS - 1, ctr.CHUNK_BLOCKS, nblocks - 1}
    picks |= set(rnd.integers(0, nblocks, 120).tolist())
    for i in sorted(picks):
        assert ks[32 * i: 32 * i + 32] == encrypt_block(params, KEY, ctr.counter_block(NONCE, i))
