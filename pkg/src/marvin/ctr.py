"""Counter mode around the 256-bit block cipher.

Counter block ``i`` is ``nonce (16 bytes) || i as a 128-bit big-endian int``;
the keystream is the concatenation of their encryptions.  Encryption and
decryption are the same XOR.
"""

import numpy as np

from .cipher import encrypt_blocks
from .state import NBYTES

NONCE_BYTES = 16
CHUNK_BLOCKS = 4096


def counter_block(nonce, i):
    if len(nonce) != NONCE_BYTES:
        raise ValueError(f"nonce must be {NONCE_BYTES} bytes, got {len(nonce)}")
    return bytes(nonce) + i.to_bytes(NBYTES - NONCE_BYTES, "big")


def _counter_array(nonce, start, count):
    out = np.zeros((count, NBYTES), dtype=np.uint8)
    out[:, :NONCE_BYTES] = np.frombuffer(bytes(nonce), dtype=np.uint8)
    idx = np.arange(start, start + count, dtype=np.uint64)
    # counters stay far below 2^64 for any file we can hold in memory
    for k in range(8):
        out[:, NBYTES - 1 - k] = (idx >> np.uint64(8 * k)) & np.uint64(0xFF)
    return out


def keystream(params, key, nonce, nbytes):
    if len(nonce) != NONCE_BYTES:
        raise ValueError(f"nonce must be {NONCE_BYTES} bytes, got {len(nonce)}")
    nblocks = -(-nbytes // NBYTES)
    parts = []
    for start in range(0, nblocks, CHUNK_BLOCKS):
        count = min(CHUNK_BLOCKS, nblocks - start)
        parts.append(encrypt_blocks(params, key, _counter_array(nonce, start, count)).reshape(-1))
    if not parts:
        return b""
    return np.concatenate(parts)[:nbytes].tobytes()


def ctr_xor(params, key, nonce, data):
    data = bytes(data)
    ks = np.frombuffer(keystream(params, key, nonce, len(data)), dtype=np.uint8)
    return (np.frombuffer(data, dtype=np.uint8) ^ ks).tobytes()
