"""Marvin-256 encryption and decryption.

One round is ``X <- L(PermuteSets(S(X))) ^ K ^ C(r)``, preceded by whitening
with the key.  There is no key schedule: the same 256-bit key is added every
round.  Both S and L are involutions, so decryption reuses them and only the
Set permutation is inverted.

Two independent paths are provided: a reference path on numpy bit arrays
(batchable) and a bitsliced path on four 64-bit row lanes held in Python ints.
"""

import numpy as np

from . import lbox as _lbox
from . import permute as _permute
from .sbox import SBOX, apply_bits as _sbox_bits, apply_bitsliced
from .state import NBYTES, State256, bits_to_bytes, bytes_to_bits, hamming

DEFAULT_ROUNDS = 28
MAX_ROUNDS = 255
AES_POLY = 0x11B


def xtime(v):
    v <<= 1
    return v ^ AES_POLY if v & 0x100 else v


def rcon(i):
    """AES round-constant sequence: rcon(1) = 0x01, rcon(i) = xtime(rcon(i-1))."""
    if i < 1:
        raise ValueError("rcon index starts at 1")
    v = 1
    for _ in range(i - 1):
        v = xtime(v)
    return v


def round_constant_bytes(r):
    """C(r) as 32 bytes: byte 0 of block b holds rcon(r + 1) ^ b."""
    rc = rcon(r + 1)
    out = bytearray(NBYTES)
    for b in range(4):
        out[8 * b] = rc ^ b
    return bytes(out)


def round_constants(rounds):
    if not 1 <= rounds <= MAX_ROUNDS:
        raise ValueError(f"rounds must be in 1..{MAX_ROUNDS}, got {rounds}")
    return [State256.from_bytes(round_constant_bytes(r)) for r in range(rounds)]


def _check_block(data, what):
    data = bytes(data)
    if len(data) != NBYTES:
        raise ValueError(f"{what} must be {NBYTES} bytes, got {len(data)}")
    return data


class CipherParams:
    """Validated, immutable bundle of round count and layer components."""

    def __init__(self, rounds=DEFAULT_ROUNDS, lbox_matrix=None, permute_table=None):
        if not 0 <= rounds <= MAX_ROUNDS:
            raise ValueError(f"rounds must be in 0..{MAX_ROUNDS}, got {rounds}")
        lbox_matrix = lbox_matrix or _lbox.default_matrix()
        permute_table = permute_table or _permute.default_table()

        report = _lbox.validate(lbox_matrix)
        if not report.usable:
            raise ValueError(f"L-box matrix rejected: {report}")
        preport = _permute.validate_table(permute_table)
        if not preport.ok:
            raise ValueError(f"permutation table rejected: {preport}")

        self.rounds = rounds
        self.sbox = SBOX
        self.lbox = _lbox.build_lookup(lbox_matrix)
        self.lbox_report = report
        self.permute = permute_table
        self.constants = round_constants(rounds) if rounds else []
        self._player = _permute.PermuteLayer(permute_table)
        self._const_bits = np.array([c.bits for c in self.constants], dtype=np.uint8)
        self._bitsliced = None

    @property
    def bitsliced(self):
        if self._bitsliced is None:
            self._bitsliced = BitslicedMarvin(self)
        return self._bitsliced

    def __repr__(self):
        return f"CipherParams(rounds={self.rounds})"


_DEFAULT_PARAMS = {}


def default_params(rounds=DEFAULT_ROUNDS):
    if rounds not in _DEFAULT_PARAMS:
        _DEFAULT_PARAMS[rounds] = CipherParams(rounds)
    return _DEFAULT_PARAMS[rounds]


# reference path

def round_function_bits(params, bits):
    """Keyless part of one round, L o PermuteSets o S, on bit arrays."""
    bits = _sbox_bits(bits)
    bits = params._player.apply_bits(bits)
    return params.lbox.apply_bits(bits)


def encrypt_bits(params, key_bits, bits):
    x = bits ^ key_bits
    for r in range(params.rounds):
        x = round_function_bits(params, x)
        x = x ^ key_bits ^ params._const_bits[r]
    return x


def decrypt_bits(params, key_bits, bits):
    x = bits
    for r in reversed(range(params.rounds)):
        x = x ^ key_bits ^ params._const_bits[r]
        x = params.lbox.apply_bits(x)
        x = params._player.apply_inverse_bits(x)
        x = _sbox_bits(x)
    return x ^ key_bits


def encrypt_block(params, key, plaintext):
    key = _check_block(key, "key")
    plaintext = _check_block(plaintext, "plaintext")
    kb = bytes_to_bits(np.frombuffer(key, dtype=np.uint8))
    pb = bytes_to_bits(np.frombuffer(plaintext, dtype=np.uint8))
    return bits_to_bytes(encrypt_bits(params, kb, pb)).tobytes()


def decrypt_block(params, key, ciphertext):
    key = _check_block(key, "key")
    ciphertext = _check_block(ciphertext, "ciphertext")
    kb = bytes_to_bits(np.frombuffer(key, dtype=np.uint8))
    cb = bytes_to_bits(np.frombuffer(ciphertext, dtype=np.uint8))
    return bits_to_bytes(decrypt_bits(params, kb, cb)).tobytes()


def _batch(arr, what):
    arr = np.asarray(arr, dtype=np.uint8)
    if arr.shape[-1] != NBYTES:
        raise ValueError(f"{what} rows must be {NBYTES} bytes")
    return arr


def encrypt_blocks(params, keys, plaintexts):
    """Batched reference encryption: uint8 arrays (n, 32) -> (n, 32).

    ``keys`` may be a single 32-byte key shared by every block.
    """
    if isinstance(keys, (bytes, bytearray)):
        keys = np.frombuffer(_check_block(keys, "key"), dtype=np.uint8)
    kb = bytes_to_bits(_batch(keys, "key"))
    pb = bytes_to_bits(_batch(plaintexts, "plaintext"))
    return bits_to_bytes(encrypt_bits(params, kb, pb))


def decrypt_blocks(params, keys, ciphertexts):
    if isinstance(keys, (bytes, bytearray)):
        keys = np.frombuffer(_check_block(keys, "key"), dtype=np.uint8)
    kb = bytes_to_bits(_batch(keys, "key"))
    cb = bytes_to_bits(_batch(ciphertexts, "ciphertext"))
    return bits_to_bytes(decrypt_bits(params, kb, cb))


# bitsliced path

LANE_BITS = 64
ROW_MASK = 0xFFFF


def to_lanes(block):
    """32 bytes -> 4 lanes; lane r is row r of blocks 0..3, block 0 highest."""
    return [
        int.from_bytes(bytes(block[8 * b + 2 * r + k] for b in range(4) for k in range(2)), "big")
        for r in range(4)
    ]


def from_lanes(lanes):
    out = bytearray(NBYTES)
    for r, lane in enumerate(lanes):
        raw = lane.to_bytes(8, "big")
        for b in range(4):
            out[8 * b + 2 * r] = raw[2 * b]
            out[8 * b + 2 * r + 1] = raw[2 * b + 1]
    return bytes(out)


def compile_permute_schedule(table):
    """Mask-and-shift program for PermuteSets on row lanes.

    Returns ``[(src_lane, dst_lane, shift, mask), ...]`` where the moved bits
    are ``(lanes[src] & mask)`` shifted left by ``shift`` (right if negative).
    Moves sharing lane pair and shift are merged into a single mask.
    """
    groups = {}
    for src in range(_permute.NSETS):
        s = _permute.SetIndex.from_flat(src)
        d = _permute.SetIndex.from_flat(table.dest[src])
        src_low = LANE_BITS - 2 - (16 * s.block + 2 * s.pair)
        dst_low = LANE_BITS - 2 - (16 * d.block + 2 * d.pair)
        for k in range(2):
            key = (2 * s.half + k, 2 * d.half + k, dst_low - src_low)
            groups[key] = groups.get(key, 0) | 3 << src_low
    return [(sl, dl, sh, mask) for (sl, dl, sh), mask in sorted(groups.items())]


def _run_schedule(schedule, lanes):
    out = [0, 0, 0, 0]
    for sl, dl, sh, mask in schedule:
        v = lanes[sl] & mask
        out[dl] |= v << sh if sh >= 0 else v >> -sh
    return out


class BitslicedMarvin:
    """Row-lane implementation: S in 8 word ops, L by per-block row lookups."""

    def __init__(self, params):
        self.rounds = params.rounds
        self.lookup = params.lbox.as_list()
        self.forward = compile_permute_schedule(params.permute)
        self.backward = compile_permute_schedule(_permute.invert_table(params.permute))
        self.constants = [to_lanes(c.to_bytes()) for c in params.constants]

    def _lbox(self, lanes):
        lut = self.lookup
        return [
            lut[lane >> 48] << 48
            | lut[(lane >> 32) & ROW_MASK] << 32
            | lut[(lane >> 16) & ROW_MASK] << 16
            | lut[lane & ROW_MASK]
            for lane in lanes
        ]

    def round_keys(self, key):
        k = to_lanes(key)
        return k, [[ki ^ ci for ki, ci in zip(k, c)] for c in self.constants]

    def encrypt(self, key, plaintext):
        k, rks = self.round_keys(key)
        x = [p ^ ki for p, ki in zip(to_lanes(plaintext), k)]
        for rk in rks:
            x = apply_bitsliced(*x)
            x = _run_schedule(self.forward, x)
            x = self._lbox(x)
            x = [xi ^ ri for xi, ri in zip(x, rk)]
        return from_lanes(x)

    def decrypt(self, key, ciphertext):
        k, rks = self.round_keys(key)
        x = to_lanes(ciphertext)
        for rk in reversed(rks):
            x = [xi ^ ri for xi, ri in zip(x, rk)]
            x = self._lbox(x)
            x = _run_schedule(self.backward, x)
            x = list(apply_bitsliced(*x))
        return from_lanes([xi ^ ki for xi, ki in zip(x, k)])


def encrypt_block_bitsliced(params, key, plaintext):
    key = _check_block(key, "key")
    plaintext = _check_block(plaintext, "plaintext")
    return params.bitsliced.encrypt(key, plaintext)


def decrypt_block_bitsliced(params, key, ciphertext):
    key = _check_block(key, "key")
    ciphertext = _check_block(ciphertext, "ciphertext")
    return params.bitsliced.decrypt(key, ciphertext)


def flip_bit(block, bit):
    """Flip state bit ``bit`` (0 = block 0, row 0, column 0; MSB of byte 0)."""
    if not 0 <= bit < 8 * NBYTES:
        raise IndexError(f"bit {bit} out of range 0..255")
    out = bytearray(block)
    out[bit // 8] ^= 0x80 >> (bit % 8)
    return bytes(out)


def avalanche_probe(params, key, plaintext, bit):
    """Hamming distance between E(p) and E(p with one bit flipped)."""
    c0 = encrypt_block(params, key, plaintext)
    c1 = encrypt_block(params, key, flip_bit(plaintext, bit))
    return hamming(c0, c1)
