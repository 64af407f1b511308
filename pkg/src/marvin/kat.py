"""Known-answer test files.

Records are ``KEY=``, ``PT=``, ``CT=`` lines of 64 hex digits (to_bytes byte
order), separated by blank lines.  ``#`` lines are comments.
"""

from importlib import resources
from typing import NamedTuple

import numpy as np

from .cipher import encrypt_block, encrypt_block_bitsliced, encrypt_blocks
from .state import NBYTES

DEFAULT_SEED = 20240928
RANDOM_RECORDS = 100
FIELDS = ("KEY", "PT", "CT")


class KatFormatError(ValueError):
    def __init__(self, lineno, msg):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class KatRecord(NamedTuple):
    key: bytes
    pt: bytes
    ct: bytes
    lineno: int = 0


def format_kat(records):
    chunks = [f"KEY={r.key.hex()}\nPT={r.pt.hex()}\nCT={r.ct.hex()}\n" for r in records]
    return "\n".join(chunks)


def parse_kat(text):
    records = []
    current, start = {}, 0

    def flush(lineno):
        if not current:
            return
        missing = [f for f in FIELDS if f not in current]
        if missing:
            raise KatFormatError(lineno, f"record starting at line {start} lacks {', '.join(missing)}")
        records.append(KatRecord(current["KEY"], current["PT"], current["CT"], start))
        current.clear()

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            flush(lineno)
            continue
        name, sep, value = line.partition("=")
        name = name.strip().upper()
        if not sep or name not in FIELDS:
            raise KatFormatError(lineno, f"expected KEY=, PT= or CT=, got {line!r}")
        if name in current:
            raise KatFormatError(lineno, f"duplicate {name} in record")
        try:
            data = bytes.fromhex(value.strip())
        except ValueError:
            raise KatFormatError(lineno, f"bad hex in {name}") from None
        if len(data) != NBYTES:
            raise KatFormatError(lineno, f"{name} must be {2 * NBYTES} hex digits")
        if not current:
            start = lineno
        current[name] = data
    flush(len(lines) + 1)
    return records


def kat_inputs(seed=DEFAULT_SEED, n_random=RANDOM_RECORDS):
    """Deterministic (key, plaintext) pairs for a KAT corpus."""
    zero, ones = bytes(NBYTES), b"\xff" * NBYTES

    def single(bit):
        out = bytearray(NBYTES)
        out[bit // 8] = 0x80 >> (bit % 8)
        return bytes(out)

    pairs = [(zero, zero), (ones, ones), (zero, ones), (ones, zero)]
    for bit in (0, 7, 8, 127, 128, 255):
        pairs.append((single(bit), zero))
        pairs.append((zero, single(bit)))
    rng = np.random.default_rng(seed)
    raw = rng.integers(0, 256, size=(n_random, 2, NBYTES), dtype=np.uint8)
    pairs += [(k.tobytes(), p.tobytes()) for k, p in raw]
    return pairs


def generate_kat(params, seed=DEFAULT_SEED, n_random=RANDOM_RECORDS):
    pairs = kat_inputs(seed, n_random)
    keys = np.array([list(k) for k, _ in pairs], dtype=np.uint8)
    pts = np.array([list(p) for _, p in pairs], dtype=np.uint8)
    cts = encrypt_blocks(params, keys, pts)
    return [KatRecord(k, p, c.tobytes()) for (k, p), c in zip(pairs, cts)]


def verify_kat(params, records, bitsliced=False):
    """Records whose ciphertext does not match a fresh encryption."""
    enc = encrypt_block_bitsliced if bitsliced else encrypt_block
    return [r for r in records if enc(params, r.key, r.pt) != r.ct]


def golden_kat_text():
    return resources.files("marvin").joinpath("data/kat_golden.txt").read_text()


def golden_kat():
    return parse_kat(golden_kat_text())
