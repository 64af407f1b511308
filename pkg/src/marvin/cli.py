"""Command-line front end: file encryption (CTR), KATs, audit, config checks.

Exit status: 0 success, 1 a check failed (KAT mismatch, audit hard claim,
invalid config), 2 usage or input error.
"""

import argparse
import logging
import sys

from . import analysis, ctr, kat
from . import lbox as _lbox
from . import permute as _permute
from .cipher import DEFAULT_ROUNDS, CipherParams, decrypt_block, encrypt_block
from .state import NBYTES

log = logging.getLogger("marvin")


class UsageError(Exception):
    pass


def parse_hex(text, nbytes, what):
    text = text.strip()
    try:
        data = bytes.fromhex(text)
    except ValueError:
        raise UsageError(f"{what}: not a hex string") from None
    if len(data) != nbytes:
        raise UsageError(f"{what}: need {nbytes} bytes ({2 * nbytes} hex digits), got {len(data)}")
    return data


def resolve_key(spec):
    """``<hex>`` or ``@path``; a key file holds 32 raw bytes or 64 hex digits."""
    if spec is None:
        raise UsageError("--key is required")
    if spec.startswith("@"):
        try:
            with open(spec[1:], "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise UsageError(f"key file: {exc}") from None
        if len(raw) == NBYTES:
            return raw
        try:
            return parse_hex(raw.decode("ascii"), NBYTES, "key file")
        except UnicodeDecodeError:
            raise UsageError("key file: neither 32 raw bytes nor hex") from None
    return parse_hex(spec, NBYTES, "key")


def load_components(args):
    matrix = table = None
    if getattr(args, "lbox", None):
        try:
            matrix = _lbox.load_matrix_file(args.lbox)
        except (OSError, ValueError) as exc:
            raise UsageError(f"--lbox: {exc}") from None
    if getattr(args, "permute", None):
        try:
            table = _permute.load_table_file(args.permute)
        except (OSError, ValueError) as exc:
            raise UsageError(f"--permute: {exc}") from None
    return matrix, table


def build_params(args):
    matrix, table = load_components(args)
    try:
        return CipherParams(args.rounds, lbox_matrix=matrix, permute_table=table)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def read_input(path):
    try:
        if path is None or path == "-":
            return sys.stdin.buffer.read()
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"input: {exc}") from None


def write_output(path, data):
    try:
        if path is None or path == "-":
            if isinstance(data, str):
                sys.stdout.write(data)
            else:
                sys.stdout.buffer.write(data)
            return
        mode = "w" if isinstance(data, str) else "wb"
        with open(path, mode) as fh:
            fh.write(data)
    except OSError as exc:
        raise UsageError(f"output: {exc}") from None


def cmd_encrypt(args):
    params = build_params(args)
    key = resolve_key(args.key)
    data = read_input(args.infile)
    if args.raw_block:
        if len(data) != NBYTES:
            raise UsageError(f"--raw-block needs exactly {NBYTES} bytes of input, got {len(data)}")
        write_output(args.out, encrypt_block(params, key, data))
        return 0
    if args.nonce is None:
        raise UsageError("--nonce is required for CTR encryption")
    nonce = parse_hex(args.nonce, ctr.NONCE_BYTES, "nonce")
    write_output(args.out, nonce + ctr.ctr_xor(params, key, nonce, data))
    return 0


def cmd_decrypt(args):
    params = build_params(args)
    key = resolve_key(args.key)
    data = read_input(args.infile)
    if args.raw_block:
        if len(data) != NBYTES:
            raise UsageError(f"--raw-block needs exactly {NBYTES} bytes of input, got {len(data)}")
        write_output(args.out, decrypt_block(params, key, data))
        return 0
    if len(data) < ctr.NONCE_BYTES:
        raise UsageError("input shorter than the 16-byte nonce header")
    nonce, body = data[:ctr.NONCE_BYTES], data[ctr.NONCE_BYTES:]
    if args.nonce is not None and parse_hex(args.nonce, ctr.NONCE_BYTES, "nonce") != nonce:
        log.warning("--nonce differs from the file header; using the header")
    write_output(args.out, ctr.ctr_xor(params, key, nonce, body))
    return 0


def cmd_kat_generate(args):
    params = build_params(args)
    records = kat.generate_kat(params, seed=args.seed, n_random=args.count)
    header = f"# Marvin-256 KAT, rounds={params.rounds}, seed={args.seed}\n\n"
    write_output(args.out, header + kat.format_kat(records))
    return 0


def cmd_kat_verify(args):
    params = build_params(args)
    raw = read_input(args.infile)
    try:
        records = kat.parse_kat(raw.decode("ascii"))
    except (UnicodeDecodeError, kat.KatFormatError) as exc:
        raise UsageError(f"KAT file: {exc}") from None
    bad = kat.verify_kat(params, records, bitsliced=args.bitsliced)
    for r in bad:
        print(f"MISMATCH record at line {r.lineno}: KEY={r.key.hex()}", file=sys.stderr)
    path = "bitsliced" if args.bitsliced else "reference"
    print(f"{len(records) - len(bad)}/{len(records)} records match ({path} path)")
    return 1 if bad else 0


def cmd_audit(args):
    params = build_params(args)
    report = analysis.run_audit(params)
    print(report.render_text())
    if args.out:
        write_output(args.out, report.to_json() + "\n")
    return 0 if report.passed else 1


def cmd_validate_config(args):
    matrix, table = load_components(args)
    matrix = matrix or _lbox.default_matrix()
    table = table or _permute.default_table()
    lrep = _lbox.validate(matrix)
    prep = _permute.validate_table(table)
    print(f"lbox: invertible={lrep.invertible} involutive={lrep.involutive} branch_number={lrep.branch_number}")
    print(f"permute: bijective={prep.bijective} block_spreading={prep.block_spreading} "
          f"pair_splitting={prep.pair_splitting}")
    ok = lrep.usable and prep.ok
    print("config OK" if ok else "config REJECTED")
    return 0 if ok else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)
    common.add_argument("--lbox", metavar="PATH", help="L-box matrix file (16 lines of 16 0/1)")
    common.add_argument("--permute", metavar="PATH", help="PermuteSets table file (64 integers)")

    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--in", dest="infile", metavar="PATH", help="input file (default stdin)")
    io.add_argument("--out", metavar="PATH", help="output file (default stdout)")

    parser = argparse.ArgumentParser(
        prog="marvin",
        description="Marvin-256 research block cipher (unaudited; do not protect real data).",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (
        ("encrypt", cmd_encrypt, "CTR-encrypt a file (16-byte nonce header prepended)"),
        ("decrypt", cmd_decrypt, "CTR-decrypt a file produced by encrypt"),
    ):
        p = sub.add_parser(name, parents=[common, io], help=helptext)
        p.add_argument("--key", required=True, help="64 hex digits or @keyfile")
        p.add_argument("--nonce", help="32 hex digits; required for encrypt")
        p.add_argument("--raw-block", action="store_true", help="single 32-byte block, no mode")
        p.set_defaults(func=fn)

    p = sub.add_parser("kat-gen", parents=[common, io], help="write a deterministic KAT corpus")
    p.add_argument("--seed", type=int, default=kat.DEFAULT_SEED)
    p.add_argument("--count", type=int, default=kat.RANDOM_RECORDS, help="seeded random records")
    p.set_defaults(func=cmd_kat_generate)

    p = sub.add_parser("kat-verify", parents=[common, io], help="re-encrypt and check a KAT file")
    p.add_argument("--bitsliced", action="store_true", help="verify with the bitsliced path")
    p.set_defaults(func=cmd_kat_verify)

    p = sub.add_parser("audit", parents=[common], help="recompute component claims and bounds")
    p.add_argument("--out", metavar="PATH", help="also write the JSON report here")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("validate-config", parents=[common], help="check --lbox/--permute files")
    p.set_defaults(func=cmd_validate_config)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"marvin {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
