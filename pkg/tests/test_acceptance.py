"""Exit criteria. One pass/fail line per criterion is printed in the
terminal summary ("acceptance criteria" section)."""

import time

import numpy as np
import pytest

from marvin import analysis, cipher, kat, lbox, permute, sbox
from marvin.cipher import CipherParams

SEED = 2024


@pytest.mark.acceptance(1, "S-box: involution, DDT max 4 (2^-2), |LAT| max 4 (corr 2^-1), degree 3, < 1 s")
def test_c1_sbox_claims():
    t0 = time.perf_counter()
    table = sbox.build_table()
    involutive = all(table[table[x]] == x for x in range(16))
    ddt_max = sbox.max_differential(table)
    lat_max = sbox.max_linear_bias(table)
    degree = sbox.algebraic_degree(table)
    elapsed = time.perf_counter() - t0
    print(f"C1 involutive={involutive} ddt_max={ddt_max} lat_max={lat_max} degree={degree} {elapsed:.3f}s")
    assert involutive
    assert ddt_max == 4 and ddt_max / 16 == 2.0 ** -2
    assert lat_max == 4 and 2 * lat_max / 16 == 2.0 ** -1
    assert degree == 3
    assert elapsed < 1.0


@pytest.mark.acceptance(2, "L-box: invertible, involutive, branch number 8 (exhaustive), < 1 s")
def test_c2_lbox_claims():
    t0 = time.perf_counter()
    m = lbox.default_matrix()
    report = lbox.validate(m)
    elapsed = time.perf_counter() - t0
    print(f"C2 {report} {elapsed:.3f}s")
    assert report.invertible
    assert report.involutive and m @ m == lbox.LBoxMatrix.identity()
    assert report.branch_number == 8
    assert elapsed < 1.0


@pytest.mark.acceptance(3, "wide trail: 8 x 5 = 40 active, 2^-80 diff, 2^-40 lin (4 rounds), 2^-560 (28 rounds)")
def test_c3_wide_trail_arithmetic():
    report = analysis.run_audit(cipher.default_params())
    b = report.claimed_bounds
    print(f"C3 B(L)={b['lbox_branch']} B(Theta)={b['theta_branch']} active={b['active_sbox_lower_bound_4r']} "
          f"diff4=2^{b['diff_char_bound_4r_log2']} lin4=2^{b['lin_char_bound_4r_log2']} "
          f"diff28=2^{b['diff_char_bound_full_log2']}")
    assert b["lbox_branch"] == 8 and b["theta_branch"] == 5
    assert b["active_sbox_lower_bound_4r"] == 40
    assert b["diff_char_bound_4r_log2"] == -80
    assert b["lin_char_bound_4r_log2"] == -40
    assert b["diff_char_bound_full_log2"] == -560
    assert b["rounds"] == 28
    assert b["diff_char_bound_4r"] == 2.0 ** -80
    assert b["diff_char_bound_full"] == 2.0 ** -560


@pytest.mark.acceptance(4, "PermuteSets: bijective, 4-to-each block spreading, pair splitting; theta branch reported")
def test_c4_permute_structure():
    t = permute.default_table()
    r = permute.validate_table(t)
    for b in range(4):
        counts = np.bincount([t.dest[16 * b + s] // 16 for s in range(16)], minlength=4)
        assert counts.tolist() == [4, 4, 4, 4]
    for i in range(0, 64, 2):
        assert t.dest[i] // 16 != t.dest[i + 1] // 16
    assert sorted(t.dest) == list(range(64))
    assert r.bijective and r.block_spreading and r.pair_splitting
    audit = analysis.run_audit(cipher.default_params())
    p = audit.permute
    print(f"C4 {r} measured B(Theta,Xi)={p['measured_block_branch']} claimed={p['claimed_block_branch']} "
          f"discrepancy={p['block_branch_discrepancy']}")
    assert isinstance(p["measured_block_branch"], int)
    assert p["claimed_block_branch"] == 5
    assert p["block_branch_discrepancy"] == (p["measured_block_branch"] != 5)


@pytest.mark.acceptance(5, "cipher: inverse law at rounds {0,1,4,28}, bitsliced == reference on 10k, golden KAT, < 30 s")
def test_c5_cipher_correctness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    for rounds in (0, 1, 4, 28):
        p = CipherParams(rounds)
        pairs = rng.integers(0, 256, (1000, 2, 32), dtype=np.uint8)
        for k, x in pairs:
            k, x = k.tobytes(), x.tobytes()
            assert cipher.decrypt_block(p, k, cipher.encrypt_block(p, k, x)) == x

    p = cipher.default_params()
    keys = rng.integers(0, 256, (10_000, 32), dtype=np.uint8)
    pts = rng.integers(0, 256, (10_000, 32), dtype=np.uint8)
    ref = cipher.encrypt_blocks(p, keys, pts)
    mismatches = sum(
        cipher.encrypt_block_bitsliced(p, keys[i].tobytes(), pts[i].tobytes()) != ref[i].tobytes()
        for i in range(10_000)
    )

    golden = kat.golden_kat()
    assert golden[0].key == bytes(32) and golden[0].pt == bytes(32)
    regenerated = kat.generate_kat(p)
    assert [(r.key, r.pt, r.ct) for r in regenerated] == [(r.key, r.pt, r.ct) for r in golden]
    bad_ref = kat.verify_kat(p, golden)
    bad_bs = kat.verify_kat(p, golden, bitsliced=True)
    elapsed = time.perf_counter() - t0
    print(f"C5 bitsliced mismatches={mismatches}/10000 golden ref_bad={len(bad_ref)} "
          f"bs_bad={len(bad_bs)} of {len(golden)} {elapsed:.1f}s")
    assert mismatches == 0
    assert bad_ref == [] and bad_bs == []
    assert elapsed < 30.0


@pytest.mark.acceptance(6, "avalanche: mean single-bit-flip distance at 28 rounds in [118, 138] over 1000 trials")
def test_c6_avalanche():
    p = cipher.default_params()
    rng = np.random.default_rng(SEED + 6)
    dists = []
    for _ in range(1000):
        k = rng.integers(0, 256, 32, dtype=np.uint8).tobytes()
        x = rng.integers(0, 256, 32, dtype=np.uint8).tobytes()
        bit = int(rng.integers(0, 256))
        dists.append(cipher.avalanche_probe(p, k, x, bit))
    mean = float(np.mean(dists))
    print(f"C6 mean={mean:.2f} min={min(dists)} max={max(dists)}")
    assert 118 <= mean <= 138
