"""Exit criteria for the package, one test per criterion.

Each test records a ``criterion N: PASS|FAIL ...`` line, printed in the
terminal summary, and then asserts.
"""

import shutil
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import bfs_leq, top_k
from polarorder import construction
from polarorder.cli import main
from polarorder.dimension_reduction import DrConfig, dr_update
from polarorder.index import BitIndex, split
from polarorder.partial_order import (
    Relation,
    Source,
    combined_leq,
    leq_matrix,
    po_relation_matrix,
)
from polarorder.reliability import (
    ChannelModel,
    bec_bhattacharyya,
    rank_channels,
    ranking_from_metric,
)

AWGN1 = ChannelModel.awgn(1.0)
EPS_GRID = [round(0.1 * k, 1) for k in range(1, 10)]
RATES = [round(0.05 * k, 2) for k in range(1, 20)]


def record(number, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def _fresh_pipeline():
    construction._po_matrix.cache_clear()


def test_c1_po_only_half_determined():
    _fresh_pipeline()
    t = time.perf_counter()
    c = construction.construct(10, 0.5)
    dt = time.perf_counter() - t
    frac = c.determined_fraction
    ok = 0.45 <= frac <= 0.55 and dt < 10.0
    assert record(1, ok, f"PO n=10 R=0.5 determined={frac:.4f} in [0.45, 0.55], {dt:.2f}s < 10s")


def test_c2_po_dr_awgn():
    _fresh_pipeline()
    t = time.perf_counter()
    c = construction.construct(10, 0.5, AWGN1, use_dr=True, n_u=7, closure=True)
    dt = time.perf_counter() - t
    plain = construction.construct(10, 0.5, AWGN1, use_dr=True, n_u=7).determined_fraction
    frac = c.determined_fraction
    ok = 0.77 <= frac <= 0.87 and dt < 30.0
    assert record(
        2,
        ok,
        f"PO+DR(+closure) n=10 R=0.5 awgn:1.0 n_u=7 determined={frac:.4f} in [0.77, 0.87], "
        f"{dt:.2f}s < 30s (without closure: {plain:.4f})",
    )


def test_c3_po_only_low_rate():
    g = construction.construct(9, 0.1).gamma
    assert record(3, 0.07 <= g <= 0.11, f"PO n=9 R=0.1 gamma={g:.4f} in [0.07, 0.11]")


def test_c4_rate_sweep_shape():
    po = dict(construction.gamma_sweep_rate(9, AWGN1, False, RATES))
    dr = dict(construction.gamma_sweep_rate(9, AWGN1, True, RATES))
    po_peak = po[0.5] == max(po.values())
    dr_peak = dr[0.5] == max(dr.values())
    below = all(dr[r] <= po[r] for r in RATES)
    ok = po_peak and dr_peak and below
    assert record(
        4,
        ok,
        f"n=9 sweep: PO max at 0.5={po_peak} ({po[0.5]:.4f}), PO+DR max at 0.5={dr_peak} "
        f"({dr[0.5]:.4f}), PO+DR <= PO pointwise={below}",
    )


def test_c5_counter_equals_closure_oracle():
    t = time.perf_counter()
    mismatches = 0
    pairs = 0
    for n in range(1, 9):
        oracle = bfs_leq(n)
        counter = leq_matrix(n)
        mismatches += int(np.sum(oracle != counter))
        N = 2**n
        for i in range(1, N + 1):
            bi = BitIndex(i, n)
            for j in range(1, N + 1):
                mismatches += combined_leq(BitIndex(j, n), bi) != oracle[i - 1, j - 1]
        pairs += N * N
    dt = time.perf_counter() - t
    ok = mismatches == 0 and dt < 60.0
    assert record(5, ok, f"n<=8: {mismatches} mismatches over {pairs} ordered pairs, {dt:.1f}s < 60s")


def test_c6_bec_soundness():
    violations = 0
    checked = 0
    for n in range(1, 11):
        po = po_relation_matrix(n)
        for eps in EPS_GRID:
            z = bec_bhattacharyya(n, eps)
            mats = [po]
            if n >= 4:
                rk = rank_channels(ChannelModel.bec(eps), n - 3)
                mats.append(dr_update(po, DrConfig(n=n, ranking=rk)))
                mats.append(dr_update(po, DrConfig(n=n, ranking=rk, apply_closure=True)))
            for R in mats:
                B = R.better_matrix()
                violations += int(np.sum(B & (z[:, None] > z[None, :])))
                checked += int(B.sum())
    assert record(6, violations == 0, f"n<=10, eps grid: {violations} violations in {checked} relations")


def test_c7_bec_conservation():
    worst = 0.0
    for n in range(1, 13):
        for eps in EPS_GRID:
            z = bec_bhattacharyya(n, eps)
            worst = max(worst, abs(z.sum() - 2**n * eps) / (2**n * eps))
    assert record(7, worst <= 1e-9, f"n<=12: max relative error {worst:.2e} <= 1e-9")


def test_c8_resolution_matches_bruteforce():
    failures = []
    model = ChannelModel.bec(0.5)
    for n in range(2, 11):
        N = 2**n
        truth = list(-bec_bhattacharyya(n, 0.5))
        for frac in (0.25, 0.5, 0.75):
            K = int(N * frac)
            for use_dr in (False, True):
                c = construction.construct(n, frac, model, use_dr=use_dr, resolve_u=True)
                if c.I != top_k(truth, K):
                    failures.append((n, K, use_dr))
    assert record(8, not failures, f"n in 2..10, K in N/4,N/2,3N/4, PO and PO+DR: {len(failures)} mismatches")


def test_c9_worked_example_pair():
    i, j = 159, 108
    (iu, _), (ju, _) = split(i, 5, 3), split(j, 5, 3)
    incomparable = not combined_leq(BitIndex(j, 8), BitIndex(i, 8)) and not combined_leq(
        BitIndex(i, 8), BitIndex(j, 8)
    )
    po = po_relation_matrix(8)
    unknown = po.get(i, j)[0] is Relation.UNKNOWN
    models = [ChannelModel.bec(e) for e in EPS_GRID] + [ChannelModel.awgn(s) for s in (-2.0, 1.0, 3.0)]
    rankings = [(str(m), rank_channels(m, 5)) for m in models]
    # plugged rankings forcing each direction on the upper pair
    base = rank_channels(ChannelModel.bec(0.5), 5).metric
    hi, lo = max(base[iu - 1], base[ju - 1]), min(base[iu - 1], base[ju - 1])
    for name, a, b in (("forced 20>14", iu, ju), ("forced 14>20", ju, iu)):
        m = base.copy()
        m[a - 1], m[b - 1] = hi, lo
        rankings.append((name, ranking_from_metric(m, 5, ChannelModel.bec(0.5), evaluator="forced")))
    missed = []
    strict_cases = 0
    for name, rk in rankings:
        if not (rk.better(iu, ju) or rk.better(ju, iu)):
            continue
        strict_cases += 1
        rel, src = dr_update(po, DrConfig(n=8, n_u=5, ranking=rk)).get(i, j)
        if rel is Relation.UNKNOWN or src is not Source.DR:
            missed.append(name)
    ok = incomparable and unknown and not missed
    assert record(
        9,
        ok,
        f"(10011110)_b vs (01101011)_b PO-incomparable={incomparable and unknown}; "
        f"DR-determined under {strict_cases - len(missed)}/{strict_cases} strict upper rankings"
        + (f" (undetermined under: {', '.join(missed)})" if missed else ""),
    )


COMMANDS = [
    ["relation", "-n", "9"],
    ["construct", "-n", "10", "-R", "0.5", "--channel", "awgn:1.0", "--dr"],
    ["construct", "-n", "9", "-R", "0.1"],
    ["construct", "-n", "8", "-R", "0.5", "--channel", "bec:0.5", "--dr", "--closure", "--resolve"],
    ["sweep", "rate", "-n", "8", "--rates", "0.1,0.5,0.9"],
    ["sweep", "blocklength", "--ns", "4..8", "-R", "0.5"],
    ["render", "-n", "7", "--channel", "awgn:1.0", "--out", "{out}"],
    ["rank", "--channel", "awgn:1.0", "--nu", "6"],
]


def _run_all(cache, outdir, capsysbinary):
    outdir.mkdir()
    results = []
    for k, cmd in enumerate(COMMANDS):
        target = outdir / f"out{k}.bin"
        argv = [a.format(out=target) for a in cmd]
        if "--out" not in argv:
            argv += ["--out", str(target)] if argv[0] != "relation" else []
        code = main(["--cache-dir", str(cache), *argv])
        stdout = capsysbinary.readouterr().out
        payload = target.read_bytes() if target.exists() else b""
        results.append((code, stdout, payload))
    return results


def test_c10_determinism(tmp_path, capsysbinary):
    cache = tmp_path / "cache"
    first = _run_all(cache, tmp_path / "a", capsysbinary)
    second = _run_all(cache, tmp_path / "b", capsysbinary)
    shutil.rmtree(cache)
    third = _run_all(cache, tmp_path / "c", capsysbinary)
    codes_ok = all(code == 0 for code, _, _ in first)
    same = first == second == third
    assert record(
        10,
        codes_ok and same,
        f"{len(COMMANDS)} commands: exit 0={codes_ok}, byte-identical across reruns and cache deletion={same}",
    )
