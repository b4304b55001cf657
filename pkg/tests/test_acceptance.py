"""End-to-end acceptance criteria, one test per criterion.

Each test logs a ``[PASS]``/``[FAIL]`` line that pytest prints in its
terminal summary, then asserts.
"""

import inspect
import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np

import dense_oracle as dense
from conftest import LARGE, SMALL, sparse_from_dense
from qdelsim.cli import main as cli_main
from qdelsim.css_qrs import QRSCode
from qdelsim.deletion import delete_multi
from qdelsim.finite_field import gf
from qdelsim.pipeline import (
    DeletionCode,
    ExperimentConfig,
    RateQuery,
    dec,
    exhaustive_patterns,
    rate_table,
    verify_recovery,
)
from qdelsim.reed_solomon import (
    RSParams,
    build_pair,
    erasure_decode_classical,
    min_distance_bruteforce,
    nullspace,
)
from qdelsim.sandwich import window_weight_measure
from qdelsim.state import SparseDensity, tensor

TOL = 1e-9
_RESULTS: dict = {}


def report(log, n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    print(line)
    log(line)
    return ok


def _run(params, states):
    start = time.perf_counter()
    reports, summary = verify_recovery(ExperimentConfig(params, states, master_seed=2024))
    return reports, summary, time.perf_counter() - start


def test_criterion_1_single_deletion(acceptance_log):
    reports, s, wall = _run(SMALL, ["00", "01", "10", "11", "ghz", "mixed"])
    _RESULTS[1] = s
    ok = s["trials"] == 13 * 6 and s["failed"] == 0 and s["max_trace_distance"] < TOL and wall < 60
    report(acceptance_log, 1, ok,
           f"E=2 N=3 t=1: {s['passed']}/{s['trials']} trials, max distance "
           f"{s['max_trace_distance']:.2e} < 1e-9, {wall:.1f}s")
    assert ok


def test_criterion_2_multi_deletion(acceptance_log):
    reports, s, wall = _run(LARGE, ["000", "ghz", "mixed"])
    _RESULTS[2] = s
    ok = s["trials"] == 1226 * 3 and s["failed"] == 0 and s["max_trace_distance"] < TOL and wall < 900
    report(acceptance_log, 2, ok,
           f"E=3 N=7 t=2: {s['passed']}/{s['trials']} trials, max distance "
           f"{s['max_trace_distance']:.2e} < 1e-9, {wall:.0f}s")
    assert ok


def test_criterion_3_decoder_ignorance(acceptance_log):
    params = list(inspect.signature(dec).parameters)
    method = list(inspect.signature(DeletionCode.dec).parameters)
    no_count = params == ["tau_prime", "code", "t", "seed"] and method == ["self", "tau_prime", "seed"]
    # the decoder sees only the received state: same call for 0, 1 and 2 deletions
    code = DeletionCode(LARGE)
    sigma = SparseDensity.basis_state("101")
    enc = code.enc(sigma)
    dists = [
        dense.trace_distance(dense.to_dense(code.dec(delete_multi(enc, p))), dense.to_dense(sigma))
        for p in ([], [30], [4, 40])
    ]
    upstream = all(_RESULTS.get(k, {}).get("failed", 1) == 0 for k in (1, 2))
    ok = no_count and max(dists) < TOL and upstream
    report(acceptance_log, 3, ok,
           f"decoder arguments {params}; criteria 1-2 green through it: {upstream}")
    assert ok


def test_criterion_4_window_weight(acceptance_log):
    rng = np.random.default_rng(41)
    checked, bad = 0, []
    start = time.perf_counter()
    for a, t, r in itertools.product((1, 2, 3), (1, 2), (1, 2)):
        rho1 = sparse_from_dense(dense.random_density(a, 1 << a, rng), a)
        rho4 = sparse_from_dense(dense.random_density(r, 1 << r, rng), r)
        tau = tensor(tensor(rho1, SparseDensity.basis_state("0" * t + "1" * t)), rho4)
        n = a + 2 * t + r
        for pattern in exhaustive_patterns(n, t):
            t12 = sum(p <= a + t for p in pattern.positions)
            w, record, _ = window_weight_measure(delete_multi(tau, pattern), a, t, seed=None)
            checked += 1
            if w != t12 or record.probability < 1 - 1e-12 or record.rng_seed_used is not None:
                bad.append((a, t, r, pattern.positions, w, t12))
    wall = time.perf_counter() - start
    ok = not bad and wall < 60
    report(acceptance_log, 4, ok,
           f"{checked} layouts x patterns, weight == t1+t2 and deterministic in all, "
           f"{len(bad)} mismatches, {wall:.1f}s")
    assert ok, bad[:5]


def test_criterion_5_classical_rs(acceptance_log):
    distances = {}
    for E, N, Ks in ((2, 3, (1, 2)), (3, 7, (1, 2, 3, 4, 5))):
        F = gf(E)
        for K in Ks:
            H = [[F.pow(F.alpha, i * j) for j in range(N)] for i in range(N - K)]
            basis = nullspace(H, N, F)
            distances[(E, N, K)] = (len(basis), min_distance_bruteforce(basis, F, N))
    mds = all(dim == K and d == N - K + 1 for (E, N, K), (dim, d) in distances.items())

    erasures = 0
    decode_ok = True
    for K_C, K_D in ((2, 2), (1, 2)):
        pair = build_pair(RSParams(N=3, K_C=K_C, K_D=K_D, t=1, E=2))
        for w in pair.codewords_C.tolist():
            for size in range(3 - K_C + 1):
                for erased in itertools.combinations((1, 2, 3), size):
                    damaged = [None if j + 1 in erased else v for j, v in enumerate(w)]
                    decode_ok &= erasure_decode_classical(damaged, erased, pair) == w
                    erasures += 1
    ok = mds and decode_ok
    report(acceptance_log, 5, ok,
           f"d = N-K+1 for {len(distances)} codes; {erasures} erasure decodes at E=2, all correct: {decode_ok}")
    assert ok


def test_criterion_6_knill_laflamme(acceptance_log):
    worst_kl, worst_orth = 0.0, 0.0
    for params in (SMALL, LARGE):
        code = QRSCode.from_params(params)
        for size in range(params.t + 1):
            for blocks in itertools.combinations(range(1, params.N + 1), size):
                worst_kl = max(worst_kl, code.knill_laflamme(blocks)[1])
        kets = [code.encoded_basis_state(x) for x in range(code.logical_dim)]
        gram = np.array([[a.inner(b) for b in kets] for a in kets])
        worst_orth = max(worst_orth, float(np.abs(gram - np.eye(len(kets))).max()))
    ok = worst_kl < 1e-8 and worst_orth < 1e-10
    report(acceptance_log, 6, ok,
           f"max KL residual {worst_kl:.2e} < 1e-8, max orthonormality error {worst_orth:.2e} < 1e-10")
    assert ok


def test_criterion_7_rates(acceptance_log):
    rows_checked, violations = 0, []
    for gamma, t in itertools.product(("0.25", "0.5", "0.75"), (1, 2)):
        g = Fraction(gamma)
        for row in rate_table(RateQuery(gamma, t, 4, 12)):
            N = 2**row.E - 1
            rate = Fraction(row.E * (math.floor(g * N) + (N - t) - N), N * (row.E + 2 * t))
            lower = Fraction(row.E, N * (row.E + 2 * t)) * (g * N - 1 - t)
            upper = Fraction(row.E, N * (row.E + 2 * t)) * (g * N - t)
            rows_checked += 1
            if not (row.rate == rate and row.lower == lower and row.upper == upper and lower <= rate <= upper):
                violations.append((gamma, t, row.E))
    e10 = next(r for r in rate_table(RateQuery("0.5", 1, 10, 10)))
    ok = not violations and e10.rate == Fraction(5100, 12276)
    report(acceptance_log, 7, ok,
           f"{rows_checked} rows inside exact bounds, {len(violations)} violations; "
           f"E=10 rate {e10.rate} == 5100/12276")
    assert ok


def test_criterion_8_determinism(acceptance_log, tmp_path):
    cfg = tmp_path / "c1.json"
    cfg.write_text(json.dumps({
        "command": "verify",
        "code": {"E": 2, "N": 3, "K_C": 2, "K_D": 2, "t": 1},
        "logical_states": ["00", "01", "10", "11", "ghz", "mixed"],
        "deletions": {"mode": "exhaustive"},
        "master_seed": 7,
    }))
    outs = [tmp_path / "run1.jsonl", tmp_path / "run2.jsonl"]
    codes = [cli_main(["verify", str(cfg), "--out", str(o)]) for o in outs]
    a, b = (o.read_bytes() for o in outs)
    ok = codes == [0, 0] and a == b and len(a.splitlines()) == 79
    report(acceptance_log, 8, ok, f"two criterion-1 runs, {len(a)} bytes each, identical: {a == b}")
    assert ok
