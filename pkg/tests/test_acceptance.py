"""Acceptance suite: one test per release criterion, at its stated tolerance.

Each test prints a single `ACCEPTANCE PASS/FAIL: <criterion>` line on the
real stderr so the verdicts stay visible under pytest's capture (use -s to
see them inline).  Budgets are asserted with generous stated limits; the
Monte Carlo sweep is the long pole and honors QGEC_THREADS.
"""

import itertools
import math
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

import conftest
from qgolay.css import (
    PauliError,
    ResidualClass,
    Syndrome,
    apply_correction,
    classify_residual,
    extract_syndrome,
)
from qgolay.decoders import MatchingDecoder, TableDecoder, build_syndrome_table
from qgolay.gf2 import BitVec, enumerate_span, kernel_basis, rank, solve_in_rowspace
from qgolay.golay import (
    GOLAY_LABELS,
    build_golay_css,
    build_parity_matrix,
    circular_shifts,
    generator_polynomial,
)
from qgolay.harness import SweepConfig, mann_kendall_z, run_sweep
from qgolay.noise import NoiseModel, derive_rng, sample_error
from qgolay.protocol import ExternalDecoder, SocketChannel, SubprocessChannel
from qgolay.toric import build_toric

SERVE_CMD = [sys.executable, "-m", "qgolay", "serve", "--code", "golay:h1", "--decoder", "table"]


def _report(name: str, ok: bool, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    suffix = f" [{detail}]" if detail else ""
    line = f"ACCEPTANCE {verdict}: {name}{suffix}"
    sys.__stderr__.write(line + "\n")
    sys.__stderr__.flush()
    conftest.record_verdict(line)


@contextmanager
def criterion(name: str, budget_s: float):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed >= budget_s:
            raise AssertionError(f"{name}: {elapsed:.1f}s exceeded {budget_s}s budget")
    except BaseException:
        _report(name, False)
        raise
    _report(name, True, f"{elapsed:.1f}s of {budget_s:.0f}s budget")


def test_code_validity():
    with criterion("code validity (rank, orthogonality, cyclic span, distance 7)", 1.0):
        for label in GOLAY_LABELS:
            matrix = build_parity_matrix(label).matrix
            assert rank(matrix) == 11
            for i in range(11):
                for j in range(11):
                    assert matrix.row(i).dot(matrix.row(j)) == 0
            shifts = circular_shifts(generator_polynomial(label))
            for i in range(11):
                assert solve_in_rowspace(shifts, matrix.row(i)) is not None
            words = list(enumerate_span(kernel_basis(matrix)))
            assert len(words) == 4096
            assert min(w.weight() for w in words if not w.is_zero()) == 7


def test_perfect_code_bijection():
    with criterion("perfect-code bijection (2048 collision-free table entries)", 1.0):
        for label in GOLAY_LABELS:
            table = build_syndrome_table(build_parity_matrix(label))
            assert len(table.leaders) == 2048
            assert len(set(table.leaders)) == 2048
            assert all(BitVec(23, leader).weight() <= 3 for leader in table.leaders)


def test_distance_seven_correction_guarantee():
    with criterion("distance-7 guarantee (exhaustive per axis + 1e5 random joint)", 10.0):
        codes = {label: build_golay_css(label) for label in GOLAY_LABELS}
        decoders = {label: TableDecoder(code) for label, code in codes.items()}
        zeros = BitVec.zeros(23)
        failures = 0
        for label, code in codes.items():
            dec = decoders[label]
            for w in (0, 1, 2, 3):
                for combo in itertools.combinations(range(23), w):
                    v = BitVec.from_indices(23, combo)
                    for e in (PauliError(v, zeros), PauliError(zeros, v)):
                        r = apply_correction(e, dec.decode(extract_syndrome(code, e)).correction)
                        failures += classify_residual(code, r) is not ResidualClass.TRIVIAL
        rng = np.random.default_rng(20260810)
        labels = list(GOLAY_LABELS)
        for t in range(100_000):
            label = labels[t % 3]
            code, dec = codes[label], decoders[label]
            xs = rng.choice(23, size=rng.integers(0, 4), replace=False)
            zs = rng.choice(23, size=rng.integers(0, 4), replace=False)
            e = PauliError(
                BitVec.from_indices(23, map(int, xs)),
                BitVec.from_indices(23, map(int, zs)),
            )
            r = apply_correction(e, dec.decode(extract_syndrome(code, e)).correction)
            failures += classify_residual(code, r) is not ResidualClass.TRIVIAL
        assert failures == 0


def test_toric_build_and_weight_two_correction():
    with criterion("toric d=5 (invariants + exhaustive weight-2 correction)", 60.0):
        lattice = build_toric(5)
        code = lattice.code
        assert code.n == 50
        assert code.k == 2
        assert code.n_syndrome == 48
        assert all(l.weight() == 5 for l in (*code.logical_x, *code.logical_z))
        dec = MatchingDecoder(lattice)
        kinds = ("X", "Y", "Z")
        singles = [
            PauliError.single(50, q, k) for q in range(50) for k in kinds
        ]
        for e in singles:
            r = apply_correction(e, dec.decode(extract_syndrome(code, e)).correction)
            assert classify_residual(code, r) is ResidualClass.TRIVIAL
        for qa, qb in itertools.combinations(range(50), 2):
            for ka, kb in itertools.product(kinds, repeat=2):
                e = PauliError.single(50, qa, ka) ^ PauliError.single(50, qb, kb)
                r = apply_correction(e, dec.decode(extract_syndrome(code, e)).correction)
                assert classify_residual(code, r) is ResidualClass.TRIVIAL


def test_noise_model_frequencies():
    with criterion("noise model (1e6 draws within 4 sigma, 8 parameter sets)", 10.0):
        n = 1_000_000
        for p, eta in itertools.product((0.01, 0.05), (0.25, 0.5, 1.0, 3.0)):
            model = NoiseModel(p, eta)
            e = sample_error(model, n, derive_rng(424242, int(p * 1000), int(eta * 100)))
            ny = (e.x.bits & e.z.bits).bit_count()
            nx = e.x.weight() - ny
            nz = e.z.weight() - ny
            ni = n - nx - ny - nz
            for count, q in ((nx, model.px), (ny, model.py), (nz, model.pz), (ni, 1 - p)):
                sigma = math.sqrt(n * q * (1 - q))
                assert abs(count - n * q) <= 4 * sigma, (p, eta, count, q)


def test_sweep_sanity_paper_protocol():
    with criterion("sweep sanity (50-point paper grid, 1e4 trials, trend test)", 300.0):
        config = SweepConfig(
            code_id="golay:h1",
            decoder_id="table",
            p_min=0.001,
            p_max=0.05,
            p_step=0.001,
            trials=10_000,
            eta=1.0,
            seed=20260810,
        )
        result = run_sweep(config)
        assert len(result.points) == 50
        # tail bound: P[axis weight >= 4] ~ 1.8e-9 per shot at p = 0.001
        assert result.points[0].failures == 0
        assert all(pt.inconsistent == 0 for pt in result.points)
        z = mann_kendall_z(result.rates())
        assert z > 1.645, f"monotone trend not detected: z = {z:.2f}"


def test_protocol_equivalence_over_both_transports():
    with criterion("protocol equivalence (stdio + socket vs in-process, 1e4 syndromes)", 120.0):
        golay = build_golay_css("h1")
        dec = TableDecoder(golay)
        rng = np.random.default_rng(99)
        syndromes = [
            Syndrome(BitVec(22, int(rng.integers(0, 1 << 22))), 11, 11)
            for _ in range(10_000)
        ]
        expected = [dec.decode(s).correction for s in syndromes]

        with ExternalDecoder(SubprocessChannel(SERVE_CMD), golay) as ext:
            for s, want in zip(syndromes, expected):
                assert ext.decode(s).correction == want

        server = subprocess.Popen(
            SERVE_CMD + ["--listen", "127.0.0.1:0"], stdout=subprocess.PIPE, text=True
        )
        try:
            announce = server.stdout.readline().split()
            assert announce[0] == "LISTENING"
            with ExternalDecoder(SocketChannel(announce[1], int(announce[2])), golay) as ext:
                for s, want in zip(syndromes, expected):
                    assert ext.decode(s).correction == want
        finally:
            server.terminate()
            server.wait(timeout=5)
