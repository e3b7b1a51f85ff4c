"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import math
import time
import warnings

import numpy as np
import pytest

from catlab.analysis import peak_summary, position_density
from catlab.cli import main
from catlab.errors import TruncationWarning
from catlab.fock import SpaceConfig, coherent_state, fidelity, unitarity_defect
from catlab.model import ModelParams, rotated_frame_defect
from catlab.propagators import branch_mean_a, propagator_report, psi1, u_exact, u_paper
from catlab.protocol import CatSign, branch_phase_diagnostic, cat_analytic, run_protocol, sample_fluorescence
from catlab.timings import comparison_table

pytestmark = pytest.mark.acceptance

HALF_PI = math.pi / 2
# measured with the independent exact oracle before the suite was frozen
INFIDELITY_SLOPE = 4.00
INFIDELITY_SLOPE_TOL = 0.01


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'}  {detail}")

    return emit


def test_criterion_1_timing_table(report, tmp_path, capsys):
    start = time.perf_counter()
    code = main(["timings", "--out", str(tmp_path)])
    elapsed = time.perf_counter() - start
    printed = capsys.readouterr().out
    shown = [row.display for row in comparison_table(0.202, 0.1, (2.0, 3.0), 1e7, 1.0)]
    expected = ["4.09", "159", "2.51", "2.05", "1.00e7"]
    ok = code == 0 and shown == expected and all(v in printed for v in expected) and elapsed < 1.0
    report(1, ok, f"table {shown} runtime {elapsed:.3f}s")
    assert shown == expected
    assert code == 0 and all(v in printed for v in expected)
    assert elapsed < 1.0


def test_criterion_2_rotated_frame_identity(report):
    cfg = SpaceConfig(128, 16)
    start = time.perf_counter()
    defects = {}
    for eta in (0.5, 2.0, 3.0):
        for omega in (0.0, 0.1):
            for delta in (0.0, 0.3):
                defects[(eta, omega, delta)] = rotated_frame_defect(ModelParams(eta, omega, delta), cfg)
    elapsed = time.perf_counter() - start
    failing = {k: v for k, v in defects.items() if v > 1e-8}
    worst = max(defects.values())
    ok = not failing and elapsed < 30.0
    report(2, ok, f"worst defect {worst:.3e} (tol 1e-8), {len(failing)}/12 over tol, runtime {elapsed:.1f}s")
    assert elapsed < 30.0
    assert not failing, f"edge-polluted interior at margin 16: {failing}"


@pytest.mark.filterwarnings("ignore::catlab.errors.TruncationWarning")
def test_criterion_3_unitarity(report):
    cfg = SpaceConfig(256)
    worst = 0.0
    for eta in (2.0, 3.0):
        p = ModelParams(eta)
        for t in (0.0, HALF_PI, 3 * HALF_PI):
            for build in (u_paper, u_exact):
                worst = max(worst, unitarity_defect(build(p, t, cfg, strict=False)))
    report(3, worst <= 1e-10, f"worst unitarity defect {worst:.3e} (tol 1e-10)")
    assert worst <= 1e-10


def test_criterion_4_closed_form_consistency(report):
    cfg = SpaceConfig(128)
    p = ModelParams(2.0)
    diag = branch_phase_diagnostic(p, HALF_PI, cfg)
    _, a_g = branch_mean_a(u_paper(p, HALF_PI, cfg) @ psi1(cfg), cfg)
    target = -math.pi**2 / 8
    ok = min(diag["fidelity_e"], diag["fidelity_g"]) >= 1 - 1e-6 and abs(a_g - target) <= 1e-3
    report(
        4,
        ok,
        f"fidelity e {diag['fidelity_e']:.12f} g {diag['fidelity_g']:.12f}; <a>_g {a_g.real:.6f}{a_g.imag:+.1e}j",
    )
    assert diag["fidelity_e"] >= 1 - 1e-6
    assert diag["fidelity_g"] >= 1 - 1e-6
    assert abs(a_g - target) <= 1e-3


def test_criterion_5_protocol_cats(report):
    cfg = SpaceConfig(128)
    p = ModelParams(2.0)
    out = run_protocol(p, HALF_PI, "V", "paper", cfg)
    fids = []
    for cat, sign in ((out.cat_plus, CatSign.PLUS), (out.cat_minus, CatSign.MINUS)):
        ref, _ = cat_analytic(p, 0, sign, cfg)
        fids.append(fidelity(cat / np.linalg.norm(cat), ref))
    w_plus, w_minus = out.weights
    ok = min(fids) >= 1 - 1e-6 and abs(w_plus - 0.5240) <= 1e-3 and abs(w_minus - 0.4760) <= 1e-3
    report(5, ok, f"fidelities {fids[0]:.12f}/{fids[1]:.12f}; weights {w_plus:.4f}/{w_minus:.4f}")
    assert min(fids) >= 1 - 1e-6
    assert w_plus == pytest.approx(0.5240, abs=1e-3)
    assert w_minus == pytest.approx(0.4760, abs=1e-3)


def test_criterion_6_observability(report):
    cat, _ = cat_analytic(ModelParams(2.0), 0, "plus", SpaceConfig(128))
    peaks = peak_summary(position_density(cat))
    pos = np.sort(peaks.peak_positions)
    cat_ok = peaks.count == 2 and np.all(np.abs(np.abs(pos) - 1.745) <= 0.02)

    # momentum cat |i b> + |-i b> at t = pi, eta = 0.202, b = (xi/2) pi^2
    beta = (0.101 / 2) * math.pi**2
    cfg = SpaceConfig(64)
    mom = coherent_state(1j * beta, cfg) + coherent_state(-1j * beta, cfg)
    prof = position_density(mom / np.linalg.norm(mom))
    mpeaks = peak_summary(prof)
    mom_ok = mpeaks.count == 1 and abs(mpeaks.peak_positions[0]) <= prof.grid_step

    report(
        6,
        cat_ok and mom_ok,
        f"cat peaks {np.round(pos, 5).tolist()} (target +-1.745); momentum cat b={beta:.3f} "
        f"peaks {np.round(mpeaks.peak_positions, 5).tolist()}",
    )
    assert peaks.count == 2
    np.testing.assert_allclose(np.abs(pos), 1.745, atol=0.02)
    assert mpeaks.count == 1
    assert abs(mpeaks.peak_positions[0]) <= prof.grid_step


def test_criterion_7_paper_vs_exact(report):
    start = time.perf_counter()
    p = ModelParams(2.0)
    cfg = SpaceConfig(256)
    ts = np.geomspace(0.025, 0.2, 6)
    infid = [propagator_report(p, t, cfg).state_infidelity for t in ts]
    slope = float(np.polyfit(np.log(ts), np.log(infid), 1)[0])
    shrinking = all(b > a for a, b in zip(infid, infid[1:]))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        late = propagator_report(p, 3 * HALF_PI, cfg)
    elapsed = time.perf_counter() - start
    ok = (
        shrinking
        and slope >= 3
        and abs(slope - INFIDELITY_SLOPE) <= INFIDELITY_SLOPE_TOL
        and late.amplitude_mismatch
        and elapsed < 60
    )
    report(
        7,
        ok,
        f"log-log slope {slope:.4f}; t=3pi/2 amplitudes paper "
        f"{[round(abs(z), 3) for z in late.branch_amplitudes_paper]} exact "
        f"{[round(abs(z), 3) for z in late.branch_amplitudes_exact]} flagged={late.amplitude_mismatch}; "
        f"runtime {elapsed:.1f}s",
    )
    assert shrinking
    assert slope >= 3
    assert slope == pytest.approx(INFIDELITY_SLOPE, abs=INFIDELITY_SLOPE_TOL)
    assert late.amplitude_mismatch
    assert elapsed < 60


def test_criterion_8_measurement_statistics(report):
    p = ModelParams(2.0)
    out = run_protocol(p, HALF_PI, "V", "paper", SpaceConfig(128))
    alpha = math.pi**2 / 8
    weight = (1 - math.exp(-2 * alpha * alpha)) / 2  # fluorescence projects onto the odd cat
    trials = 10_000
    shots = sample_fluorescence(out, seed=7, trials=trials)
    freq = float(shots.mean())
    se = math.sqrt(weight * (1 - weight) / trials)
    repeat = sample_fluorescence(out, seed=7, trials=trials)
    identical = np.array_equal(shots, repeat)
    ok = abs(freq - weight) <= 3 * se and identical
    report(8, ok, f"frequency {freq:.4f} vs weight {weight:.4f} (3 SE = {3 * se:.4f}); bit-identical {identical}")
    assert abs(freq - weight) <= 3 * se
    assert identical
