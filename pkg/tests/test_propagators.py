import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catlab.errors import TruncationError
from catlab.fock import SpaceConfig, leakage_margin, unitarity_defect
from catlab.model import ModelParams
from catlab.propagators import (
    amplitudes_disagree,
    branch_mean_a,
    free_evolution,
    interior_distance,
    paper_group_defect,
    propagator_report,
    psi1,
    u_exact,
    u_oracle_lab,
    u_paper,
)

# regression baseline: lab-frame oracle vs. exact reduced form, eta=2, Omega=0.1, t=pi/2, dim 256
LAB_ORACLE_DISTANCE = 0.031856


def test_zero_time_is_identity():
    cfg = SpaceConfig(64)
    p = ModelParams(eta=2.0)
    np.testing.assert_allclose(u_paper(p, 0.0, cfg), np.eye(128), atol=1e-12)
    np.testing.assert_allclose(u_exact(p, 0.0, cfg), np.eye(128), atol=1e-12)


def test_paper_psi1_branch_amplitudes():
    cfg = SpaceConfig(128)
    p = ModelParams(eta=2.0)
    state = u_paper(p, math.pi / 2, cfg) @ psi1(cfg)
    a_e, a_g = branch_mean_a(state, cfg)
    assert a_g == pytest.approx(-math.pi**2 / 8, abs=1e-6)
    assert a_e == pytest.approx(math.pi**2 / 8, abs=1e-6)


def test_exact_reduces_to_free_evolution():
    p = ModelParams(eta=2.0, omega=0.1, delta=0.3)
    cfg = SpaceConfig(128, leakage_margin(p.xi, 128))
    for t in (0.3, math.pi / 2):
        assert interior_distance(u_exact(p, t, cfg), free_evolution(p, t, cfg), cfg) <= 1e-10


def test_lab_oracle_regression():
    p = ModelParams(eta=2.0, omega=0.1)
    cfg = SpaceConfig(256, leakage_margin(p.xi, 256))
    t = math.pi / 2
    d = interior_distance(u_oracle_lab(p, t, cfg), u_exact(p, t, cfg), cfg)
    assert d == pytest.approx(LAB_ORACLE_DISTANCE, abs=1e-5)


def test_lab_oracle_agrees_without_drive():
    p = ModelParams(eta=2.0, omega=0.0, delta=0.3)
    cfg = SpaceConfig(128, leakage_margin(p.xi, 128))
    assert interior_distance(u_oracle_lab(p, 1.1, cfg), u_exact(p, 1.1, cfg), cfg) <= 1e-10


def test_paper_form_is_not_a_group():
    cfg = SpaceConfig(128, 32)
    assert paper_group_defect(ModelParams(eta=2.0), 0.5, cfg) > 1e-3


@given(st.floats(0.0, 2.0), st.floats(0.3, 2.5))
@settings(max_examples=15, deadline=None)
def test_paper_unitary_for_any_time(t, eta):
    cfg = SpaceConfig(96)
    assert unitarity_defect(u_paper(ModelParams(eta=eta), t, cfg, strict=False)) <= 1e-10


def test_strict_truncation_raises():
    with pytest.raises(TruncationError):
        u_paper(ModelParams(eta=3.0), 3 * math.pi / 2, SpaceConfig(32))


def test_report_never_raises_and_flags_truncation():
    report = propagator_report(ModelParams(eta=3.0), 3 * math.pi / 2, SpaceConfig(32))
    assert not report.truncation_adequate
    d = report.to_dict()
    assert isinstance(d["branch_amplitudes_paper"][0], list)


def test_infidelity_grows_monotonically_at_small_t():
    cfg = SpaceConfig(96)
    p = ModelParams(eta=2.0)
    vals = [propagator_report(p, t, cfg).state_infidelity for t in (0.025, 0.05, 0.1, 0.2)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    # leading order xi^2 t^4 / 4
    assert vals[0] == pytest.approx(0.025**4 / 4, rel=0.02)


def test_amplitudes_disagree():
    assert not amplitudes_disagree((1.0, -1.0), (1.05, -0.95))
    assert amplitudes_disagree((1.0, -1.0), (1.0, -0.5))
    assert not amplitudes_disagree((0j, 0j), (1e-9, 0j))
