import json
import math

import pytest

import qineq


def test_dirichlet_limit():
    eta = qineq.eta_components(qineq.PotentialSpec.from_coupling(1e6))
    assert eta.sum() == pytest.approx(-math.pi / 24, rel=1e-3)


def test_profile_and_total_energy():
    profile = qineq.density_profile(qineq.PotentialSpec(2.0, 1.0))
    assert profile.beta == pytest.approx(1 / math.pi, rel=1e-8)
    assert profile.total_energy() > 0
    assert profile.at(2.0) == 0.0


def test_violation_report():
    report = qineq.violation_report(qineq.DensityProfile.from_depth(math.pi / 24), 10.0)
    assert report.lhs == pytest.approx(-4.1632e-3, rel=1e-4)
    assert report.violated_vs_closed_form and report.violated_vs_quadrature
    assert report.bound_factor == pytest.approx(2.0)
    assert 0.40 < report.critical_tau_closed_form < 0.45


def test_lorentzian_bound():
    bound = qineq.qi_bound(qineq.SamplingFunction.lorentzian(1.0))
    assert bound.quadrature == pytest.approx(-1 / (48 * math.pi), rel=1e-8)


def test_spectrum_residuals():
    pot = qineq.PotentialSpec.from_coupling(1.0)
    box = qineq.BoxSpec(50.0, pot)
    modes = qineq.spectrum(pot, box, 10)
    assert len(modes) == 20
    assert max(qineq.validate_mode(m, pot, box).max() for m in modes) < 1e-10


def test_errors_carry_kind():
    with pytest.raises(qineq.Error) as info:
        qineq.BoxSpec(5.0, qineq.PotentialSpec.from_coupling(1.0))
    assert info.value.kind == "box too small for mode"
    with pytest.raises(qineq.Error):
        qineq.SamplingFunction.lorentzian(-1.0)


def test_cli_in_process():
    code, out, _ = qineq.run_cli(["density", "--lambda", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["eta"] > 0
    code, _, err = qineq.run_cli(["density", "--a", "-1"])
    assert code == 2 and "a must be positive" in err
