import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from catgate import GateParams, get_gate_model, list_available_models
from catgate.analysis.figures import fidelity
from catgate.errors import InfeasibleError
from catgate.gates.analytic import (
    IdealResourceGate,
    SqueezedResourceGate,
    heralding_x,
    ideal_output,
    limit_output,
    optimal_heralding_x,
    y1_factor,
    y2_factor,
    z_factor,
)
from catgate.states.constructors import CsqSpec, cat, db_to_s, hadamard_image

R_HALF = np.sqrt(0.75)


def test_y2_at_operating_point():
    assert y2_factor(0.5, R_HALF, db_to_s(2.6), 0.8) == pytest.approx(-0.1099, abs=1e-3)
    with pytest.raises(ValueError):
        y2_factor(0.5, R_HALF, 0.3, 0.0)


def test_y1_uses_cat_norms():
    expected = 0.5 / (2 * R_HALF) * np.sqrt(np.tanh(0.64))
    assert y1_factor(0.5, R_HALF, 0.8) == pytest.approx(expected)


def test_heralding_point():
    x = heralding_x(0.1099, 0.8)
    assert x == pytest.approx(0.1564, abs=2e-3)
    assert z_factor(x, 0.8) * 0.1099 == pytest.approx(1.0)
    assert heralding_x(1.0, 0.8) == pytest.approx(np.sqrt(2) * 0.8)


def test_heralding_infeasible():
    with pytest.raises(InfeasibleError):
        heralding_x(0.0, 0.8)
    with pytest.raises(InfeasibleError):
        heralding_x(1.5, 0.8)
    with pytest.raises(InfeasibleError):
        z_factor(-1e3, 0.8)


def test_heralding_point_moves_with_squeezing():
    xs = [optimal_heralding_x(0.5, R_HALF, s, 0.8) for s in (0.1, 0.2, 0.3, 0.5)]
    assert np.all(np.diff(xs) > 0)


def test_odd_pole_is_exact_for_cat_resource():
    out = ideal_output(CsqSpec(0.8, np.pi / 2), 0.5, R_HALF, 0.3, 16)
    assert abs(out.overlap(cat(0.8, -1, 16))) == pytest.approx(1.0, abs=1e-12)


def test_even_pole_fidelity_for_cat_resource():
    y1 = y1_factor(0.5, R_HALF, 0.8)
    x = heralding_x(y1, 0.8)
    out = ideal_output(CsqSpec(0.8, 0.0), 0.5, R_HALF, x, 16)
    assert fidelity(out, cat(0.8, 1, 16)) == pytest.approx(1 / (1 + y1 ** 2))


def test_limit_output_with_cat_resource_is_hadamard():
    spec = CsqSpec(0.8, 0.7, 1.1)
    assert_allclose(limit_output(spec, 16, resource="cat").amplitudes, hadamard_image(spec, 16).amplitudes)
    with pytest.raises(ValueError):
        limit_output(spec, 16, resource="fock")


@settings(max_examples=20, deadline=None)
@given(
    theta=st.floats(min_value=0.0, max_value=np.pi / 2),
    phi=st.floats(min_value=0.0, max_value=2 * np.pi),
)
def test_ideal_gate_approaches_hadamard(theta, phi):
    gate = IdealResourceGate(GateParams(t_bs2=1e-4))
    res = gate.run(CsqSpec(0.8, theta, phi))
    assert res.p_success is None
    assert res.fidelity_vs_ideal > 0.999


@settings(max_examples=20, deadline=None)
@given(
    theta=st.floats(min_value=0.0, max_value=np.pi / 2),
    phi=st.floats(min_value=0.0, max_value=2 * np.pi),
)
def test_squeezed_gate_approaches_limit(theta, phi):
    params = GateParams(t_bs2=1e-6)
    spec = CsqSpec(0.8, theta, phi)
    with SqueezedResourceGate(params) as gate:
        res = gate.run(spec)
    ref = limit_output(spec, 16, resource="squeezed", s=params.resource.s)
    assert fidelity(res.rho_out, ref) > 0.999


def test_squeezed_gate_at_operating_point():
    res = SqueezedResourceGate(GateParams()).run(CsqSpec(0.8, 0.0))
    assert 0.8 < res.fidelity_vs_ideal < 1.0
    assert res.model == "squeezed-resource"


def test_output_phase_matters_for_superpositions():
    spec = CsqSpec(0.8, np.pi / 4)
    corrected = SqueezedResourceGate(GateParams()).run(spec)
    raw = SqueezedResourceGate(GateParams(output_phase=0.0)).run(spec)
    assert corrected.fidelity_vs_ideal > raw.fidelity_vs_ideal


def test_factory_builds_models():
    for name in ("ideal-resource", "squeezed_resource", "Realistic"):
        model = get_gate_model(name, params=GateParams())
        assert not model.is_initialized()
    assert "realistic" in list_available_models()
    with pytest.raises(ValueError):
        get_gate_model("kerr")


def test_model_description():
    info = IdealResourceGate(GateParams()).describe()
    assert info["model"] == "ideal-resource"
    assert info["squeezing_db"] == pytest.approx(2.6)


def test_run_batch_matches_single_runs():
    specs = [CsqSpec(0.8, 0.0), CsqSpec(0.8, np.pi / 3, 1.0), CsqSpec(0.8, np.pi / 2)]
    with SqueezedResourceGate(GateParams()) as gate:
        batch = gate.run_batch(specs)
        single = [gate.run(spec) for spec in specs]
    assert [r.spec for r in batch] == specs
    for a, b in zip(batch, single):
        assert a.fidelity_vs_ideal == pytest.approx(b.fidelity_vs_ideal)
        assert a.fidelity_fitted >= a.fidelity_vs_ideal
        assert 0.4 <= a.target_alpha_opt <= 1.2
