import numpy as np
import pytest
from numpy.testing import assert_allclose

from catgate.analysis.figures import (
    best_hadamard_alpha,
    best_target_alpha,
    default_wigner_axes,
    fidelity,
    wigner,
    wigner_grid,
    wigner_origin,
)
from catgate.analysis.sweeps import (
    basis_fidelities,
    bloch_axes,
    bloch_sweep,
    entangled_output,
    entangled_target,
    fidelity_curve,
    gate_fidelity,
    optimal_squeezing,
    process_fidelity,
    process_fidelity_and_rate,
)
from catgate.detectors.measurements import DetectorSpec
from catgate.errors import DimensionError
from catgate.fock.core import DensityOperator, basis_ket
from catgate.gates.analytic import IdealResourceGate, SqueezedResourceGate, heralding_x, y1_factor
from catgate.gates.params import GateParams
from catgate.gates.realistic import RealisticGate, balance_window
from catgate.states.constructors import CsqSpec, ResourceSpec, cat, coherent, hadamard_image, s_to_db


@pytest.fixture(scope="module")
def balanced():
    params = GateParams()
    window = balance_window(params)
    return params.with_window(window.x0), window


def test_fidelity_examples():
    assert fidelity(basis_ket(0, 5), basis_ket(0, 5)) == pytest.approx(1.0)
    assert fidelity(basis_ket(0, 5), basis_ket(1, 5)) == 0.0
    mixed = DensityOperator(np.diag([0.5, 0.5, 0, 0, 0]))
    assert fidelity(mixed, basis_ket(1, 5)) == pytest.approx(0.5)
    assert fidelity(cat(0.75, -1, 12), basis_ket(0, 12)) == 0.0
    with pytest.raises(DimensionError):
        fidelity(basis_ket(0, 5), basis_ket(0, 6))


def test_best_target_alpha_recovers_amplitude():
    alpha, f = best_target_alpha(cat(0.75, -1, 20).to_density(), -1)
    assert alpha == pytest.approx(0.75, abs=2e-3)
    assert f == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValueError):
        best_target_alpha(cat(0.75, -1, 20), -1, alpha_range=(1.0, 0.5))


def test_best_hadamard_alpha_recovers_amplitude():
    spec = CsqSpec(0.8, 0.3, 0.7)
    alpha, f = best_hadamard_alpha(hadamard_image(spec, 20, alpha=0.7), spec)
    assert alpha == pytest.approx(0.7, abs=2e-3)
    assert f == pytest.approx(1.0, abs=1e-5)
    exact = hadamard_image(spec, 20)
    assert best_hadamard_alpha(exact, spec) == (pytest.approx(0.8), pytest.approx(1.0))


def test_wigner_origin_parity():
    assert wigner_origin(basis_ket(0, 8)) == pytest.approx(1 / np.pi)
    assert wigner(basis_ket(0, 8), 0.0, 0.0) == pytest.approx(1 / np.pi)
    odd = cat(0.75, -1, 20)
    assert wigner_origin(odd) == pytest.approx(-1 / np.pi, abs=1e-12)
    assert wigner(odd, 0.0, 0.0) == pytest.approx(-1 / np.pi, abs=1e-10)


def test_coherent_wigner_peak():
    ket = coherent(0.8, 25)
    assert wigner(ket, np.sqrt(2) * 0.8, 0.0) == pytest.approx(1 / np.pi, abs=1e-8)
    assert wigner(ket, 0.0, 0.0) == pytest.approx(np.exp(-2 * 0.64) / np.pi, abs=1e-8)


def test_wigner_is_normalized():
    xs, ps = default_wigner_axes()
    W = wigner_grid(cat(0.75, -1, 16), xs, ps)
    assert W.shape == (161, 161)
    step = xs[1] - xs[0]
    assert W.sum() * step ** 2 == pytest.approx(1.0, abs=1e-4)


def test_cat_resource_limit_is_perfect():
    assert gate_fidelity(0.8, "cat", D=40) == pytest.approx(1.0, abs=1e-12)


def test_squeezed_resource_optimum_at_operating_point():
    s, f = optimal_squeezing(0.8)
    assert f == pytest.approx(0.97, abs=0.01)
    assert s_to_db(s) == pytest.approx(2.6, abs=0.3)


def test_metrics_are_ordered():
    worst = gate_fidelity(0.8, "squeezed", 0.3, metric="worst", D=40)
    average = gate_fidelity(0.8, "squeezed", 0.3, metric="basis_average", D=40)
    assert worst <= average <= 1.0
    bloch = gate_fidelity(0.8, "squeezed", 0.3, metric="bloch", D=40)
    assert 0.8 < bloch <= 1.0
    with pytest.raises(ValueError):
        gate_fidelity(0.8, metric="median", D=40)


def test_small_amplitude_curve_end():
    (row,) = fidelity_curve([0.01])
    assert row.f_squeezed == pytest.approx(1.0, abs=1e-3)
    assert row.f_ideal == pytest.approx(1.0)
    with pytest.raises(ValueError):
        fidelity_curve([2.5])


def test_ideal_curve_dominates_squeezed():
    rows = fidelity_curve([0.4, 0.8, 1.2])
    for row in rows:
        assert row.f_ideal >= row.f_squeezed - 1e-9
    assert rows[0].f_squeezed > rows[-1].f_squeezed


def test_finite_transmittance_degrades_ideal_curve():
    values = [gate_fidelity(a, "cat", t=0.1, D=60) for a in (0.4, 0.8, 1.2, 1.6)]
    assert np.all(np.diff(values) <= 1e-12)
    assert values[0] < 1.0


def test_bloch_axes():
    thetas, phis = bloch_axes(3, 4)
    assert_allclose(thetas, [0, np.pi / 4, np.pi / 2])
    assert_allclose(phis, [0, np.pi / 2, np.pi, 3 * np.pi / 2])
    with pytest.raises(ValueError):
        bloch_axes(0, 4)


def test_bloch_sweep_with_ideal_model():
    params = GateParams(t_bs2=1e-4)
    thetas, phis = bloch_axes(3, 4)
    grid = bloch_sweep(params, thetas, phis, model=IdealResourceGate(params), threads=2)
    assert grid.fidelity.shape == (3, 4)
    assert not grid.failed.any()
    assert grid.fidelity_span[0] > 0.999
    assert np.isnan(grid.p_success).all()
    assert len(list(grid.rows())) == 12
    assert np.all(grid.fidelity_fitted >= grid.fidelity - 1e-12)
    assert all(len(row) == 6 for row in grid.rows())


def test_bloch_sweep_realistic_cells():
    params = GateParams()
    thetas, phis = bloch_axes(2, 2)
    grid = bloch_sweep(params, thetas, phis)
    assert np.all(grid.p_success > 0)
    assert 0.0 < grid.mean_fidelity < 1.0


def test_realistic_basis_fidelities_are_bounded():
    plus, minus = basis_fidelities(RealisticGate(GateParams()))
    assert 0.0 < plus < 1.0
    assert 0.0 < minus < 1.0


def test_entangled_target_is_normalized():
    target = entangled_target(0.8, 16, 16)
    assert target.mode_dims == (16, 16)
    assert target.norm2 == pytest.approx(1.0)


def test_process_fidelity_ideal_limit():
    t, r = 0.01, np.sqrt(1 - 1e-4)
    x = heralding_x(y1_factor(t, r, 0.8), 0.8)
    params = GateParams(
        t_bs2=1e-4,
        r_abs1_2=1e-4,
        r_abs2_2=1e-4,
        resource=ResourceSpec(kind="cat"),
        detectors=DetectorSpec(eta_apd=1.0, p_dark=0.0, eta_hd=1.0, x0=x, delta=1e-3),
    )
    rho, p = entangled_output(params)
    assert rho.is_valid()
    assert p > 0.0
    assert process_fidelity(params) >= 0.999


def test_process_fidelity_without_detection():
    params = GateParams(detectors=DetectorSpec(eta_apd=0.0, p_dark=0.01, eta_hd=0.0))
    assert process_fidelity(params) < 0.5


def test_bloch_sweep_is_continuous_across_phi_seam():
    params = GateParams()
    model = SqueezedResourceGate(params)
    thetas = [np.pi / 8, np.pi / 4, 3 * np.pi / 8]
    wrapped = bloch_sweep(params, thetas, [0.0, 2 * np.pi - 1e-9, 2 * np.pi], model=model)
    assert_allclose(wrapped.fidelity[:, 1], wrapped.fidelity[:, 0], atol=1e-6)
    assert_allclose(wrapped.fidelity[:, 2], wrapped.fidelity[:, 0], atol=1e-12)
    _, phis = bloch_axes(1, 16)
    grid = bloch_sweep(params, thetas, phis, model=model)
    interior = np.max(np.abs(np.diff(grid.fidelity, axis=1)))
    seam = np.max(np.abs(grid.fidelity[:, 0] - grid.fidelity[:, -1]))
    assert seam <= 1.5 * interior + 1e-9


def test_process_fidelity_reports_rate():
    params = GateParams(alpha=0.3, resource=ResourceSpec(s=0.15, nbar=0.05), cutoffs=(10, 3, 3, 10))
    _, p = entangled_output(params)
    value, rate = process_fidelity_and_rate(params)
    assert rate == pytest.approx(p)
    assert value == pytest.approx(process_fidelity(params))


@pytest.mark.slow
def test_bloch_sphere_aggregates_at_balanced_window(balanced):
    params, window = balanced
    thetas, phis = bloch_axes(33, 8)
    grid = bloch_sweep(params, thetas, phis, threads=4)
    assert not grid.failed.any()
    assert np.all(grid.fidelity_fitted >= grid.fidelity - 1e-12)
    lo, hi = grid.fitted_fidelity_span
    assert 0.62 <= lo <= 0.70
    assert 0.91 <= hi <= 0.99
    assert grid.mean_fitted_fidelity == pytest.approx(0.78, abs=0.05)
    assert 7.2e-6 / 3 <= grid.mean_success <= 7.2e-6 * 3
    assert 0.8 <= window.ratio <= 1.25


@pytest.mark.slow
def test_process_fidelity_at_balanced_window(balanced):
    params, _ = balanced
    value, rate = process_fidelity_and_rate(params)
    assert value == pytest.approx(0.70, abs=0.05)
    assert rate > 0.0
