import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from catgate.errors import TruncationError
from catgate.fock.core import annihilation, apply_operator, basis_ket
from catgate.optics.ops import squeeze
from catgate.states.constructors import (
    CsqSpec,
    ResourceSpec,
    cat,
    cat_norm,
    coherent,
    csq,
    db_to_s,
    displaced_csq,
    hadamard_image,
    s_to_db,
    squeezed_single_photon,
    squeezed_thermal,
    squeezed_vacuum,
    thermal,
)


def _quadrature_moments(ket, D):
    a = annihilation(D).matrix
    ad = a.conj().T
    x = (a + ad) / np.sqrt(2)
    p = (a - ad) / (1j * np.sqrt(2))
    psi = ket.amplitudes
    return np.vdot(psi, x @ x @ psi).real, np.vdot(psi, p @ p @ psi).real


def test_db_conversion():
    assert db_to_s(2.6) == pytest.approx(0.2993, abs=1e-4)
    assert s_to_db(db_to_s(3.0)) == pytest.approx(3.0)
    assert ResourceSpec.from_db(2.6).variance == pytest.approx(10 ** -0.26)


def test_coherent_mean_photon_number():
    ket = coherent(0.8, 20)
    n = np.arange(20)
    assert np.sum(n * np.abs(ket.amplitudes) ** 2) == pytest.approx(0.64, abs=1e-8)


def test_coherent_truncation_error():
    with pytest.raises(TruncationError):
        coherent(3.0, 8)


def test_csq_validation():
    with pytest.raises(ValueError):
        CsqSpec(alpha=0.0)
    with pytest.raises(ValueError):
        CsqSpec(alpha=0.8, theta=2.0)
    assert CsqSpec(alpha=0.8, phi=2 * np.pi + 0.5).phi == pytest.approx(0.5)


def test_csq_from_coefficients():
    spec = CsqSpec.from_coefficients(1.0, 1j, 0.8)
    assert spec.theta == pytest.approx(np.pi / 4)
    assert spec.phi == pytest.approx(np.pi / 2)


def test_csq_poles():
    assert_allclose(csq(CsqSpec(0.8, 0.0), 20).amplitudes, coherent(0.8, 20).amplitudes, atol=1e-12)
    assert_allclose(csq(CsqSpec(0.8, np.pi / 2), 20).amplitudes, coherent(-0.8, 20).amplitudes, atol=1e-12)


def test_csq_norm_matches_overlap():
    spec = CsqSpec(0.6, np.pi / 4, 0.0)
    raw = spec.u * coherent(0.6, 20) + spec.v * coherent(-0.6, 20)
    assert raw.norm2 == pytest.approx(spec.norm, abs=1e-10)


def test_displaced_csq_poles():
    assert_allclose(displaced_csq(CsqSpec(0.8, 0.0), 20).amplitudes, coherent(1.6, 20).amplitudes, atol=1e-12)
    assert_allclose(displaced_csq(CsqSpec(0.8, np.pi / 2), 20).amplitudes, basis_ket(0, 20).amplitudes, atol=1e-12)


@pytest.mark.parametrize("sign", [1, -1])
def test_cat_parity_is_exact(sign):
    amps = cat(0.75, sign, 12).amplitudes
    wrong = amps[1::2] if sign > 0 else amps[0::2]
    assert np.all(wrong == 0)


def test_cat_matches_coherent_superposition():
    for sign in (1, -1):
        raw = coherent(0.75, 20) + sign * coherent(-0.75, 20)
        ref = raw.normalize()
        assert abs(ref.overlap(cat(0.75, sign, 20))) == pytest.approx(1.0, abs=1e-12)
        assert raw.norm2 == pytest.approx(cat_norm(0.75, sign), abs=1e-10)


def test_closed_form_values():
    amps = coherent(0.8, 16).amplitudes
    assert amps[0].real == pytest.approx(np.exp(-0.32), abs=1e-10)
    assert amps[1].real == pytest.approx(0.8 * np.exp(-0.32), abs=1e-10)
    assert cat_norm(0.8, 1) == pytest.approx(2.5559, abs=1e-4)
    assert cat_norm(0.8, -1) == pytest.approx(1.4441, abs=1e-4)


def test_csq_equator_gives_cats():
    even = csq(CsqSpec(0.8, np.pi / 4, 0.0), 20).amplitudes
    odd = csq(CsqSpec(0.8, np.pi / 4, np.pi), 20)
    assert np.max(np.abs(even[1::2])) < 1e-12
    assert abs(odd.overlap(cat(0.8, -1, 20))) == pytest.approx(1.0, abs=1e-12)


def test_small_amplitude_cat_limits():
    assert abs(cat(1e-4, -1, 10).overlap(basis_ket(1, 10))) ** 2 > 1 - 1e-6
    assert abs(cat(1e-4, 1, 10).overlap(basis_ket(0, 10))) ** 2 > 1 - 1e-6


def test_cat_sign_validation():
    with pytest.raises(ValueError):
        cat(0.8, 0, 10)


def test_hadamard_image_poles():
    assert_allclose(hadamard_image(CsqSpec(0.8, 0.0), 16).amplitudes, cat(0.8, 1, 16).amplitudes)
    assert_allclose(hadamard_image(CsqSpec(0.8, np.pi / 2), 16).amplitudes, cat(0.8, -1, 16).amplitudes, atol=1e-12)


def test_squeezed_vacuum_variances():
    s = 0.3
    vx, vp = _quadrature_moments(squeezed_vacuum(s, 40), 40)
    assert vx == pytest.approx(0.5 * np.exp(2 * s), abs=1e-8)
    assert vp == pytest.approx(0.5 * np.exp(-2 * s), abs=1e-8)


def test_squeezed_vacuum_matches_operator():
    ket = squeezed_vacuum(0.3, 30)
    assert_allclose(ket.amplitudes, squeeze(0.3, 30).matrix[:, 0], atol=1e-8)


def test_subtracting_from_squeezed_vacuum():
    D = 30
    subtracted = apply_operator(annihilation(D), squeezed_vacuum(0.3, D)).normalize()
    assert_allclose(subtracted.amplitudes, squeezed_single_photon(0.3, D).amplitudes, atol=1e-8)


def test_thermal_weights():
    rho = thermal(0.1, 12)
    n = np.arange(12)
    assert_allclose(rho.populations(), 0.1 ** n / 1.1 ** (n + 1), atol=1e-10)


def test_squeezed_thermal_limits():
    pure = squeezed_thermal(ResourceSpec(s=0.3, nbar=0.0), 16)
    assert_allclose(pure.matrix, squeezed_vacuum(0.3, 16).to_density().matrix, atol=1e-10)
    hot = squeezed_thermal(ResourceSpec(s=0.0, nbar=0.1), 16)
    assert_allclose(hot.matrix, thermal(0.1, 16).matrix)


def test_squeezed_thermal_purity():
    rho = squeezed_thermal(ResourceSpec(s=0.3, nbar=0.1), 16)
    assert rho.is_valid()
    assert rho.purity == pytest.approx(1 / 1.2, abs=1e-3)


def test_resource_validation():
    with pytest.raises(ValueError):
        ResourceSpec(s=0.3, nbar=-0.1)
    with pytest.raises(ValueError):
        ResourceSpec(kind="fock")


@settings(max_examples=25, deadline=None)
@given(
    theta=st.floats(min_value=0.0, max_value=np.pi / 2),
    phi=st.floats(min_value=0.0, max_value=2 * np.pi),
    alpha=st.floats(min_value=0.2, max_value=1.5),
)
def test_hadamard_image_is_normalized(theta, phi, alpha):
    ket = hadamard_image(CsqSpec(alpha, theta, phi), 24)
    assert ket.norm2 == pytest.approx(1.0)
