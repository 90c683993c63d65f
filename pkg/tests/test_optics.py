import numpy as np
import pytest
from numpy.testing import assert_allclose

from catgate.errors import DimensionError
from catgate.fock.core import FockKet, apply_operator, apply_unitary, basis_ket, mode_populations, tensor
from catgate.optics.ops import (
    BeamSplitterSpec,
    beam_splitter,
    displacement,
    phase_rotation,
    squeeze,
    subtraction_operator,
)
from catgate.states.constructors import coherent


def test_beam_splitter_spec_validation():
    with pytest.raises(ValueError):
        BeamSplitterSpec(t=0.5, r=0.5)
    with pytest.raises(ValueError):
        BeamSplitterSpec(t=1.5)
    with pytest.raises(DimensionError):
        BeamSplitterSpec(t=0.5, modes=(1, 1))
    spec = BeamSplitterSpec.from_reflectance(0.075, modes=(2, 3))
    assert spec.r ** 2 == pytest.approx(0.075)
    assert BeamSplitterSpec.from_transmittance(0.25).t == pytest.approx(0.5)


def test_single_photon_splits_into_t_and_r():
    U = beam_splitter(BeamSplitterSpec(t=0.6, r=0.8), (3, 3))
    out = apply_operator(U, tensor(basis_ket(1, 3), basis_ket(0, 3)))
    assert out.amplitudes[1 * 3 + 0] == pytest.approx(0.6)
    assert out.amplitudes[0 * 3 + 1] == pytest.approx(0.8)


def test_hong_ou_mandel_interference():
    t = 1 / np.sqrt(2)
    U = beam_splitter(BeamSplitterSpec(t=t, r=t), (3, 3))
    out = apply_operator(U, tensor(basis_ket(1, 3), basis_ket(1, 3)))
    assert abs(out.amplitudes[1 * 3 + 1]) < 1e-12
    assert out.amplitudes[2 * 3 + 0] == pytest.approx(-t)
    assert out.amplitudes[0 * 3 + 2] == pytest.approx(t)


def test_beam_splitter_is_unitary_below_cutoff():
    U = beam_splitter(BeamSplitterSpec.from_transmittance(0.25), (5, 5))
    assert U.unitarity_error() < 1e-12


def test_beam_splitter_targets_modes():
    U = beam_splitter(BeamSplitterSpec(t=0.0, r=1.0, modes=(0, 2)), (2, 3, 2))
    out = apply_operator(U, tensor(tensor(basis_ket(1, 2), basis_ket(2, 3)), basis_ket(0, 2)))
    assert abs(out.amplitudes[(0 * 3 + 2) * 2 + 1]) == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        beam_splitter(BeamSplitterSpec(t=0.5, modes=(0, 3)), (2, 2))


def test_coherent_beam_splitting():
    U = beam_splitter(BeamSplitterSpec.from_transmittance(0.25), (16, 16))
    out = apply_unitary(U, tensor(coherent(1.0, 16), coherent(0.0, 16)))
    t, r = 0.5, np.sqrt(0.75)
    expected = tensor(coherent(t, 16), coherent(r, 16))
    assert abs(expected.overlap(out)) == pytest.approx(1.0, abs=1e-8)


def test_displacement_of_vacuum():
    ket = apply_operator(displacement(0.8, 30), basis_ket(0, 30))
    assert_allclose(ket.amplitudes, coherent(0.8, 30).amplitudes, atol=1e-8)


def test_squeeze_inverse():
    S = squeeze(0.3, 40).matrix
    Sinv = squeeze(-0.3, 40).matrix
    assert_allclose((Sinv @ S)[:6, :6], np.eye(6), atol=1e-8)


def test_parity_rotation():
    assert_allclose(np.diag(phase_rotation(np.pi, 4).matrix), [1, -1, 1, -1], atol=1e-15)


def test_subtraction_operator():
    op = subtraction_operator(0.6, 0.8, (0, 1), (3, 3))
    out = apply_operator(op, tensor(basis_ket(1, 3), basis_ket(1, 3)))
    assert out.amplitudes[0 * 3 + 1] == pytest.approx(0.8)
    assert out.amplitudes[1 * 3 + 0] == pytest.approx(0.6)
    with pytest.raises(ValueError):
        subtraction_operator(0.5, 0.5, (0, 1), (3, 3))


def _mean_photons(ket):
    return sum(float(np.sum(np.arange(p.size) * p)) for p in mode_populations(ket))


def test_disjoint_beam_splitters_commute():
    dims = (3, 3, 3, 3)
    rng = np.random.default_rng(7)
    amps = rng.normal(size=81) + 1j * rng.normal(size=81)
    ket = FockKet(amps / np.linalg.norm(amps), dims)
    first = beam_splitter(BeamSplitterSpec.from_transmittance(0.25, modes=(0, 1)), dims)
    second = beam_splitter(BeamSplitterSpec.from_reflectance(0.075, modes=(2, 3)), dims)
    a = apply_operator(second, apply_operator(first, ket))
    b = apply_operator(first, apply_operator(second, ket))
    assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)


def test_beam_splitter_conserves_photon_number():
    U = beam_splitter(BeamSplitterSpec.from_transmittance(0.3), (5, 5))
    for ket in (tensor(basis_ket(1, 5), basis_ket(0, 5)), tensor(basis_ket(2, 5), basis_ket(1, 5))):
        assert _mean_photons(apply_operator(U, ket)) == pytest.approx(_mean_photons(ket), abs=1e-10)


def test_beam_splitter_inverse():
    U = beam_splitter(BeamSplitterSpec(t=0.6, r=0.8), (5, 5))
    ket = (tensor(basis_ket(2, 5), basis_ket(1, 5)) + 1j * tensor(basis_ket(0, 5), basis_ket(1, 5))).normalize()
    back = apply_operator(U.dagger(), apply_operator(U, ket))
    assert_allclose(back.amplitudes, ket.amplitudes, atol=1e-10)
