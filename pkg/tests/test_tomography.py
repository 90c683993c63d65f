import numpy as np
import pytest
from numpy.testing import assert_array_equal

from catgate.analysis.figures import fidelity
from catgate.errors import DatasetFormatError, DimensionError
from catgate.fock.core import basis_ket, tensor
from catgate.states.constructors import cat, coherent
from catgate.tomography.maxlik import bin_povms, compare_corrections, maxlik_reconstruct
from catgate.tomography.sampling import (
    QuadratureDataset,
    quadrature_distribution,
    read_dataset,
    sample_homodyne,
    write_dataset,
)

PHASES = np.pi * np.arange(12) / 12


def test_vacuum_quadrature_variance():
    data = sample_homodyne(basis_ket(0, 8), PHASES, 20_000, seed=7)
    assert data.n_samples == 240_000
    assert np.var(data.x) == pytest.approx(0.5, abs=0.01)


def test_coherent_quadrature_means():
    data = sample_homodyne(coherent(0.8, 20), [0.0, np.pi / 2, np.pi], 50_000, seed=3)
    means = [data.x[data.phases == th].mean() for th in (0.0, np.pi / 2, np.pi)]
    assert means[0] == pytest.approx(np.sqrt(2) * 0.8, abs=0.02)
    assert means[1] == pytest.approx(0.0, abs=0.02)
    assert means[2] == pytest.approx(-np.sqrt(2) * 0.8, abs=0.02)


def test_loss_shrinks_coherent_mean():
    data = sample_homodyne(coherent(0.8, 20), [0.0], 50_000, eta=0.5, seed=5)
    assert data.x.mean() == pytest.approx(0.8, abs=0.02)


def test_sampling_is_deterministic_given_seed():
    a = sample_homodyne(cat(0.75, -1, 12), PHASES, 100, seed=11)
    b = sample_homodyne(cat(0.75, -1, 12), PHASES, 100, seed=11)
    assert_array_equal(a.x, b.x)
    assert_array_equal(a.phases, b.phases)


def test_quadrature_distribution_is_normalized():
    xs = np.arange(-6, 6, 0.01)
    pdf = quadrature_distribution(cat(0.75, -1, 12).to_density(), 0.3, xs)
    assert pdf.sum() * 0.01 == pytest.approx(1.0, abs=1e-6)
    assert pdf.min() >= -1e-12


def test_sampling_rejects_multimode_states():
    with pytest.raises(DimensionError):
        sample_homodyne(tensor(basis_ket(0, 2), basis_ket(0, 2)), PHASES, 10)
    with pytest.raises(ValueError):
        sample_homodyne(basis_ket(0, 4), PHASES, 0)


def test_bin_povms_resolve_identity():
    povms = bin_povms(np.array([0.0, 0.7]), 6, 0.77)
    assert povms.shape == (2, 120, 6, 6)
    for k in range(2):
        np.testing.assert_allclose(povms[k].sum(axis=0), np.eye(6), atol=1e-8)


def test_single_photon_reconstruction():
    data = sample_homodyne(basis_ket(1, 8), PHASES, 5_000, seed=21)
    report = maxlik_reconstruct(data, 6, max_iter=300)
    assert fidelity(report.rho_hat, basis_ket(1, 6)) > 0.93
    assert report.rho_hat.is_valid()
    assert np.all(np.diff(report.loglik) >= -1e-9)
    assert report.metadata["phases"] == 12
    assert report.metadata["bootstrap"] is None


def test_reconstruction_needs_enough_phases():
    data = sample_homodyne(basis_ket(0, 4), PHASES[:4], 100, seed=1)
    with pytest.raises(ValueError):
        maxlik_reconstruct(data, 4)
    full = sample_homodyne(basis_ket(0, 4), PHASES, 100, seed=1)
    with pytest.raises(ValueError):
        maxlik_reconstruct(full, 4, eta_correction=0.0)


def test_dataset_file_round_trip(tmp_path):
    data = sample_homodyne(basis_ket(0, 6), PHASES, 20, eta=0.77, seed=4)
    path = tmp_path / "quadratures.tsv"
    write_dataset(data, path)
    back = read_dataset(path)
    assert back.eta == pytest.approx(0.77)
    assert back.seed == 4
    np.testing.assert_allclose(back.x, data.x, rtol=1e-11)
    assert path.read_text().startswith("# catgate-quadrature v1, eta=0.77, seed=4\n")


def test_unseeded_dataset(tmp_path):
    path = tmp_path / "q.tsv"
    write_dataset(QuadratureDataset([0.0, 0.1], [0.2, -0.3]), path)
    assert read_dataset(path).seed is None


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("theta\tx\n0.0\t0.1\n", 1),
        ("# catgate-quadrature v1, eta=1, seed=0\n0.0\t0.1\nabc\t0.2\n", 3),
        ("# catgate-quadrature v1, eta=1, seed=0\n0.0 0.1\n", 2),
        ("# catgate-quadrature v1, eta=1, seed=0\n0.0\tnan\n", 2),
    ],
)
def test_malformed_datasets(tmp_path, text, line):
    path = tmp_path / "bad.tsv"
    path.write_text(text)
    with pytest.raises(DatasetFormatError) as info:
        read_dataset(path)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@pytest.mark.slow
def test_loss_correction_restores_negativity():
    result = compare_corrections(cat(0.75, -1, 10), eta=0.77, n_samples=200_000, seed=2)
    assert result.w0_corrected < result.w0_uncorrected < 0.0
    assert result.fidelity_corrected > result.fidelity_uncorrected
    assert result.fidelity_corrected > 0.95


@pytest.mark.slow
def test_reconstruction_error_shrinks_with_samples():
    truth = cat(0.75, -1, 10).to_density()
    errors = []
    for n in (1_000, 10_000, 100_000):
        data = sample_homodyne(truth, PHASES, n // PHASES.size, seed=11)
        rho_hat = maxlik_reconstruct(data, 10).rho_hat
        diff = rho_hat.matrix - truth.matrix
        errors.append(0.5 * np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))).sum())
    assert errors[0] > errors[1] > errors[2]
