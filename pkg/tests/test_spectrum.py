import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from estimation.spectrum import (
    HamiltonianModel,
    ResidualPolicy,
    SpectralDecomposition,
    build_tfim,
    dump_spectrum,
    eigendecompose,
    exact_expectation,
    load_spectrum,
    make_initial_state,
    phase_to_energy,
    phases_from_eigenvalues,
    spectral_phases,
    tfim_spectral_model,
)
from utils.exceptions import ExportError, InvalidArgumentError, NumericError


class TestTfim:

    def test_classical_limit_spectrum(self):
        # g = 0 on a ring of three: two aligned states at -3, six with one domain wall pair at +1
        H = build_tfim(3, 0.0)
        eigenvalues = eigendecompose(H).eigenvalues
        np.testing.assert_allclose(eigenvalues, [-3, -3, 1, 1, 1, 1, 1, 1], atol=1e-12)

    def test_two_site_ring_without_field(self):
        # both periodic bonds join the same pair, so H = -2 Z0 Z1
        eigenvalues = eigendecompose(build_tfim(2, 0.0)).eigenvalues
        np.testing.assert_allclose(eigenvalues, [-2, -2, 2, 2], atol=1e-12)

    def test_matrix_shape_and_symmetry(self):
        H = build_tfim(4, 1.3)
        assert H.dimension == 16
        np.testing.assert_array_equal(H.matrix, H.matrix.T)

    @pytest.mark.parametrize("L", [1, 13, 2.0, True])
    def test_rejects_bad_sizes(self, L):
        with pytest.raises(InvalidArgumentError):
            build_tfim(L, 1.0)

    def test_ground_phase_is_minus_quarter_pi(self, tfim_model):
        # the L = 8 spectrum is symmetric, so ‖H‖₂ = |E_ground|
        assert tfim_model.phases[tfim_model.ground_index] == pytest.approx(-math.pi / 4, abs=1e-12)
        assert np.all(np.abs(tfim_model.phases) <= math.pi / 4 + 1e-15)
        np.testing.assert_allclose(np.sort(tfim_model.eigenvalues), -np.sort(tfim_model.eigenvalues)[::-1],
                                   atol=1e-9)

    def test_phase_to_energy_inverts_rescaling(self, tfim_model):
        for index in (0, 5, 100):
            energy = phase_to_energy(tfim_model.phases[index], tfim_model.norm)
            assert energy == pytest.approx(tfim_model.eigenvalues[index], abs=1e-9)

    def test_spectral_model_is_read_only(self, tfim_model):
        with pytest.raises(ValueError):
            tfim_model.phases[0] = 0.0
        with pytest.raises(ValueError):
            tfim_model.eigenvalues[0] = 0.0

    def test_spectral_model_is_cached(self, fresh_cache):
        first = tfim_spectral_model(6, 2.0)
        second = tfim_spectral_model(6, 2.0)
        assert first is second
        assert fresh_cache.get_stats()["hits"] >= 1

    def test_spectral_phases_in_quarter_circle(self):
        phases = spectral_phases(build_tfim(5, 0.7))
        assert phases.min() == pytest.approx(-math.pi / 4) or phases.max() == pytest.approx(math.pi / 4)


class TestEigendecompose:

    def test_solver_failure_becomes_numeric_error(self, mocker):
        mocker.patch("scipy.linalg.eigh", side_effect=scipy.linalg.LinAlgError("no convergence"))
        with pytest.raises(NumericError):
            eigendecompose(np.eye(4))

    def test_residual_contract_checked(self, mocker):
        wrong = (np.array([0.0, 5.0]), np.eye(2))
        mocker.patch("scipy.linalg.eigh", return_value=wrong)
        with pytest.raises(NumericError) as excinfo:
            eigendecompose(np.array([[1.0, 2.0], [2.0, 1.0]]))
        assert "residual" in excinfo.value.diagnostics

    def test_random_symmetric_matrix(self):
        rng = np.random.default_rng(8)
        a = rng.normal(size=(8, 8))
        H = (a + a.T) / 2
        eigenvalues, vectors = eigendecompose(H)
        scale = np.linalg.norm(H, 2)
        assert np.all(np.diff(eigenvalues) >= 0)
        assert np.linalg.norm(H @ vectors - vectors * eigenvalues) <= 1e-9 * scale
        np.testing.assert_allclose(vectors.T @ vectors, np.eye(8), atol=1e-12)
        reconstructed = vectors @ np.diag(eigenvalues) @ vectors.T
        assert np.linalg.norm(reconstructed - H) <= 1e-9 * scale

    def test_zero_hamiltonian_rejected(self):
        with pytest.raises(InvalidArgumentError):
            phases_from_eigenvalues(np.zeros(4))

    def test_asymmetric_matrix_rejected(self):
        with pytest.raises(InvalidArgumentError):
            HamiltonianModel(sites=1, coupling=0.0, matrix=np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestInitialState:

    def test_overlap_and_normalization(self, tfim_model):
        sd = make_initial_state(tfim_model.phases, 0, 0.6, seed=3)
        assert sd.p0 == pytest.approx(0.6)
        assert sd.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert sd.target_phase == pytest.approx(-math.pi / 4, abs=1e-12)

    def test_random_policy_is_seeded(self, tfim_model):
        a = make_initial_state(tfim_model.phases, 0, 0.8, seed=9)
        b = make_initial_state(tfim_model.phases, 0, 0.8, seed=9)
        c = make_initial_state(tfim_model.phases, 0, 0.8, seed=10)
        np.testing.assert_array_equal(a.weights, b.weights)
        assert not np.array_equal(a.weights, c.weights)

    def test_uniform_policy(self):
        sd = make_initial_state([0.1, 0.2, 0.3, 0.4, 0.5], 2, 0.6, residual_policy=ResidualPolicy.UNIFORM)
        np.testing.assert_allclose(sd.weights, [0.1, 0.1, 0.6, 0.1, 0.1])

    def test_single_policy(self):
        sd = make_initial_state([0.1, 0.2, 0.3], 0, 0.7, residual_policy="single", residual_index=2)
        np.testing.assert_allclose(sd.weights, [0.7, 0.0, 0.3])

    @pytest.mark.parametrize("p0", [0.0, -0.1, 1.5])
    def test_overlap_out_of_range(self, p0):
        with pytest.raises(InvalidArgumentError):
            make_initial_state([0.1, 0.2], 0, p0)

    def test_single_policy_needs_other_index(self):
        with pytest.raises(InvalidArgumentError):
            make_initial_state([0.1, 0.2], 0, 0.5, residual_policy="single", residual_index=0)

    def test_residual_needs_another_state(self):
        with pytest.raises(InvalidArgumentError):
            make_initial_state([0.1], 0, 0.5)
        assert make_initial_state([0.1], 0, 1.0).p0 == 1.0


class TestSpectralDecomposition:

    @pytest.mark.parametrize("phases, weights", [
        ([], []),
        ([0.1, 0.2], [1.0]),
        ([0.1, 0.2], [0.7, 0.2]),
        ([0.1, 0.2], [1.2, -0.2]),
        ([float("nan")], [1.0]),
    ])
    def test_invalid_inputs(self, phases, weights):
        with pytest.raises(InvalidArgumentError):
            SpectralDecomposition(phases=phases, weights=weights)

    def test_phases_stored_in_signed_range(self):
        sd = SpectralDecomposition(phases=[0.5, 4.0], weights=[0.5, 0.5])
        assert sd.phases[0] == 0.5
        assert sd.phases[1] == pytest.approx(4.0 - 2 * math.pi)

    def test_exact_expectation(self, one_hot, small_state):
        assert exact_expectation(one_hot(0.7), 8) == pytest.approx(complex(math.cos(5.6), math.sin(5.6)))
        expected = sum(w * np.exp(1j * 3 * p) for p, w in zip(small_state.phases, small_state.weights))
        assert exact_expectation(small_state, 3) == pytest.approx(expected)
        with pytest.raises(InvalidArgumentError):
            exact_expectation(small_state, 0)

    @settings(max_examples=50)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.sampled_from([1, 2, 8, 64]))
    def test_expectation_within_residual_of_target_term(self, seed, t):
        rng = np.random.default_rng(seed)
        size = int(rng.integers(2, 12))
        phases = rng.uniform(-math.pi, math.pi, size=size)
        weights = rng.dirichlet(np.ones(size))
        sd = SpectralDecomposition(phases=phases, weights=weights)
        leading = sd.p0 * np.exp(1j * t * sd.target_phase)
        assert abs(exact_expectation(sd, t) - leading) <= 1.0 - sd.p0 + 1e-12

    def test_json_file_roundtrip(self, small_state, tmp_path):
        path = dump_spectrum(small_state, tmp_path / "spectra" / "small.json")
        loaded = load_spectrum(path)
        np.testing.assert_array_equal(loaded.phases, small_state.phases)
        np.testing.assert_array_equal(loaded.weights, small_state.weights)
        assert loaded.target_index == 0

    def test_missing_file(self, tmp_path):
        with pytest.raises(ExportError):
            load_spectrum(tmp_path / "absent.json")
