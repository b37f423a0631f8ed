"""Operators, partial traces, measurements, and the operator-inequality check."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import chisquare

from martonlab import SeededRng
from martonlab.errors import (
    HermiticityError,
    NormalizationError,
    PositivityError,
    ValidationError,
)
from martonlab.quantum import (
    DensityOperator,
    HermitianOperator,
    Povm,
    eig_hermitian,
    hayashi_nagaoka_check,
    matrix_from_json,
    matrix_to_json,
    measure,
    partial_trace,
    pretty_good_measurement,
    real_trace,
    tensor,
)

from conftest import rand_hermitian, rand_psd, rand_state

BELL = DensityOperator.pure([1, 0, 0, 1])
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


class TestWrappers:
    def test_hermitian_validation(self):
        HermitianOperator(PAULI_X)
        with pytest.raises(HermiticityError):
            HermitianOperator([[0, 1], [0, 0]])
        with pytest.raises(ValidationError):
            HermitianOperator(np.zeros((2, 3)))

    def test_density_validation(self):
        DensityOperator(np.eye(2) / 2)
        with pytest.raises(NormalizationError):
            DensityOperator(np.eye(2))
        with pytest.raises(PositivityError):
            DensityOperator(np.diag([1.5, -0.5]))

    def test_pure_state_normalizes(self):
        rho = DensityOperator.pure([3, 4])
        assert_allclose(real_trace(rho.matrix), 1.0, atol=1e-14)
        assert_allclose(rho.matrix[0, 0], 9 / 25, atol=1e-14)


class TestTensorAndPartialTrace:
    def test_identity_tensor(self):
        assert_allclose(tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_trace_multiplicative(self, np_rng):
        a = rand_psd(np_rng, 3)
        b = rand_psd(np_rng, 4)
        assert_allclose(np.trace(tensor(a, b)), np.trace(a) * np.trace(b), rtol=1e-12)

    def test_state_tensor_keeps_type(self):
        out = tensor(DensityOperator(np.eye(2) / 2), BELL)
        assert isinstance(out, DensityOperator)
        assert out.dim == 8

    def test_bell_marginals_are_maximally_mixed(self):
        for keep in ((0,), (1,)):
            red = partial_trace(BELL, (2, 2), keep)
            assert_allclose(red.matrix, np.eye(2) / 2, atol=1e-14)

    def test_product_state_recovers_factors(self, np_rng):
        a = rand_state(np_rng, 2)
        b = rand_state(np_rng, 3)
        ab = np.kron(a, b)
        assert_allclose(partial_trace(ab, (2, 3), (0,)), a, atol=1e-13)
        assert_allclose(partial_trace(ab, (2, 3), (1,)), b, atol=1e-13)

    def test_three_party_keep_two(self, np_rng):
        a, b, c = rand_state(np_rng, 2), rand_state(np_rng, 2), rand_state(np_rng, 3)
        abc = np.kron(np.kron(a, b), c)
        assert_allclose(partial_trace(abc, (2, 2, 3), (0, 2)), np.kron(a, c), atol=1e-13)

    def test_trace_preserved(self, np_rng):
        rho = rand_state(np_rng, 12)
        red = partial_trace(rho, (3, 4), (1,))
        assert_allclose(np.trace(red), 1.0, atol=1e-12)

    def test_shape_and_keep_validation(self):
        with pytest.raises(ValidationError):
            partial_trace(np.eye(4), (2, 3), (0,))
        with pytest.raises(ValidationError):
            partial_trace(np.eye(4), (2, 2), (1, 0))


class TestEig:
    def test_pauli_x(self):
        vals, vecs = eig_hermitian(PAULI_X)
        assert_allclose(vals, [1.0, -1.0], atol=1e-14)
        assert_allclose(PAULI_X @ vecs[:, 0], vecs[:, 0], atol=1e-14)

    def test_reconstruction(self, np_rng):
        m = rand_hermitian(np_rng, 8)
        vals, vecs = eig_hermitian(m)
        assert np.all(np.diff(vals) <= 1e-12)
        assert_allclose((vecs * vals) @ vecs.conj().T, m, atol=1e-11)

    def test_rejects_non_hermitian(self):
        with pytest.raises(HermiticityError):
            eig_hermitian([[0, 1], [0, 0]])


class TestPovmAndPgm:
    def test_povm_validation(self):
        Povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
        with pytest.raises(NormalizationError):
            Povm([np.diag([1.0, 0.0]), np.diag([0.0, 0.5])])
        with pytest.raises(PositivityError):
            Povm([np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])])

    def test_pgm_orthogonal_projectors_unchanged(self):
        p0 = np.diag([1.0, 0.0])
        p1 = np.diag([0.0, 1.0])
        povm = pretty_good_measurement([p0, p1])
        assert len(povm) == 3
        assert_allclose(povm.elements[0], p0, atol=1e-12)
        assert_allclose(povm.elements[1], p1, atol=1e-12)
        assert_allclose(povm.elements[2], np.zeros((2, 2)), atol=1e-12)

    def test_pgm_single_operator_gives_support_projector(self, np_rng):
        a = rand_psd(np_rng, 4, rank=2)
        povm = pretty_good_measurement([a])
        vals = np.linalg.eigvalsh(povm.elements[0])
        # eigenvalues of a support projector are 0 or 1
        assert_allclose(np.sort(vals), [0, 0, 1, 1], atol=1e-10)
        assert_allclose(povm.elements[0] + povm.elements[1], np.eye(4), atol=1e-10)

    def test_pgm_random_sets_are_valid_povms(self, np_rng):
        for _ in range(25):
            dim = int(np_rng.integers(2, 6))
            k = int(np_rng.integers(1, 5))
            ops = [rand_psd(np_rng, dim, rank=int(np_rng.integers(1, dim + 1))) for _ in range(k)]
            povm = pretty_good_measurement(ops)  # Povm.__init__ enforces validity
            assert len(povm) == k + 1

    def test_pgm_rank_deficient_sum(self):
        # operators confined to a 2-dim subspace of a 3-dim space
        a = np.diag([0.3, 0.7, 0.0])
        b = np.diag([0.5, 0.1, 0.0])
        povm = pretty_good_measurement([a, b])
        assert_allclose(povm.elements[2], np.diag([0.0, 0.0, 1.0]), atol=1e-12)

    def test_pgm_rejects_negative_operator(self):
        with pytest.raises(PositivityError):
            pretty_good_measurement([np.diag([1.0, -0.2])])


class TestMeasure:
    def test_deterministic_outcome(self):
        povm = Povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
        rho = DensityOperator(np.diag([1.0, 0.0]))
        out = measure(rho, povm, SeededRng(3), size=50)
        assert np.all(out == 0)

    def test_frequencies_match_born_rule(self):
        povm = Povm([np.diag([1.0, 0, 0]), np.diag([0, 1.0, 0]), np.diag([0, 0, 1.0])])
        rho = DensityOperator(np.diag([0.5, 0.3, 0.2]))
        n = 100_000
        out = measure(rho, povm, SeededRng(11), size=n)
        counts = np.bincount(out, minlength=3)
        # chi-square goodness of fit at the 1e-3 level
        stat, pval = chisquare(counts, n * np.array([0.5, 0.3, 0.2]))
        assert pval > 1e-3

    def test_probability_sum_enforced(self):
        povm = Povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
        bad = np.diag([2.0, 0.0])  # trace 2, not a state; bypass wrapper on purpose
        with pytest.raises(NormalizationError):
            povm.outcome_probabilities(bad)


class TestHayashiNagaoka:
    def test_projector_extremes(self):
        assert abs(hayashi_nagaoka_check(np.eye(3), np.zeros((3, 3)))) < 1e-12
        assert hayashi_nagaoka_check(np.zeros((3, 3)), np.eye(3)) >= 0.0

    def test_zero_zero_is_slack_identity(self):
        assert_allclose(hayashi_nagaoka_check(np.zeros((2, 2)), np.zeros((2, 2))), 1.0, atol=1e-12)

    def test_validates_inputs(self):
        with pytest.raises(ValidationError):
            hayashi_nagaoka_check(np.eye(2) * 1.5, np.zeros((2, 2)))
        with pytest.raises(PositivityError):
            hayashi_nagaoka_check(np.eye(2) * 0.5, -np.eye(2))

    def test_random_pairs_never_negative(self, np_rng):
        # the acceptance suite sweeps 200 pairs per dimension; this is a fast spot check
        for _ in range(60):
            dim = int(np_rng.integers(2, 9))
            s = rand_psd(np_rng, dim, rank=int(np_rng.integers(1, dim + 1)))
            s = s / (np.linalg.eigvalsh(s)[-1] * (1.0 + float(np_rng.random())))
            t = rand_psd(np_rng, dim, rank=int(np_rng.integers(1, dim + 1))) * float(np_rng.random() * 2)
            assert hayashi_nagaoka_check(s, t) >= -1e-9

    def test_subspace_supported_pair(self):
        s = np.diag([0.8, 0.3, 0.0, 0.0])
        t = np.diag([0.1, 0.4, 0.0, 0.0])
        assert hayashi_nagaoka_check(s, t) >= -1e-9


class TestMatrixJson:
    def test_round_trip(self, np_rng):
        m = rand_hermitian(np_rng, 3)
        back = matrix_from_json(matrix_to_json(m))
        assert_allclose(back, m, atol=0)

    def test_rejects_ragged(self):
        with pytest.raises(ValidationError):
            matrix_from_json({"dim": 2, "entries": [[[1, 0]], [[0, 0], [1, 0]]]})
