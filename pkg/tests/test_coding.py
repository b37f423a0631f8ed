"""Band-exponent selection, codebook sampling, encoding, and decoding."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from martonlab.channels import ClassicalBroadcastChannel, InputDesign, build_classical_joints
from martonlab.coding import (
    DECODE_TOL,
    ClassicalSetEvaluator,
    ClassicalThresholdEvaluator,
    Codebook,
    DecodeResult,
    QuantumPairEvaluator,
    RateParams,
    SetMembership,
    ThresholdMembership,
    decode_cols,
    decode_pgm,
    decode_rows,
    encode,
    generate_codebook,
    pgm_outcome_probabilities,
    select_band_exponents,
)
from martonlab.divergences import classical_i_infty, llr_table
from martonlab.errors import InfeasibleRates, ValidationError
from martonlab.prob import JointPmf
from martonlab.quantum import pretty_good_measurement
from martonlab.rng import SeededRng

DSBS_45 = np.array([[0.45, 0.05], [0.05, 0.45]])
DSBS_40 = np.array([[0.40, 0.10], [0.10, 0.40]])


def dsbs_joint(probs):
    return JointPmf(("0", "1"), ("0", "1"), probs)


def pair_design(probs):
    joint = dsbs_joint(probs)
    f = {(u, v): u + v for u in "01" for v in "01"}
    return InputDesign(joint, f)


def bsc_pair_channel(p: float, q: float) -> ClassicalBroadcastChannel:
    """X = two bits; Bob sees bit one through BSC(p), Charlie bit two through BSC(q)."""
    xs = ("00", "01", "10", "11")
    probs = np.zeros((4, 2, 2))
    for i, x in enumerate(xs):
        for y in range(2):
            for z in range(2):
                py = (1 - p) if y == int(x[0]) else p
                pz = (1 - q) if z == int(x[1]) else q
                probs[i, y, z] = py * pz
    return ClassicalBroadcastChannel(xs, ("0", "1"), ("0", "1"), probs)


def copy_pair_channel() -> ClassicalBroadcastChannel:
    return bsc_pair_channel(0.0, 0.0)


# ---------------------------------------------------------------------------
# band-exponent selection


class TestSelectBandExponents:
    def test_reference_instance(self):
        # R1 = R2 = 5, budgets 30 each, correlation cost 2 bits, eps_tilde = 1/16
        assert select_band_exponents(5, 5, 30.0, 30.0, 2.0, 1 / 16) == (8, 6)

    def test_bsc_desk_instance(self):
        # unit rates against a 41.16-bit budget at eps_tilde = 0.01
        assert select_band_exponents(1, 1, 41.16, 41.16, 0.0, 0.01) == (12, 8)

    def test_row_side_fills_first(self):
        # surplus goes to r1 until its cap binds, then spills to r2
        ell = 4.0
        assert select_band_exponents(0, 0, 40.0, 21.0, 6.0, 1 / 16) == (14, 4)
        assert select_band_exponents(0, 0, 21.0, 40.0, 6.0, 1 / 16) == (4, 14)

    def test_eps_tilde_range(self):
        with pytest.raises(InfeasibleRates, match="eps_tilde"):
            select_band_exponents(1, 1, 40.0, 40.0, 0.0, 0.2)
        with pytest.raises(InfeasibleRates, match="eps_tilde"):
            select_band_exponents(1, 1, 40.0, 40.0, 0.0, 0.0)
        # 1/8 itself is allowed
        select_band_exponents(1, 1, 40.0, 40.0, 0.0, 0.125)

    def test_row_budget_infeasible(self):
        with pytest.raises(InfeasibleRates, match="row budget"):
            select_band_exponents(5, 5, 12.0, 30.0, 2.0, 1 / 16)

    def test_column_budget_infeasible(self):
        with pytest.raises(InfeasibleRates, match="column budget"):
            select_band_exponents(5, 5, 30.0, 12.0, 2.0, 1 / 16)

    def test_band_sum_unreachable(self):
        # both caps sit at the floor, so a large correlation cost cannot be met
        with pytest.raises(InfeasibleRates, match="band sum"):
            select_band_exponents(0, 0, 21.0, 21.0, 20.0, 1 / 16)

    def test_negative_rate_rejected(self):
        with pytest.raises(ValidationError):
            select_band_exponents(-1, 0, 30.0, 30.0, 0.0, 1 / 16)

    @given(
        ell=st.floats(3.0, 8.0),
        i_infty=st.floats(0.0, 10.0),
        R1=st.integers(0, 5),
        R2=st.integers(0, 5),
        extra1=st.floats(1.5, 15.0),
        extra2=st.floats(1.5, 15.0),
    )
    @settings(max_examples=120, deadline=None)
    def test_selection_satisfies_constraints(self, ell, i_infty, R1, R2, extra1, extra2):
        eps_tilde = 2.0 ** (-ell)
        i0b = R1 + 4 * ell + 1 + ell + extra1
        i0c = R2 + 4 * ell + 1 + ell + extra2
        try:
            r1, r2 = select_band_exponents(R1, R2, i0b, i0c, i_infty, eps_tilde)
        except InfeasibleRates:
            assume(False)
        params = RateParams(R1=R1, R2=R2, r1=r1, r2=r2, eps_tilde=eps_tilde,
                            eps0=0.01, eps_infty=0.25, i0b=i0b, i0c=i0c, i_infty=i_infty)
        params.validate()
        assert r1 >= math.ceil(ell - 1e-9)
        assert r2 >= math.ceil(ell - 1e-9)
        assert R1 + r1 <= i0b - 4 * ell - 1 + 1e-6
        assert R2 + r2 <= i0c - 4 * ell - 1 + 1e-6


class TestRateParams:
    def valid(self, **over):
        base = dict(R1=5, R2=5, r1=8, r2=6, eps_tilde=1 / 16, eps0=0.01,
                    eps_infty=0.25, i0b=30.0, i0c=30.0, i_infty=2.0)
        base.update(over)
        return RateParams(**base)

    def test_valid_instance_passes(self):
        self.valid().validate()

    def test_counts(self):
        p = self.valid()
        assert p.n_rows == 1 << 13
        assert p.n_cols == 1 << 11
        assert p.log_inv_eps == pytest.approx(4.0)

    def test_non_integer_band_rejected(self):
        with pytest.raises(ValidationError, match="integer"):
            self.valid(r1=8.0)

    def test_negative_rate_rejected(self):
        with pytest.raises(ValidationError):
            self.valid(R1=-1)

    def test_zero_band_rejected(self):
        with pytest.raises(ValidationError):
            self.valid(r1=0)

    def test_eps_bounds(self):
        with pytest.raises(ValidationError):
            self.valid(eps_tilde=0.0)
        with pytest.raises(ValidationError):
            self.valid(eps0=1.0)
        with pytest.raises(ValidationError):
            self.valid(eps_infty=1.0)

    def test_thinning_budget_named(self):
        with pytest.raises(InfeasibleRates, match="thinning budget"):
            self.valid(eps_infty=0.3).validate()

    def test_row_budget_named(self):
        with pytest.raises(InfeasibleRates, match="row budget"):
            self.valid(i0b=29.0).validate()

    def test_column_budget_named(self):
        with pytest.raises(InfeasibleRates, match="column budget"):
            self.valid(i0c=27.0).validate()

    def test_row_band_floor_named(self):
        with pytest.raises(InfeasibleRates, match="row band floor"):
            self.valid(r1=3, r2=11, i0b=40.0, i0c=40.0).validate()

    def test_column_band_floor_named(self):
        with pytest.raises(InfeasibleRates, match="column band floor"):
            self.valid(r1=11, r2=3, i0b=40.0, i0c=40.0).validate()

    def test_band_sum_named(self):
        with pytest.raises(InfeasibleRates, match="band sum"):
            self.valid(r1=7, r2=6).validate()


# ---------------------------------------------------------------------------
# codebook sampling


def small_params(**over):
    base = dict(R1=1, R2=1, r1=3, r2=3, eps_tilde=0.05, eps0=0.01,
                eps_infty=0.25, i0b=20.0, i0c=20.0, i_infty=math.log2(1.6))
    base.update(over)
    return RateParams(**base)


class TestCodebook:
    def test_generation_deterministic(self):
        design = pair_design(DSBS_45)
        a = generate_codebook(design, small_params(), seed=7)
        b = generate_codebook(design, small_params(), seed=7)
        assert np.array_equal(a.rows, b.rows)
        assert np.array_equal(a.cols, b.cols)
        assert a.content_digest() == b.content_digest()

    def test_generation_digest_frozen(self):
        cb = generate_codebook(pair_design(DSBS_45), small_params(), seed=7)
        assert cb.content_digest() == (
            "8d573faebc40243442df140b30144faa8c8f475e94d8f1e4d4514e0d5f48b329")

    def test_seed_changes_content(self):
        design = pair_design(DSBS_45)
        a = generate_codebook(design, small_params(), seed=7)
        b = generate_codebook(design, small_params(), seed=8)
        assert a.content_digest() != b.content_digest()

    def test_word_marginals(self):
        probs = np.array([[0.56, 0.14], [0.24, 0.06]])  # pu = (0.7, 0.3), pv = (0.8, 0.2)
        design = InputDesign(dsbs_joint(probs), {(u, v): u + v for u in "01" for v in "01"})
        params = small_params(R1=9, R2=9)
        cb = generate_codebook(design, params, seed=123)
        k = cb.rows.shape[0]
        assert abs(np.mean(cb.rows == 0) - 0.7) < 3 * math.sqrt(0.21 / k)
        assert abs(np.mean(cb.cols == 0) - 0.8) < 3 * math.sqrt(0.16 / k)

    def test_independent_design_indicator_all_one(self):
        probs = np.full((2, 2), 0.25)
        design = InputDesign(dsbs_joint(probs), {(u, v): u + v for u in "01" for v in "01"})
        cb = generate_codebook(design, small_params(i_infty=0.0), seed=5)
        for k in range(cb.n_rows):
            assert cb.indicator(k, 0, cb.n_cols).all()

    def test_eta_positional_stability(self):
        cb = generate_codebook(pair_design(DSBS_45), small_params(), seed=7)
        full = cb.eta(3, 0, 16)
        assert np.array_equal(cb.eta(3, 5, 16), full[5:])
        assert np.array_equal(cb.eta(3, 2, 9), full[2:9])
        # replay is stateless: a second call returns the same values
        assert np.array_equal(cb.eta(3, 0, 16), full)

    def test_acceptance_matches_scalar_formula(self):
        cb = generate_codebook(pair_design(DSBS_45), small_params(), seed=9)
        table = llr_table(dsbs_joint(DSBS_45))
        for k in range(cb.n_rows):
            got = cb.acceptance(k, 0, cb.n_cols)
            for l in range(cb.n_cols):
                s = table[cb.rows[k, 0], cb.cols[l, 0]]
                want = 2.0 ** min(s - cb.params.i_infty, 0.0)
                assert got[l] == pytest.approx(want, rel=1e-12)

    def test_indicator_mean_matches_thinned_mass(self):
        # acceptance min(1, ratio / 2^i) averages to exactly 2^-i here
        joint = dsbs_joint(DSBS_40)
        i_inf = classical_i_infty(joint, 0.25).value
        assert i_inf == pytest.approx(math.log2(1.6), abs=1e-12)
        design = pair_design(DSBS_40)
        params = small_params(r1=6, r2=6, R1=0, R2=0, i_infty=i_inf)
        cb = generate_codebook(design, params, seed=31)
        hits = sum(cb.indicator(k, 0, cb.n_cols).sum() for k in range(cb.n_rows))
        total = cb.n_rows * cb.n_cols
        mean = hits / total
        assert abs(mean - 0.625) < 5 * math.sqrt(0.625 * 0.375 / total)

    def test_band_layout(self):
        cb = generate_codebook(pair_design(DSBS_45), small_params(), seed=7)
        seen = []
        for m1 in range(1 << cb.params.R1):
            band = cb.row_band(m1)
            assert len(band) == 1 << cb.params.r1
            seen.extend(band)
            for k in band:
                assert cb.row_band_of(k) == m1
        assert seen == list(range(cb.n_rows))
        for m2 in range(1 << cb.params.R2):
            for l in cb.col_band(m2):
                assert cb.col_band_of(l) == m2

    def test_message_range_checked(self):
        cb = generate_codebook(pair_design(DSBS_45), small_params(), seed=7)
        with pytest.raises(ValidationError):
            cb.row_band(2)
        with pytest.raises(ValidationError):
            cb.col_band(-1)

    def test_shape_mismatch_rejected(self):
        design = pair_design(DSBS_45)
        params = small_params()
        cb = generate_codebook(design, params, seed=7)
        with pytest.raises(ValidationError):
            Codebook(cb.rows[:8], cb.cols, params, design, 7)
        with pytest.raises(ValidationError):
            Codebook(cb.rows[:, 0], cb.cols, params, design, 7)

    def test_size_cap(self):
        design = pair_design(DSBS_45)
        params = small_params(R1=26)
        with pytest.raises(ValidationError, match="exceeds"):
            generate_codebook(design, params, seed=7)

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_kept_mass_floor(self, seed):
        # mean indicator stays above 2^(-i_infty - 2) whenever eps_infty <= 1/4
        rng = np.random.default_rng(seed)
        probs = rng.uniform(0.01, 1.0, size=(3, 3))
        probs /= probs.sum()
        labels = tuple("abc")
        joint = JointPmf(labels, labels, probs)
        i_inf = classical_i_infty(joint, 0.25).value
        table = llr_table(joint)
        pu, pv = joint.marginals()
        accept = np.exp2(np.minimum(table - i_inf, 0.0))
        mean = float(pu.probs @ accept @ pv.probs)
        assert mean >= 2.0 ** (-i_inf - 2.0) - 1e-12


# ---------------------------------------------------------------------------
# encoding


class TestEncode:
    def correlated_setup(self):
        probs = np.array([[0.5, 0.0], [0.0, 0.5]])
        joint = dsbs_joint(probs)
        design = InputDesign(joint, {("0", "0"): "00", ("1", "1"): "11"})
        params = small_params(r1=2, r2=2, i0b=5.0, i0c=5.0, i_infty=1.0)
        ch = copy_pair_channel()
        ev = ClassicalSetEvaluator(ch, design, np.eye(2, dtype=bool), np.eye(2, dtype=bool))
        return design, params, ch, ev

    def test_noiseless_success(self):
        design, params, ch, ev = self.correlated_setup()
        cb = generate_codebook(design, params, seed=11)
        out = encode(cb, 1, 0, ev, 0.01)
        assert not out.fallback
        assert out.row in cb.row_band(1) and out.col in cb.col_band(0)
        assert out.alpha == 1.0 and out.beta == 1.0
        # the chosen pair is on the diagonal and maps to the paired symbol
        u, v = cb.rows[out.row, 0], cb.cols[out.col, 0]
        assert u == v
        assert out.x_word[0] == ch.x_index("00" if u == 0 else "11")

    def test_dead_band_falls_back(self):
        design, params, ch, ev = self.correlated_setup()
        dead = small_params(r1=2, r2=2, i0b=5.0, i0c=5.0, i_infty=60.0)
        cb = generate_codebook(design, dead, seed=11)
        out = encode(cb, 0, 1, ev, 0.01)
        assert out.fallback
        assert out.row is None and out.col is None
        assert out.scanned == 16
        assert np.array_equal(out.x_word, np.zeros(1, dtype=np.int64))
        assert out.alpha == 0.0 and out.beta == 0.0

    def test_acceptance_threshold_blocks_cells(self):
        design, params, ch, _ = self.correlated_setup()
        cb = generate_codebook(design, params, seed=11)
        low = ClassicalSetEvaluator(ch, design, np.zeros((2, 2), bool), np.eye(2, dtype=bool))
        out = encode(cb, 1, 0, low, 0.01)
        assert out.fallback

    def test_matches_scalar_rescan(self):
        ch = bsc_pair_channel(0.1, 0.15)
        design = pair_design(DSBS_45)
        joint = dsbs_joint(DSBS_45)
        i_inf = classical_i_infty(joint, 0.25).value
        params = small_params(r1=2, r2=2, i_infty=i_inf, eps0=0.05)
        ev = ClassicalSetEvaluator(ch, design, np.eye(2, dtype=bool), np.eye(2, dtype=bool))
        table = llr_table(joint)
        for seed in (0, 1, 2):
            cb = generate_codebook(design, params, seed=seed)
            for m1 in (0, 1):
                for m2 in (0, 1):
                    got = encode(cb, m1, m2, ev, 0.05)
                    want = self.rescan(cb, m1, m2, ev, 0.05, table)
                    assert (got.row, got.col, got.fallback) == want

    @staticmethod
    def rescan(cb, m1, m2, ev, eps0, table):
        thr = 1 - 4 * eps0
        for k in cb.row_band(m1):
            for l in cb.col_band(m2):
                eta = cb.eta(k, l, l + 1)[0]
                s = sum(table[cb.rows[k, t], cb.cols[l, t]] for t in range(cb.n))
                if eta <= 2.0 ** min(s - cb.params.i_infty, 0.0):
                    a, b = ev.alpha_beta(cb.rows[k], cb.cols[l])
                    if a > thr and b > thr:
                        return k, l, False
        return None, None, True


class TestThresholdEvaluator:
    def test_tail_mass_matches_enumeration(self):
        ch = bsc_pair_channel(0.1, 0.2)
        design = pair_design(DSBS_45)
        uy, vz = build_classical_joints(ch, design)
        llr1, llr2 = llr_table(uy), llr_table(vz)
        tau = 0.8
        ev = ClassicalThresholdEvaluator(ch, design, llr1, llr2, tau, tau)
        u = np.array([0, 1, 0])
        v = np.array([1, 1, 0])
        x = ev.x_of_pair(u, v)
        py = ch.marginal_y()
        alpha_brute = 0.0
        for y0 in range(2):
            for y1 in range(2):
                for y2 in range(2):
                    ys = (y0, y1, y2)
                    score = sum(llr1[u[t], ys[t]] for t in range(3))
                    if score >= tau - DECODE_TOL:
                        alpha_brute += math.prod(py[x[t], ys[t]] for t in range(3))
        alpha, _ = ev.alpha_beta(u, v)
        assert alpha == pytest.approx(alpha_brute, abs=1e-12)

    def test_certain_set_gives_unit_mass(self):
        ch = copy_pair_channel()
        design = pair_design(np.array([[0.5, 0.0], [0.0, 0.5]]))
        llr = np.zeros((2, 2))
        ev = ClassicalThresholdEvaluator(ch, design, llr, llr, 0.0, 0.0)
        alpha, beta = ev.alpha_beta(np.array([0, 1]), np.array([0, 1]))
        assert alpha == pytest.approx(1.0)
        assert beta == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# decoding


def handmade_codebook(row_words, col_words, r1=2, r2=2, n=1):
    rows = np.asarray(row_words, dtype=np.int64).reshape(-1, n)
    cols = np.asarray(col_words, dtype=np.int64).reshape(-1, n)
    R1 = int(math.log2(rows.shape[0])) - r1
    R2 = int(math.log2(cols.shape[0])) - r2
    params = small_params(R1=R1, R2=R2, r1=r1, r2=r2)
    design = pair_design(DSBS_45)
    return Codebook(rows, cols, params, design, seed=0, n=n)


class TestClassicalDecoders:
    def test_unique_match(self):
        cb = handmade_codebook([0, 0, 0, 0, 0, 0, 1, 0], [0] * 8)
        res = decode_rows(cb, np.array([1]), SetMembership(np.eye(2, dtype=bool)))
        assert res.message == 1
        assert res.unique_match == 6
        assert not res.ambiguous and not res.no_match and not res.failed

    def test_no_match_defaults_to_zero(self):
        cb = handmade_codebook([0] * 8, [0] * 8)
        res = decode_rows(cb, np.array([1]), SetMembership(np.eye(2, dtype=bool)))
        assert res.message == 0
        assert res.no_match
        assert res.matched.size == 0
        assert res.unique_match is None

    def test_smallest_band_wins_and_ambiguity_flagged(self):
        cb = handmade_codebook([0, 1, 0, 0, 0, 0, 1, 0], [0] * 8)
        res = decode_rows(cb, np.array([1]), SetMembership(np.eye(2, dtype=bool)))
        assert res.message == 0
        assert res.ambiguous
        assert list(res.matched) == [1, 6]
        assert res.unique_match is None

    def test_same_band_multiple_matches_not_ambiguous(self):
        cb = handmade_codebook([1, 1, 0, 0, 0, 0, 0, 0], [0] * 8)
        res = decode_rows(cb, np.array([1]), SetMembership(np.eye(2, dtype=bool)))
        assert res.message == 0
        assert not res.ambiguous
        assert list(res.matched) == [0, 1]

    def test_column_decoder_uses_col_bands(self):
        cb = handmade_codebook([0] * 8, [0, 0, 0, 0, 0, 1, 0, 0])
        res = decode_cols(cb, np.array([1]), SetMembership(np.eye(2, dtype=bool)))
        assert res.message == 1
        assert res.unique_match == 5

    def test_threshold_membership_scores(self):
        joint = dsbs_joint(DSBS_45)
        table = llr_table(joint)
        words = np.array([[0, 0], [0, 1], [1, 1]])
        received = np.array([0, 0])
        hit = table[0, 0] * 2
        mem = ThresholdMembership(table, hit)
        assert list(mem.matches(words, received)) == [True, False, False]
        # slack: a threshold within DECODE_TOL above the score still matches
        assert ThresholdMembership(table, hit + 1e-7).matches(words, received)[0]
        assert not ThresholdMembership(table, hit + 1e-4).matches(words, received)[0]

    def test_set_membership_blocklength_guard(self):
        mem = SetMembership(np.eye(2, dtype=bool))
        with pytest.raises(ValidationError):
            mem.matches(np.zeros((4, 2), dtype=np.int64), np.array([0, 0]))


class TestPgmDecoder:
    def test_orthogonal_tests_identify_label(self):
        tests = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
        words = np.array([[0], [1], [0], [1]])
        vec = pgm_outcome_probabilities(words, tests, np.diag([1.0, 0.0]))
        assert vec == pytest.approx([0.5, 0.0, 0.5, 0.0, 0.0])
        res = decode_pgm(words, tests, np.diag([1.0, 0.0]), lambda k: k >> 1, SeededRng(3, 9))
        assert res.message is not None
        assert words[res.unique_match, 0] == 0

    def test_diagonal_oracle(self):
        rng = np.random.default_rng(77)
        labels = np.array([0, 1, 1, 0, 2, 2])
        tests = [np.diag(rng.uniform(0.05, 1.0, size=4)) for _ in range(3)]
        state_d = rng.uniform(0.0, 1.0, size=4)
        state_d /= state_d.sum()
        counts = np.bincount(labels, minlength=3)
        s_diag = sum(counts[u] * np.diag(tests[u]) for u in range(3))
        q = np.array([float(np.sum(np.diag(tests[u]) * state_d / s_diag)) for u in range(3)])
        want = np.concatenate([q[labels], [0.0]])
        got = pgm_outcome_probabilities(labels[:, None], tests, np.diag(state_d))
        assert got == pytest.approx(want, abs=1e-12)

    def test_matches_measurement_construction(self, np_rng):
        # same probabilities as building the per-word measurement explicitly
        from tests.conftest import rand_psd, rand_state

        labels = np.array([0, 2, 1, 1, 0, 2, 0, 1])
        tests = [rand_psd(np_rng, 3, rank=2) for _ in range(3)]
        tests = [t / (np.linalg.eigvalsh(t).max() + 0.1) for t in tests]
        state = rand_state(np_rng, 3)
        povm = pretty_good_measurement([tests[u] for u in labels])
        want = povm.outcome_probabilities(state)
        got = pgm_outcome_probabilities(labels[:, None], tests, state)
        assert got == pytest.approx(want, abs=1e-9)

    def test_completion_outcome_fails(self):
        tests = [np.diag([1.0, 0.0, 0.0]), np.diag([0.0, 1.0, 0.0])]
        words = np.array([[0], [1]])
        state = np.diag([0.0, 0.0, 1.0])
        vec = pgm_outcome_probabilities(words, tests, state)
        assert vec == pytest.approx([0.0, 0.0, 1.0])
        res = decode_pgm(words, tests, state, lambda k: k, SeededRng(1, 1))
        assert res.failed
        assert res.message is None

    def test_deterministic_given_stream(self):
        tests = [np.diag([0.7, 0.2]), np.diag([0.3, 0.8])]
        words = np.array([[0], [1], [1], [0]])
        state = np.diag([0.6, 0.4])
        a = decode_pgm(words, tests, state, lambda k: k >> 1, SeededRng(42, 5))
        b = decode_pgm(words, tests, state, lambda k: k >> 1, SeededRng(42, 5))
        assert a.unique_match == b.unique_match

    def test_blocklength_guard(self):
        with pytest.raises(ValidationError):
            pgm_outcome_probabilities(np.zeros((2, 3), dtype=np.int64),
                                      [np.eye(2)], np.diag([1.0, 0.0]))
