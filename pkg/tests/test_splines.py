"""Tests for spline magnitude retrieval: criterion, sampling, recovery."""

import numpy as np
import pytest

from magnilift.splines import (
    AmbiguousSupport,
    BranchLimitExceeded,
    CoeffSequence,
    InconsistentSamples,
    MagnitudeSamples,
    WindowMismatch,
    check_criterion,
    check_real_criterion,
    conjugate_equivalent,
    recover,
    sample_magnitudes,
)


def random_passing(rng, max_len=9):
    """Random sequence with at most one phase jump, hence retrievable."""
    n = int(rng.integers(1, max_len))
    mods = rng.uniform(0.3, 2.0, n)
    phases = np.zeros(n)
    if n > 1 and rng.random() < 0.7:
        phases[int(rng.integers(1, n)) :] = rng.uniform(0.2, 1.3)
    offset = int(rng.integers(-5, 5))
    return CoeffSequence(offset, mods * np.exp(1j * (phases + rng.uniform(0, 2 * np.pi))))


class TestCoeffSequence:
    def test_trims_exact_zeros(self):
        c = CoeffSequence(2, [0, 0, 1, 2j, 0])
        assert c.offset == 4
        assert c.support == (4, 5)
        assert c.at(5) == 2j and c.at(3) == 0

    def test_zero_sequence(self):
        c = CoeffSequence(7, [0, 0])
        assert c.is_zero and c.support is None and c.offset == 0

    def test_interior_zero_kept(self):
        c = CoeffSequence(0, [1, 0, 1])
        assert c.coeffs.size == 3

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            CoeffSequence(0, [1.0, np.inf])


class TestCriterion:
    def test_single_im_position_passes(self):
        report = check_criterion(CoeffSequence(0, [1, 1j]))
        assert report.retrievable and report.im_positions == (0,)

    def test_interior_zero_fails(self):
        report = check_criterion(CoeffSequence(0, [1, 0, 1]))
        assert not report.retrievable and report.support_gap == 1

    def test_two_im_positions_fail(self):
        report = check_criterion(CoeffSequence(0, [1, 1j, 1]))
        assert not report.retrievable and report.im_positions == (0, 1)

    def test_positions_track_offset(self):
        report = check_criterion(CoeffSequence(-4, [1, 1j]))
        assert report.im_positions == (-4,)

    def test_real_sequences_pass(self):
        assert check_criterion(CoeffSequence(0, [1.0, -2.0, 3.0])).retrievable

    def test_zero_sequence_passes(self):
        assert check_criterion(CoeffSequence(0, [])).retrievable


class TestEquivalence:
    def test_rotation_and_conjugation(self):
        c = CoeffSequence(1, [1, 1j, -2])
        assert conjugate_equivalent(c, c.scaled(np.exp(0.7j)))
        assert conjugate_equivalent(c, c.conjugated())
        assert conjugate_equivalent(c, c.conjugated().scaled(1j))

    def test_magnitude_mismatch(self):
        assert not conjugate_equivalent(
            CoeffSequence(0, [1, 1j]), CoeffSequence(0, [1, 2j])
        )

    def test_offset_mismatch(self):
        assert not conjugate_equivalent(
            CoeffSequence(0, [1, 1j]), CoeffSequence(1, [1, 1j])
        )

    def test_zero_cases(self):
        zero = CoeffSequence(0, [])
        assert conjugate_equivalent(zero, zero)
        assert not conjugate_equivalent(zero, CoeffSequence(0, [1]))


class TestSampling:
    def test_linear_pair(self):
        s = sample_magnitudes(CoeffSequence(0, [1.0, 2.0]))
        assert s.start == -1
        np.testing.assert_allclose(s.values, [0, 0.5, 1, 1.5, 2, 1, 0])
        np.testing.assert_allclose(s.grid(), [-1, -0.5, 0, 0.5, 1, 1.5, 2])

    def test_complex_midpoint(self):
        s = sample_magnitudes(CoeffSequence(0, [1.0, 1.0j]))
        # |1 + i| / 2 between the two coefficients
        assert abs(s.values[3] - np.sqrt(2) / 2) < 1e-15

    def test_zero_function(self):
        s = sample_magnitudes(CoeffSequence(3, [0.0]))
        assert np.all(s.values == 0)

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            MagnitudeSamples(0, [0.0, -0.1, 0.0])


class TestRecover:
    def test_round_trip_real_pair(self):
        c = CoeffSequence(0, [1.0, 2.0])
        out = recover(sample_magnitudes(c))
        assert len(out) == 1 and conjugate_equivalent(out[0], c)

    def test_round_trip_one_im_position(self):
        c = CoeffSequence(0, [1.0, 1.0j])
        out = recover(sample_magnitudes(c))
        assert len(out) == 1 and conjugate_equivalent(out[0], c)

    def test_two_positions_give_two_classes(self):
        c = CoeffSequence(0, [1.0, 1.0j, 1.0])
        s = sample_magnitudes(c)
        out = recover(s)
        assert len(out) == 2
        # gauge puts the first branch at (1, -i, -1), the second at
        # (1, -i, 1) which is the conjugate of the input
        np.testing.assert_allclose(out[0].coeffs, [1, -1j, -1], atol=1e-12)
        np.testing.assert_allclose(out[1].coeffs, [1, -1j, 1], atol=1e-12)
        assert not conjugate_equivalent(out[0], c)
        assert conjugate_equivalent(out[1], c)
        for r in out:
            resampled = sample_magnitudes(r)
            assert resampled.start == s.start
            np.testing.assert_allclose(resampled.values, s.values, atol=1e-12)

    def test_gauge_is_real_positive(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            out = recover(sample_magnitudes(random_passing(rng)))
            lead = out[0].coeffs[0]
            assert lead.imag == 0 and lead.real > 0

    def test_random_round_trips(self):
        rng = np.random.default_rng(3)
        for _ in range(150):
            c = random_passing(rng)
            if not check_criterion(c).retrievable:
                continue
            out = recover(sample_magnitudes(c))
            assert len(out) == 1
            assert conjugate_equivalent(out[0], c, tol=1e-8)

    def test_branch_counts_and_reproduction(self):
        rng = np.random.default_rng(4)
        seen_multi = 0
        for _ in range(80):
            n = int(rng.integers(3, 8))
            c = CoeffSequence(
                0, rng.uniform(0.3, 2.0, n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
            )
            p = len(check_criterion(c).im_positions)
            if p < 2:
                continue
            seen_multi += 1
            s = sample_magnitudes(c)
            out = recover(s)
            assert 2 <= len(out) <= 2 ** (p - 1)
            assert any(conjugate_equivalent(r, c) for r in out)
            for r in out:
                np.testing.assert_allclose(
                    sample_magnitudes(r).values, s.values, atol=1e-10
                )
        assert seen_multi >= 40

    def test_classes_pairwise_distinct(self):
        rng = np.random.default_rng(5)
        c = CoeffSequence(
            0, rng.uniform(0.5, 1.5, 5) * np.exp(1j * rng.uniform(0, 2 * np.pi, 5))
        )
        out = recover(sample_magnitudes(c))
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                assert not conjugate_equivalent(out[i], out[j])

    def test_zero_round_trip(self):
        out = recover(sample_magnitudes(CoeffSequence(0, [])))
        assert len(out) == 1 and out[0].is_zero

    def test_single_coefficient(self):
        c = CoeffSequence(4, [2.0j])
        out = recover(sample_magnitudes(c))
        assert len(out) == 1 and conjugate_equivalent(out[0], c)

    def test_wider_window_accepted(self):
        c = CoeffSequence(0, [1.0, 2.0])
        s = sample_magnitudes(c)
        padded = MagnitudeSamples(s.start - 1, np.concatenate([[0, 0], s.values, [0, 0]]))
        out = recover(padded)
        assert len(out) == 1 and conjugate_equivalent(out[0], c)


class TestRecoverErrors:
    def test_support_touches_boundary(self):
        with pytest.raises(WindowMismatch):
            recover(MagnitudeSamples(0, [1.0, 1.0, 1.0]))

    def test_even_grid(self):
        with pytest.raises(WindowMismatch):
            recover(MagnitudeSamples(0, [0.0, 0.5, 1.0, 0.5]))

    def test_interior_gap_is_ambiguous(self):
        s = sample_magnitudes(CoeffSequence(0, [1, 0, 1]))
        with pytest.raises(AmbiguousSupport):
            recover(s)

    def test_midpoint_above_bound(self):
        v = sample_magnitudes(CoeffSequence(0, [1.0, 1.0])).values.copy()
        v[3] = 1.5  # exceeds (|c0| + |c1|) / 2
        with pytest.raises(InconsistentSamples):
            recover(MagnitudeSamples(-1, v))

    def test_bad_boundary_midpoint(self):
        v = sample_magnitudes(CoeffSequence(0, [1.0, 1.0])).values.copy()
        v[1] = 0.9
        with pytest.raises(InconsistentSamples):
            recover(MagnitudeSamples(-1, v))

    def test_midpoint_over_dead_zone(self):
        v = np.zeros(9)
        v[4] = 1.0
        v[3] = v[5] = 0.5
        v[1] = 0.3
        with pytest.raises(InconsistentSamples):
            recover(MagnitudeSamples(-2, v))

    def test_branch_cap(self):
        rng = np.random.default_rng(0)
        c = CoeffSequence(0, np.exp(1j * rng.uniform(0.3, 1.2, 15)))
        assert len(check_criterion(c).im_positions) > 12
        with pytest.raises(BranchLimitExceeded):
            recover(sample_magnitudes(c))


class TestRealCriterion:
    def test_examples(self):
        assert check_real_criterion([1, -1, 2]) is True
        assert check_real_criterion([1, 0, 1]) is False
        assert check_real_criterion([0]) is True
        assert check_real_criterion([0, 2, 3, 0]) is True

    def test_real_combinations_of_passing_sequences(self):
        # retrievable c keeps every a*Re(c) + b*Im(c) free of interior zeros
        rng = np.random.default_rng(6)
        checked = 0
        for _ in range(100):
            c = random_passing(rng)
            if not check_criterion(c).retrievable:
                continue
            for _ in range(10):
                a, b = rng.standard_normal(2)
                d = a * c.coeffs.real + b * c.coeffs.imag
                checked += 1
                assert check_real_criterion(d)
        assert checked >= 500
