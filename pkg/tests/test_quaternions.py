"""Tests for quaternion algebra and quaternion magnitude retrieval."""

import numpy as np
import pytest

from magnilift.quaternions import (
    QuatCheckReport,
    QuatFunction,
    Quaternion,
    combine_components,
    from_real_field,
    quat_conjugate_pr_check,
    quat_orbit_equivalent,
    quaternions_from_orthogonal,
    to_real_field,
)

ONE = Quaternion(1)
I = Quaternion(0, 1)
J = Quaternion(0, 0, 1)
K = Quaternion(0, 0, 0, 1)


def random_orthogonal(rng, d):
    Q, R = np.linalg.qr(rng.standard_normal((d, d)))
    return Q * np.sign(np.diag(R))


class TestAlgebra:
    def test_basis_table(self):
        # all 16 products of the basis 1, i, j, k
        basis = {"1": ONE, "i": I, "j": J, "k": K}
        expected = {
            ("1", "1"): ONE, ("1", "i"): I, ("1", "j"): J, ("1", "k"): K,
            ("i", "1"): I, ("i", "i"): -ONE, ("i", "j"): K, ("i", "k"): -J,
            ("j", "1"): J, ("j", "i"): -K, ("j", "j"): -ONE, ("j", "k"): I,
            ("k", "1"): K, ("k", "i"): J, ("k", "j"): -I, ("k", "k"): -ONE,
        }
        for (p, q), want in expected.items():
            assert (basis[p] * basis[q]).is_close(want), (p, q)

    def test_conjugate_norm_identity(self):
        q = Quaternion(1, 1, 1, 1)
        assert (q * q.conjugate()).is_close(Quaternion(4))
        assert q.norm() == 2.0

    def test_expansion_example(self):
        assert ((ONE + I) * (ONE + J)).is_close(Quaternion(1, 1, 1, 1))

    def test_norm_multiplicative(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            p = Quaternion.from_vector(rng.standard_normal(4))
            q = Quaternion.from_vector(rng.standard_normal(4))
            lhs = (p * q).norm()
            rhs = p.norm() * q.norm()
            assert abs(lhs - rhs) <= 1e-12 * rhs

    def test_real_dot_identity(self):
        # Re(p q*) is the Euclidean inner product of the coordinate rows
        rng = np.random.default_rng(1)
        for _ in range(50):
            p = Quaternion.from_vector(rng.standard_normal(4))
            q = Quaternion.from_vector(rng.standard_normal(4))
            assert abs((p * q.conjugate()).real - p.as_vector() @ q.as_vector()) < 1e-12

    def test_scalar_multiplication(self):
        assert (2.0 * I).is_close(Quaternion(0, 2))
        assert (I * 2.0).is_close(Quaternion(0, 2))


class TestCoordinates:
    def test_component_extraction(self):
        f = QuatFunction((ONE, I - K))
        field = to_real_field(f)
        np.testing.assert_array_equal(field.vectors, [[1, 0, 0, 0], [0, 1, 0, -1]])

    def test_norm_preservation(self):
        rng = np.random.default_rng(2)
        f = QuatFunction.from_array(rng.standard_normal((7, 4)))
        field = to_real_field(f)
        np.testing.assert_allclose(
            np.linalg.norm(field.vectors, axis=1), f.norms(), rtol=0, atol=1e-14
        )

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        f = QuatFunction.from_array(rng.standard_normal((4, 4)))
        g = from_real_field(to_real_field(f))
        assert all(a.is_close(b) for a, b in zip(f.values, g.values))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            QuatFunction(())


class TestOrthogonalQuadruples:
    def test_anti_commuting_conjugate_products(self):
        rng = np.random.default_rng(4)
        qs = quaternions_from_orthogonal(random_orthogonal(rng, 4))
        for a in range(4):
            assert abs(qs[a].norm() - 1.0) < 1e-12
            for b in range(a + 1, 4):
                s = qs[a] * qs[b].conjugate() + qs[b] * qs[a].conjugate()
                assert s.norm() < 1e-12

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError):
            quaternions_from_orthogonal(np.ones((4, 4)))

    def test_combination_is_coordinate_action(self):
        rng = np.random.default_rng(5)
        f = QuatFunction.from_array(rng.standard_normal((6, 4)))
        U = random_orthogonal(rng, 4)
        g = combine_components(quaternions_from_orthogonal(U), f)
        np.testing.assert_allclose(
            to_real_field(g).vectors, to_real_field(f).vectors @ U.T, atol=1e-12
        )
        np.testing.assert_allclose(g.norms(), f.norms(), atol=1e-12)


class TestOrbit:
    def test_identity(self):
        f = QuatFunction((ONE, I))
        assert quat_orbit_equivalent(f, f)

    def test_unit_left_multiplication(self):
        rng = np.random.default_rng(6)
        f = QuatFunction.from_array(rng.standard_normal((5, 4)))
        q = Quaternion.from_vector(rng.standard_normal(4))
        q = q * (1.0 / q.norm())
        g = QuatFunction(tuple(q * val for val in f.values))
        assert quat_orbit_equivalent(f, g)

    def test_orthogonal_quadruple_orbit(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            f = QuatFunction.from_array(rng.standard_normal((int(rng.integers(2, 8)), 4)))
            g = combine_components(
                quaternions_from_orthogonal(random_orthogonal(rng, 4)), f
            )
            assert quat_orbit_equivalent(f, g)

    def test_gram_mismatch(self):
        # (1, 1) has unit cross-Gram, (1, i) has orthogonal values
        assert not quat_orbit_equivalent(QuatFunction((ONE, ONE)), QuatFunction((ONE, I)))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            quat_orbit_equivalent(QuatFunction((ONE,)), QuatFunction((ONE, ONE)))


class TestRetrievabilityCheck:
    def test_single_support_certified(self):
        report = quat_conjugate_pr_check(QuatFunction((ONE, Quaternion())))
        assert report.verdict == "retrievable_certified"

    def test_two_ones_counterexample(self):
        report = quat_conjugate_pr_check(QuatFunction((ONE, ONE)))
        assert report.verdict == "counterexample"
        u, v = report.counterexample
        np.testing.assert_allclose(to_real_field(u).vectors, [[1, 0, 0, 0], [0, 0, 0, 0]])
        np.testing.assert_allclose(to_real_field(v).vectors, [[0, 0, 0, 0], [1, 0, 0, 0]])

    def test_counterexample_validity_random(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            f = QuatFunction.from_array(rng.standard_normal((n, 4)))
            report = quat_conjugate_pr_check(f)
            assert report.verdict == "counterexample"
            u, v = report.counterexample
            F = to_real_field(f).vectors
            U = to_real_field(u).vectors
            V = to_real_field(v).vectors
            scale2 = np.max(np.linalg.norm(F, axis=1)) ** 2
            assert np.max(np.abs(U + V - F)) <= 1e-12 * max(1.0, scale2)
            assert np.max(np.abs(np.sum(U * V, axis=1))) <= 1e-10 * scale2
            cross = U @ V.T
            sym = np.abs(cross + cross.T)
            np.fill_diagonal(sym, 0.0)
            assert np.max(sym) > 1e-8 * scale2

    def test_candidate_classification(self):
        rng = np.random.default_rng(9)
        f = QuatFunction.from_array(rng.standard_normal((5, 4)))
        g_orbit = combine_components(
            quaternions_from_orthogonal(random_orthogonal(rng, 4)), f
        )
        g_scaled = QuatFunction(tuple(val * 2.0 for val in f.values))
        report = quat_conjugate_pr_check(f, candidates=[g_orbit, g_scaled])
        assert report.candidates[0] == type(report.candidates[0])(
            magnitudes_match=True, in_orbit=True
        )
        assert report.candidates[1].magnitudes_match is False
        assert report.candidates[1].in_orbit is None

    def test_equal_norm_but_outside_orbit(self):
        # same pointwise norms, different Gram: not in the orbit
        f = QuatFunction((ONE, ONE))
        g = QuatFunction((ONE, I))
        report = quat_conjugate_pr_check(f, candidates=[g])
        assert report.candidates[0].magnitudes_match is True
        assert report.candidates[0].in_orbit is False

    def test_candidate_domain_mismatch(self):
        with pytest.raises(ValueError):
            quat_conjugate_pr_check(QuatFunction((ONE,)), candidates=[QuatFunction((ONE, ONE))])
