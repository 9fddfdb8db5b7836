import numpy as np
import pytest

from magnilift.graphs import (
    MagnitudeObservation,
    SimpleGraph,
    VectorField,
    observe,
    orbit_equivalent,
)


def random_orthogonal(rng, d):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


class TestSimpleGraph:
    def test_edges_are_canonicalized(self):
        g = SimpleGraph(4, [(2, 0), (3, 1)])
        assert g.edges == ((0, 2), (1, 3))

    def test_loops_rejected(self):
        with pytest.raises(ValueError):
            SimpleGraph(3, [(1, 1)])

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            SimpleGraph(3, [(0, 1), (1, 0)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            SimpleGraph(2, [(0, 2)])

    def test_complete_and_cycle_builders(self):
        assert SimpleGraph.complete(3).edges == ((0, 1), (0, 2), (1, 2))
        assert SimpleGraph.cycle(4).edges == ((0, 1), (0, 3), (1, 2), (2, 3))
        assert SimpleGraph.complete(4).is_complete
        assert not SimpleGraph.cycle(4).is_complete

    def test_neighbors(self):
        g = SimpleGraph.cycle(4)
        assert g.neighbors(0) == (1, 3)


class TestObserve:
    def test_right_triangle_legs(self):
        # oracle: ||(3,0)|| = 3, ||(0,4)|| = 4, ||(3,0)-(0,4)|| = 5
        g = SimpleGraph(2, [(0, 1)])
        f = VectorField([[3.0, 0.0], [0.0, 4.0]])
        obs = observe(g, f)
        assert obs.vertex_norms.tolist() == [3.0, 4.0]
        assert obs.edge_norms == {(0, 1): 5.0}
        assert obs.dim == 2

    def test_vertex_count_mismatch(self):
        with pytest.raises(ValueError):
            observe(SimpleGraph(3), VectorField(np.zeros((2, 2))))

    def test_negative_norms_rejected(self):
        with pytest.raises(ValueError):
            MagnitudeObservation(dim=2, vertex_norms=[1.0, -0.5], edge_norms={})

    def test_triangle_violations_flagged(self):
        # edge norm 10 cannot join vectors of norms 1 and 2 (bound is 3)
        obs = MagnitudeObservation(dim=2, vertex_norms=[1.0, 2.0], edge_norms={(0, 1): 10.0})
        bad = obs.triangle_violations()
        assert len(bad) == 1 and bad[0][:2] == (0, 1)
        assert bad[0][2] == pytest.approx(7.0)

    def test_feasible_edge_not_flagged(self):
        obs = MagnitudeObservation(dim=2, vertex_norms=[3.0, 4.0], edge_norms={(0, 1): 5.0})
        assert obs.triangle_violations() == ()


class TestOrbitEquivalent:
    def test_identity(self):
        f = VectorField([[1.0, 2.0], [0.5, -1.0]])
        U = orbit_equivalent(f, f)
        assert U is not None
        assert np.allclose(U @ U.T, np.eye(2), atol=1e-12)
        assert np.allclose(f.vectors @ U.T, f.vectors, atol=1e-9)

    def test_negation(self):
        f = VectorField([[1.0, 0.0], [0.0, 2.0]])
        g = VectorField(-f.vectors)
        U = orbit_equivalent(f, g)
        assert U is not None
        assert np.allclose(f.vectors @ U.T, g.vectors, atol=1e-9)

    def test_coordinate_swap(self):
        # oracle: swapping both coordinates is the permutation matrix [[0,1],[1,0]]
        f = VectorField([[1.0, 0.0], [0.0, 1.0]])
        g = VectorField([[0.0, 1.0], [1.0, 0.0]])
        U = orbit_equivalent(f, g)
        assert U is not None
        assert np.allclose(U, [[0.0, 1.0], [1.0, 0.0]], atol=1e-9)

    def test_gram_mismatch_returns_none(self):
        f = VectorField([[1.0, 0.0], [0.0, 1.0]])
        g = VectorField([[1.0, 0.0], [1.0, 0.0]])
        assert orbit_equivalent(f, g) is None

    def test_shape_mismatch_raises(self):
        with pytest.raises(ValueError):
            orbit_equivalent(VectorField(np.zeros((2, 2))), VectorField(np.zeros((3, 2))))

    def test_random_orbits_recovered(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(1, 12))
            d = int(rng.integers(1, 5))
            A = rng.standard_normal((n, d))
            U_true = random_orthogonal(rng, d)
            f = VectorField(A)
            g = VectorField(A @ U_true.T)
            U = orbit_equivalent(f, g)
            assert U is not None
            assert np.max(np.linalg.norm(g.vectors - f.vectors @ U.T, axis=1)) <= 1e-9
            assert np.allclose(U.T @ U, np.eye(d), atol=1e-10)

    def test_rank_deficient_fields(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            d = int(rng.integers(2, 5))
            r = int(rng.integers(1, d))
            base = rng.standard_normal((8, r)) @ rng.standard_normal((r, d))
            U_true = random_orthogonal(rng, d)
            U = orbit_equivalent(VectorField(base), VectorField(base @ U_true.T))
            assert U is not None
            assert np.max(np.linalg.norm(base @ U_true.T - base @ U.T, axis=1)) <= 1e-8

    def test_verdict_symmetric(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            A = rng.standard_normal((5, 3))
            B = rng.standard_normal((5, 3))
            assert (orbit_equivalent(VectorField(A), VectorField(B)) is None) == (
                orbit_equivalent(VectorField(B), VectorField(A)) is None
            )

    def test_zero_field(self):
        f = VectorField(np.zeros((3, 2)))
        U = orbit_equivalent(f, f)
        assert U is not None and np.allclose(U @ U.T, np.eye(2))

    def test_observation_invariant_under_orbit(self):
        rng = np.random.default_rng(19)
        g = SimpleGraph.complete(6)
        A = rng.standard_normal((6, 3))
        U = random_orthogonal(rng, 3)
        obs1 = observe(g, VectorField(A))
        obs2 = observe(g, VectorField(A @ U.T))
        assert np.allclose(obs1.vertex_norms, obs2.vertex_norms, atol=1e-10)
        for e in g.edges:
            assert obs1.edge_norms[e] == pytest.approx(obs2.edge_norms[e], abs=1e-10)
