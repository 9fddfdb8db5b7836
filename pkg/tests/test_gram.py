import numpy as np
import pytest

from magnilift.gram import (
    MissingEntryError,
    PartialGram,
    affinely_independent,
    linearly_independent,
    polarize,
)
from magnilift.graphs import MagnitudeObservation, SimpleGraph, VectorField, observe


class TestPolarize:
    def test_orthogonal_pair_gives_zero(self):
        # oracle: (3^2 + 4^2 - 5^2) / 2 = 0
        obs = MagnitudeObservation(dim=2, vertex_norms=[3.0, 4.0], edge_norms={(0, 1): 5.0})
        gram = polarize(obs)
        assert gram.get(0, 1) == 0.0
        assert gram.get(0, 0) == 9.0
        assert gram.get(1, 1) == 16.0

    def test_matches_true_inner_products(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            n = int(rng.integers(2, 9))
            d = int(rng.integers(1, 4))
            graph = SimpleGraph.complete(n)
            vecs = rng.standard_normal((n, d))
            gram = polarize(observe(graph, VectorField(vecs)))
            true = vecs @ vecs.T
            for i in range(n):
                for j in range(i, n):
                    assert gram.get(i, j) == pytest.approx(true[i, j], abs=1e-10)

    def test_missing_entry(self):
        obs = MagnitudeObservation(dim=2, vertex_norms=[1.0, 1.0, 1.0], edge_norms={(0, 1): 1.0})
        gram = polarize(obs)
        assert gram.has(0, 1) and not gram.has(0, 2)
        with pytest.raises(MissingEntryError):
            gram.get(0, 2)
        with pytest.raises(MissingEntryError):
            gram.block([0, 1, 2])

    def test_block_lookup_is_symmetric(self):
        gram = PartialGram(2, {(0, 0): 1.0, (1, 1): 2.0, (1, 0): 0.5})
        block = gram.block([1, 0])
        assert block.tolist() == [[2.0, 0.5], [0.5, 1.0]]


class TestIndependence:
    def test_triangle_is_affinely_independent(self):
        # oracle: rank of difference vectors (1,0),(0,1) is 2
        vecs = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        assert affinely_independent(vecs @ vecs.T)

    def test_collinear_is_not(self):
        # oracle: differences (1,0),(2,0) have rank 1
        vecs = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        assert not affinely_independent(vecs @ vecs.T)

    def test_single_point_is_affinely_independent(self):
        assert affinely_independent([[4.0]])

    def test_repeated_point_is_not(self):
        vecs = np.array([[1.0, 1.0], [1.0, 1.0]])
        assert not affinely_independent(vecs @ vecs.T)

    def test_linear_independence_of_basis_pair(self):
        vecs = np.array([[1.0, 0.0], [0.0, 1.0]])
        assert linearly_independent(vecs @ vecs.T)

    def test_parallel_pair_dependent(self):
        vecs = np.array([[1.0, 0.0], [2.0, 0.0]])
        assert not linearly_independent(vecs @ vecs.T)

    def test_zero_vector_dependent(self):
        assert not linearly_independent([[0.0]])

    def test_matches_rank_oracle_on_random_data(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            k = int(rng.integers(1, 5))
            d = int(rng.integers(1, 5))
            vecs = rng.standard_normal((k, d))
            if rng.random() < 0.4 and k >= 2:
                vecs[-1] = vecs[0] * rng.standard_normal()  # force dependence
            gram = vecs @ vecs.T
            assert linearly_independent(gram) == (np.linalg.matrix_rank(vecs, tol=1e-8) == k)
            diffs = vecs[1:] - vecs[0]
            expected = k == 1 or np.linalg.matrix_rank(diffs, tol=1e-8) == k - 1
            assert affinely_independent(gram) == expected

    def test_invariance_under_rotation(self):
        rng = np.random.default_rng(5)
        vecs = rng.standard_normal((3, 3))
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        assert affinely_independent(vecs @ vecs.T) == affinely_independent(
            (vecs @ q) @ (vecs @ q).T
        )
