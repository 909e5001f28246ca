import numpy as np
import pytest

from swarmcast.errors import DisconnectedGraphError, InvalidInputError
from swarmcast.goldens import EXAMPLE_A, K23, K23_PLUS
from swarmcast.graphs import InfluenceModel, VisibilityGraph, laplacian
from swarmcast.random_graphs import random_connected_graph
from swarmcast.spectral import (
    algebraic_connectivity,
    butler_bound_check,
    interlacing_check,
    normalized_spectrum,
    scaled_spectrum,
    symmetric_eig,
    uniform_spectrum,
)


def complete_graph(n):
    return VisibilityGraph(
        n=n, edges=frozenset((i, j) for i in range(n) for j in range(i + 1, n))
    )


STAR4 = VisibilityGraph(n=5, edges=frozenset({(0, 1), (0, 2), (0, 3), (0, 4)}))


# -- symmetric eigensolver (oracle: numpy.linalg.eigh) ----------------------


def test_jacobi_matches_lapack_oracle(rng):
    for _ in range(30):
        n = int(rng.integers(1, 13))
        a = rng.normal(size=(n, n))
        m = a + a.T
        dec = symmetric_eig(m)
        oracle = np.sort(np.linalg.eigvalsh(m))
        assert np.abs(dec.eigenvalues - oracle).max() < 1e-9 * (1 + np.abs(m).max())
        # residuals and orthonormality
        resid = np.abs(m @ dec.right_vectors - dec.right_vectors * dec.eigenvalues)
        assert resid.max() < 1e-8 * (1 + np.abs(m).max())
        ortho = dec.right_vectors.T @ dec.right_vectors
        assert np.abs(ortho - np.eye(n)).max() < 1e-10


def test_rejects_nonsymmetric():
    with pytest.raises(InvalidInputError):
        symmetric_eig([[0.0, 1.0], [0.5, 0.0]])


def test_zero_matrix():
    dec = symmetric_eig(np.zeros((4, 4)))
    assert np.all(dec.eigenvalues == 0)
    assert np.allclose(dec.right_vectors, np.eye(4))


def test_k5_spectrum():
    lam = uniform_spectrum(complete_graph(5)).eigenvalues
    assert np.allclose(lam, [0, 5, 5, 5, 5], atol=1e-9)


def test_k23_spectrum():
    lam = uniform_spectrum(K23).eigenvalues
    assert np.allclose(lam, [0, 2, 2, 3, 5], atol=1e-9)


def test_agreement_column_pinned(rng):
    for _ in range(20):
        g = random_connected_graph(rng)
        dec = uniform_spectrum(g)
        assert np.allclose(dec.right_vectors[:, 0], 1 / np.sqrt(g.n), atol=0)


# -- scaled spectrum ---------------------------------------------------------


def test_scaled_complete_eigenvalues():
    for n in (3, 5, 8):
        lam = scaled_spectrum(complete_graph(n)).eigenvalues
        assert np.allclose(lam[1:], n / (n - 1), atol=1e-9)
        assert abs(lam[0]) < 1e-9


def test_scaled_left_null_vector_example_a():
    dec = scaled_spectrum(EXAMPLE_A)
    d = EXAMPLE_A.degree_vector().astype(float)
    expected = np.sqrt(5) * d / d.sum()
    assert np.allclose(dec.left_vectors_t[0], expected, atol=1e-12)
    # it really is a left null vector
    ls = laplacian(EXAMPLE_A, InfluenceModel.SCALED)
    assert np.abs(dec.left_vectors_t[0] @ ls).max() < 1e-12
    # and is normalized against the right null vector
    assert dec.left_vectors_t[0] @ dec.right_vectors[:, 0] == pytest.approx(1.0)


def test_scaled_biorthogonality(rng):
    for _ in range(30):
        g = random_connected_graph(rng)
        dec = scaled_spectrum(g)
        eye = dec.left_vectors_t @ dec.right_vectors
        assert np.abs(eye - np.eye(g.n)).max() < 1e-9
        # right eigenvector residuals for the non-symmetric matrix
        ls = laplacian(g, InfluenceModel.SCALED)
        resid = np.abs(ls @ dec.right_vectors - dec.right_vectors * dec.eigenvalues)
        assert resid.max() < 1e-8 * (1 + np.abs(ls).max())


def test_scaled_matches_normalized_spectrum(rng):
    for _ in range(200):
        g = random_connected_graph(rng)
        a = scaled_spectrum(g).eigenvalues
        b = normalized_spectrum(g).eigenvalues
        assert np.abs(a - b).max() < 1e-9
        assert b.max() <= 2 + 1e-9
        # oracle: eigenvalues of the non-symmetric matrix directly
        ls = laplacian(g, InfluenceModel.SCALED)
        oracle = np.sort(np.linalg.eigvals(ls).real)
        assert np.abs(a - oracle).max() < 1e-8


def test_scaled_rejects_disconnected():
    g = VisibilityGraph(n=4, edges=frozenset({(0, 1), (2, 3)}))
    with pytest.raises(DisconnectedGraphError):
        scaled_spectrum(g)


def test_lambda2_ordering(rng):
    for _ in range(50):
        g = random_connected_graph(rng)
        assert (
            scaled_spectrum(g).eigenvalues[1]
            <= uniform_spectrum(g).eigenvalues[1] + 1e-9
        )


# -- algebraic connectivity ---------------------------------------------------


def test_algebraic_connectivity_values():
    assert algebraic_connectivity(complete_graph(5)) == pytest.approx(5.0, abs=1e-9)
    assert algebraic_connectivity(EXAMPLE_A) <= 5 - 2
    two = VisibilityGraph(n=2, edges=frozenset())
    assert algebraic_connectivity(two) == pytest.approx(0.0, abs=1e-12)


# -- interlacing --------------------------------------------------------------


def test_interlacing_k23_pair():
    rep = interlacing_check(K23_PLUS, (2, 3))
    assert np.allclose(rep.standard_before, [0, 2, 3, 4, 5], atol=1e-9)
    assert np.allclose(rep.standard_after, [0, 2, 2, 3, 5], atol=1e-9)
    assert rep.all_hold()


def test_interlacing_triangle():
    k3 = complete_graph(3)
    rep = interlacing_check(k3, (0, 1))
    assert np.allclose(rep.standard_before, [0, 3, 3], atol=1e-9)
    assert np.allclose(rep.standard_after, [0, 1, 3], atol=1e-9)
    assert rep.all_hold()


def test_interlacing_missing_edge():
    with pytest.raises(InvalidInputError):
        interlacing_check(K23, (2, 3))


def test_trace_identity_random(rng):
    done = 0
    while done < 100:
        g = random_connected_graph(rng, extra=0.5)
        candidates = [
            e
            for e in sorted(g.edges)
            if min(VisibilityGraph(n=g.n, edges=g.edges - {e}).degree_vector()) >= 1
        ]
        if not candidates:
            continue
        e = candidates[int(rng.integers(0, len(candidates)))]
        rep = interlacing_check(g, e)
        assert rep.trace_identity
        assert rep.standard_interlaces
        assert rep.normalized_two_sided
        done += 1


# -- degree sandwich ----------------------------------------------------------


def test_butler_cases(rng):
    assert butler_bound_check(complete_graph(5))
    assert butler_bound_check(EXAMPLE_A)
    assert butler_bound_check(STAR4)
    for _ in range(30):
        assert butler_bound_check(random_connected_graph(rng))
