"""Eigenstructure of the swarm Laplacians.

The symmetric cases (uniform Laplacian, degree-normalized Laplacian) are
decomposed with a cyclic Jacobi sweep: slower than LAPACK but simple,
deterministic, and robust at the matrix sizes that occur here. The
non-symmetric row-normalized Laplacian is never eigendecomposed directly;
its full left/right eigensystem follows from the similarity
``D^{1/2} L_scaled D^{-1/2} = normalized Laplacian``, which also guarantees
a real spectrum and left/right biorthogonality without a matrix inversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DisconnectedGraphError, InvalidInputError
from .graphs import (
    InfluenceModel,
    VisibilityGraph,
    connected_components,
    laplacian,
    normalized_laplacian,
)

JACOBI_REL_TOL = 1e-14


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigensystem with eigenvalues ascending.

    ``right_vectors`` holds right eigenvectors as columns; the rows of
    ``left_vectors_t`` are the matching left eigenvectors, scaled so that
    ``left_vectors_t @ right_vectors == I``. For a symmetric input the two
    coincide (``left_vectors_t == right_vectors.T``). Arrays are shared,
    not copied: treat them as read-only.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors_t: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def to_payload(self) -> dict:
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "V": self.right_vectors.tolist(),
            "Wt": self.left_vectors_t.tolist(),
        }


def _sign_fix(V: np.ndarray) -> np.ndarray:
    """Flip each column so its first non-negligible entry is positive."""
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        big = np.nonzero(np.abs(col) > 1e-12 * max(1.0, np.abs(col).max()))[0]
        if big.size and col[big[0]] < 0:
            V[:, k] = -col
    return V


def symmetric_eig(M) -> SpectralDecomposition:
    """Jacobi eigendecomposition of a symmetric matrix, ascending order."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError("matrix must be square")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("matrix must be finite")
    if np.abs(M - M.T).max() >= 1e-10:
        raise InvalidInputError("matrix is not symmetric")
    w, V = _kernels.jacobi_eigh(np.ascontiguousarray(M), JACOBI_REL_TOL)
    order = np.argsort(w, kind="stable")
    V = _sign_fix(V[:, order])
    return SpectralDecomposition(
        eigenvalues=w[order], right_vectors=V, left_vectors_t=V.T.copy()
    )


def _snap_agreement_column(dec: SpectralDecomposition, target: np.ndarray):
    """Rotate the null-space basis so column 1 equals ``target`` exactly.

    ``target`` must be a unit vector inside the numerical null space. With a
    one-dimensional null space this reduces to replacing a +-target column.
    """
    w = dec.eigenvalues
    V = dec.right_vectors.copy()
    scale = max(1.0, np.abs(w).max())
    null = np.nonzero(np.abs(w) <= 1e-9 * scale)[0]
    if null.size == 0:
        return dec
    block = V[:, null]
    # Orthonormal basis of the null space that starts with `target`.
    rest = block - np.outer(target, target @ block)
    basis = [target]
    for col in rest.T:
        for b in basis:
            col = col - (b @ col) * b
        nrm = np.linalg.norm(col)
        if nrm > 1e-8:
            basis.append(col / nrm)
        if len(basis) == null.size:
            break
    V[:, null] = np.column_stack(basis[: null.size])
    return SpectralDecomposition(
        eigenvalues=w, right_vectors=V, left_vectors_t=V.T.copy()
    )


@lru_cache(maxsize=512)
def uniform_spectrum(g: VisibilityGraph) -> SpectralDecomposition:
    """Spectrum of the uniform Laplacian with the agreement column pinned to 1/sqrt(n)."""
    dec = symmetric_eig(laplacian(g, InfluenceModel.UNIFORM))
    ones = np.full(g.n, 1.0 / np.sqrt(g.n))
    return _snap_agreement_column(dec, ones)


@lru_cache(maxsize=512)
def normalized_spectrum(g: VisibilityGraph) -> SpectralDecomposition:
    """Spectrum of the degree-normalized Laplacian; null column pinned to D^{1/2}1 normalized."""
    dec = symmetric_eig(normalized_laplacian(g))
    d = g.degree_vector().astype(float)
    target = np.sqrt(d) / np.sqrt(d.sum())
    return _snap_agreement_column(dec, target)


@lru_cache(maxsize=512)
def scaled_spectrum(g: VisibilityGraph) -> SpectralDecomposition:
    """Full left/right eigensystem of the row-normalized Laplacian.

    Built from the normalized-Laplacian eigenvectors G as V = D^{-1/2} G and
    W^T = G^T D^{1/2}, then rescaled column-by-column so every right
    eigenvector has unit length while ``W^T V`` stays the identity. Column 1
    comes out as the unit constant vector and row 1 of W^T as
    sqrt(n) d^T / sum(d).
    """
    if len(connected_components(g)) != 1:
        raise DisconnectedGraphError(
            "scaled spectrum needs a connected graph (zero eigenvalue would repeat)"
        )
    dec = normalized_spectrum(g)
    d = g.degree_vector().astype(float)
    inv_sqrt = 1.0 / np.sqrt(d)
    V = inv_sqrt[:, None] * dec.right_vectors
    Wt = dec.right_vectors.T * np.sqrt(d)[None, :]
    norms = np.linalg.norm(V, axis=0)
    V = V / norms[None, :]
    Wt = Wt * norms[:, None]
    # Exact constants for the agreement pair.
    n = g.n
    V[:, 0] = 1.0 / np.sqrt(n)
    Wt[0, :] = np.sqrt(n) * d / d.sum()
    return SpectralDecomposition(
        eigenvalues=dec.eigenvalues, right_vectors=V, left_vectors_t=Wt
    )


def spectrum(g: VisibilityGraph, model: InfluenceModel) -> SpectralDecomposition:
    if model == InfluenceModel.UNIFORM:
        return uniform_spectrum(g)
    return scaled_spectrum(g)


def algebraic_connectivity(g: VisibilityGraph) -> float:
    """Second-smallest eigenvalue of the uniform Laplacian; zero iff disconnected."""
    if g.n < 2:
        raise InvalidInputError("algebraic connectivity needs n >= 2")
    return float(uniform_spectrum(g).eigenvalues[1])


@dataclass(frozen=True)
class InterlacingReport:
    """Eigenvalue lists of a graph and the same graph minus one edge.

    ``standard_interlaces``: deletion eigenvalues sit between consecutive
    originals. ``trace_identity``: eigenvalue sums differ by exactly 2.
    ``normalized_two_sided``: each normalized-Laplacian eigenvalue of the
    smaller graph lies within one position of the original list, padded
    with 0 below and 2 above.
    """

    edge: tuple
    standard_before: np.ndarray
    standard_after: np.ndarray
    normalized_before: np.ndarray
    normalized_after: np.ndarray
    standard_interlaces: bool
    trace_identity: bool
    normalized_two_sided: bool

    def all_hold(self) -> bool:
        return (
            self.standard_interlaces
            and self.trace_identity
            and self.normalized_two_sided
        )


def interlacing_check(g: VisibilityGraph, edge, tol: float = 1e-9) -> InterlacingReport:
    """Compare spectra of ``g`` and ``g`` minus ``edge``."""
    e = (min(edge), max(edge))
    if e not in g.edges:
        raise InvalidInputError(f"edge {e} not present")
    g1 = VisibilityGraph(n=g.n, edges=g.edges - {e}, radius=g.radius)
    if np.any(g1.degree_vector() < 1):
        raise InvalidInputError("deleting that edge would isolate a vertex")

    lam = uniform_spectrum(g).eigenvalues
    theta = uniform_spectrum(g1).eigenvalues
    n = g.n
    standard = True
    for i in range(1, n):  # lam[i] >= theta[i] >= lam[i-1]
        if theta[i] > lam[i] + tol or theta[i] < lam[i - 1] - tol:
            standard = False
    trace = abs(lam.sum() - (2.0 + theta.sum())) < tol

    gam = normalized_spectrum(g).eigenvalues
    phi = normalized_spectrum(g1).eigenvalues
    lo = np.concatenate(([0.0], gam[:-1]))
    hi = np.concatenate((gam[1:], [2.0]))
    two_sided = bool(np.all(phi >= lo - tol) and np.all(phi <= hi + tol))

    return InterlacingReport(
        edge=e,
        standard_before=lam,
        standard_after=theta,
        normalized_before=gam,
        normalized_after=phi,
        standard_interlaces=standard,
        trace_identity=bool(trace),
        normalized_two_sided=two_sided,
    )


def butler_bound_check(g: VisibilityGraph, tol: float = 1e-9) -> bool:
    """Degree sandwich between uniform and normalized eigenvalues.

    Checks lam_uniform/d_max <= lam_normalized <= lam_uniform/d_min for
    every index, with ``tol`` slack.
    """
    if len(connected_components(g)) != 1:
        raise InvalidInputError("bound check expects a connected graph")
    d = g.degree_vector().astype(float)
    lam_u = uniform_spectrum(g).eigenvalues
    lam_g = normalized_spectrum(g).eigenvalues
    lo = lam_u / d.max()
    hi = lam_u / d.min()
    return bool(np.all(lam_g >= lo - tol) and np.all(lam_g <= hi + tol))
