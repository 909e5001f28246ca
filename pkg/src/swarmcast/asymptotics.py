"""Closed-form long-run behavior of one broadcast interval.

For a connected graph the swarm settles into an affine motion: every agent
tracks the moving point ``alpha + beta*u*t`` with a fixed personal offset
``gamma_i * u`` along the command direction, so the group aligns on a line
through ``alpha`` in the direction of ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DisconnectedGraphError, InvalidInputError, SizeLimitError
from .graphs import InfluenceModel, VisibilityGraph, connected_components
from .spectral import spectrum

EQUIVALENCE_SIZE_CAP = 10


@dataclass(frozen=True)
class LeaderSet:
    """Subset of agents currently detecting the broadcast."""

    members: frozenset

    @classmethod
    def of(cls, members) -> "LeaderSet":
        return cls(members=frozenset(int(m) for m in members))

    @classmethod
    def empty(cls) -> "LeaderSet":
        return cls(members=frozenset())

    def validate(self, n: int):
        for m in self.members:
            if not (0 <= m < n):
                raise InvalidInputError(f"leader index {m} out of range for n={n}")

    def indicator(self, n: int) -> np.ndarray:
        self.validate(n)
        b = np.zeros(n)
        b[list(self.members)] = 1.0
        return b

    @property
    def count(self) -> int:
        return len(self.members)

    def sorted(self) -> list:
        return sorted(self.members)


def _require_connected(g: VisibilityGraph):
    if len(connected_components(g)) != 1:
        raise DisconnectedGraphError(
            "no single consensus on a disconnected graph; split it first"
        )


def consensus_alpha(g: VisibilityGraph, model: InfluenceModel, x0, y0) -> np.ndarray:
    """Zero-input gathering point.

    Plain average of the initial positions under uniform influence (or on a
    complete graph under either model); degree-weighted average otherwise.
    """
    _require_connected(g)
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    if x0.shape != (g.n,) or y0.shape != (g.n,):
        raise InvalidInputError("x0/y0 must be length-n vectors")
    if model == InfluenceModel.UNIFORM:
        return np.array([x0.mean(), y0.mean()])
    d = g.degree_vector().astype(float)
    return np.array([d @ x0, d @ y0]) / d.sum()


def collective_speed_beta(
    g: VisibilityGraph, model: InfluenceModel, leaders: LeaderSet
) -> float:
    """Fraction of the commanded speed the whole group achieves.

    Leader-count fraction under uniform influence; degree-weighted leader
    fraction under scaled influence. An empty leader set means no broadcast
    is being received, reported as 0.
    """
    _require_connected(g)
    leaders.validate(g.n)
    if leaders.count == 0:
        return 0.0
    if model == InfluenceModel.UNIFORM:
        return leaders.count / g.n
    d = g.degree_vector().astype(float)
    return float(d[leaders.sorted()].sum() / d.sum())


def deviation_gamma(
    g: VisibilityGraph,
    model: InfluenceModel,
    leaders: LeaderSet,
    left_normalization: str = "biorthogonal",
) -> np.ndarray:
    """Per-agent deviation factors from the moving consensus.

    Sums ``(1/lambda_k) V_k W_k^T B`` over the non-zero modes, where B is
    the leader indicator. ``left_normalization`` picks how the left
    eigenvectors are scaled:

    - "biorthogonal" (default): ``W^T V = I``. This is the profile the
      trajectories actually converge to; long-horizon simulation matches it.
    - "unit": both eigenvector families rescaled to unit Euclidean length,
      the convention of eigensolver outputs and of the reference vectors in
      :mod:`swarmcast.goldens`. Each mode's contribution is damped by the
      left/right overlap, so on non-symmetric (scaled, incomplete) systems
      this differs from the asymptote of the dynamics. Identical to
      "biorthogonal" whenever the Laplacian is symmetric.
    """
    _require_connected(g)
    b = leaders.indicator(g.n)
    dec = spectrum(g, model)
    lam, V, Wt = dec.eigenvalues, dec.right_vectors, dec.left_vectors_t
    if left_normalization == "unit":
        scale = np.linalg.norm(Wt, axis=1)
        Wt = Wt / scale[:, None]
    elif left_normalization != "biorthogonal":
        raise InvalidInputError(
            f"left_normalization must be biorthogonal|unit, got {left_normalization!r}"
        )
    gamma = np.zeros(g.n)
    for k in range(1, g.n):
        gamma += (Wt[k] @ b) / lam[k] * V[:, k]
    return gamma


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Coefficients of the asymptotic affine motion for one interval."""

    alpha: np.ndarray  # gathering point (2,)
    beta: float  # achieved fraction of |u|
    gamma: np.ndarray  # per-agent offsets along u, (n,)
    u: np.ndarray  # commanded velocity (2,)
    model: InfluenceModel

    def position_at(self, t: float) -> np.ndarray:
        """Predicted (n, 2) positions at elapsed time t (asymptotic regime)."""
        base = self.alpha[None, :] + self.beta * t * self.u[None, :]
        return base + np.outer(self.gamma, self.u)

    def line(self) -> dict:
        return {
            "anchor": self.alpha.tolist(),
            "direction": self.u.tolist(),
            "offsets": self.gamma.tolist(),
        }

    def to_payload(self) -> dict:
        return {
            "alpha": self.alpha.tolist(),
            "beta": self.beta,
            "gamma": self.gamma.tolist(),
            "u": self.u.tolist(),
            "model": self.model.value,
            "line": self.line(),
        }


def predict(
    g: VisibilityGraph,
    model: InfluenceModel,
    leaders: LeaderSet,
    x0,
    y0,
    u,
) -> AsymptoticPrediction:
    """Bundle gathering point, speed fraction, and deviation profile."""
    u = np.asarray(u, dtype=float).reshape(2)
    if not np.all(np.isfinite(u)):
        raise InvalidInputError("u must be finite")
    return AsymptoticPrediction(
        alpha=consensus_alpha(g, model, x0, y0),
        beta=collective_speed_beta(g, model, leaders),
        gamma=deviation_gamma(g, model, leaders),
        u=u,
        model=model,
    )


# -- role-preserving symmetry -------------------------------------------


def _automorphism_exists(adj, sig, forced: dict) -> bool:
    """Backtracking search for a graph automorphism honoring ``forced``.

    ``sig`` maps each vertex to its (degree, is-leader) signature; images
    must match signatures and preserve adjacency among assigned vertices.
    """
    n = len(adj)
    assign = dict(forced)
    used = set(assign.values())
    order = [v for v in range(n) if v not in assign]

    def consistent(v, img):
        for w, wimg in assign.items():
            if (w in adj[v]) != (wimg in adj[img]):
                return False
        return True

    for v, img in forced.items():
        if sig[v] != sig[img]:
            return False
    for v in forced:
        if not consistent(v, forced[v]):
            return False

    def backtrack(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        for img in range(n):
            if img in used or sig[img] != sig[v]:
                continue
            if consistent(v, img):
                assign[v] = img
                used.add(img)
                if backtrack(k + 1):
                    return True
                del assign[v]
                used.discard(img)
        return False

    return backtrack(0)


def find_equivalent_agents(g: VisibilityGraph, leaders: LeaderSet) -> list:
    """Partition agents into classes closed under role-preserving swaps.

    Two agents land in one class when some graph automorphism that maps
    leaders to leaders and followers to followers exchanges them; classes
    are the transitive closure of that pairwise relation. Exhaustive
    search, refused above n = 10.
    """
    if g.n > EQUIVALENCE_SIZE_CAP:
        raise SizeLimitError(f"equivalence search capped at n={EQUIVALENCE_SIZE_CAP}")
    leaders.validate(g.n)
    adj = g.neighbor_lists()
    deg = g.degree_vector()
    mem = leaders.members
    sig = {v: (int(deg[v]), v in mem) for v in range(g.n)}

    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in combinations(range(g.n), 2):
        if sig[i] != sig[j] or find(i) == find(j):
            continue
        if _automorphism_exists(adj, sig, {i: j, j: i}):
            parent[find(i)] = find(j)

    groups = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(sorted(grp) for grp in groups.values())
