"""R-disc visibility graphs and their matrix representations.

Agents see each other when their planar distance is at most the sensing
radius R (boundary inclusive). All indices are 0-based. Graphs are value
types: immutable, hashable, safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateGraphError, InvalidInputError


class InfluenceModel(str, Enum):
    """Neighbor weighting convention for the gathering rule.

    UNIFORM: every neighbor contributes weight 1 (symmetric Laplacian).
    SCALED: each neighbor of agent i contributes weight 1/|N_i|
    (row-normalized Laplacian, generally non-symmetric).
    """

    UNIFORM = "uniform"
    SCALED = "scaled"

    @classmethod
    def parse(cls, text: str) -> "InfluenceModel":
        t = str(text).strip().lower()
        if t in ("u", "uniform"):
            return cls.UNIFORM
        if t in ("s", "scaled"):
            return cls.SCALED
        raise InvalidInputError(f"unknown influence model: {text!r}")


def _canonical_edges(edges) -> frozenset:
    out = set()
    for e in edges:
        i, j = int(e[0]), int(e[1])
        if i == j:
            raise InvalidInputError(f"self-loop ({i},{j}) not allowed")
        out.add((min(i, j), max(i, j)))
    return frozenset(out)


@dataclass(frozen=True)
class VisibilityGraph:
    """Undirected proximity graph over ``n`` agents.

    ``edges`` holds unordered index pairs stored as (i, j) with i < j;
    ``radius`` records the sensing range the graph was built with.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)
    radius: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError("graph needs at least one vertex")
        object.__setattr__(self, "edges", _canonical_edges(self.edges))
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise InvalidInputError(f"edge ({i},{j}) out of range for n={self.n}")

    # -- basic facts -----------------------------------------------------

    def degree_vector(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            d[i] += 1
            d[j] += 1
        return d

    def neighbor_lists(self) -> list:
        adj = [set() for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = 1.0
            a[j, i] = 1.0
        return a

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    # -- wire format -----------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "edges": sorted([list(e) for e in self.edges]),
                "radius": self.radius,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "VisibilityGraph":
        doc = json.loads(text)
        return cls(
            n=int(doc["n"]),
            edges=frozenset(tuple(e) for e in doc["edges"]),
            radius=float(doc.get("radius", 1.0)),
        )


def build_visibility_graph(positions, radius: float) -> VisibilityGraph:
    """Graph with an edge wherever two agents are within ``radius`` of each other.

    The boundary counts: a pair at distance exactly R is connected.
    """
    pos = np.asarray(positions, dtype=float)
    if pos.ndim != 2 or pos.shape[1] != 2:
        raise InvalidInputError("positions must be an (n, 2) array")
    if not np.all(np.isfinite(pos)):
        raise InvalidInputError("positions must be finite")
    if not (radius > 0):
        raise InvalidInputError("radius must be positive")
    n = pos.shape[0]
    edges = set()
    r2 = float(radius) * float(radius)
    for i in range(n - 1):
        d2 = np.sum((pos[i + 1 :] - pos[i]) ** 2, axis=1)
        for k in np.nonzero(d2 <= r2)[0]:
            edges.add((i, i + 1 + int(k)))
    return VisibilityGraph(n=n, edges=frozenset(edges), radius=float(radius))


def laplacian(g: VisibilityGraph, model: InfluenceModel) -> np.ndarray:
    """Graph Laplacian under the given influence model.

    Uniform: degree matrix minus adjacency. Scaled: the uniform Laplacian
    with each row divided by that vertex's degree; requires every vertex
    to have at least one neighbor.
    """
    a = g.adjacency_matrix()
    d = g.degree_vector().astype(float)
    lap = np.diag(d) - a
    if model == InfluenceModel.UNIFORM:
        return lap
    if np.any(d < 1):
        raise DegenerateGraphError(
            "scaled influence needs every vertex to have a neighbor"
        )
    return lap / d[:, None]


def normalized_laplacian(g: VisibilityGraph) -> np.ndarray:
    """Symmetric degree-normalized Laplacian: I on the diagonal, -1/sqrt(d_i d_j) on edges."""
    d = g.degree_vector().astype(float)
    if np.any(d < 1):
        raise DegenerateGraphError("normalized Laplacian needs no isolated vertices")
    inv_sqrt = 1.0 / np.sqrt(d)
    lap = laplacian(g, InfluenceModel.UNIFORM)
    return inv_sqrt[:, None] * lap * inv_sqrt[None, :]


def connected_components(g: VisibilityGraph) -> list:
    """Partition of the vertex set into maximal connected pieces, each sorted."""
    adj = g.neighbor_lists()
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: VisibilityGraph) -> bool:
    return len(connected_components(g)) == 1


def degree_vector(g: VisibilityGraph) -> np.ndarray:
    return g.degree_vector()


def is_complete(g: VisibilityGraph) -> bool:
    return g.is_complete()


def induced_subgraph(g: VisibilityGraph, vertices) -> tuple:
    """Subgraph on ``vertices`` relabeled 0..m-1; returns (subgraph, index array)."""
    idx = np.asarray(sorted(int(v) for v in vertices), dtype=np.int64)
    where = {int(v): k for k, v in enumerate(idx)}
    edges = frozenset(
        (where[i], where[j]) for i, j in g.edges if i in where and j in where
    )
    return VisibilityGraph(n=len(idx), edges=edges, radius=g.radius), idx
