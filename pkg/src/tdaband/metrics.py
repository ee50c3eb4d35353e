"""Bottleneck distance between diagrams, sup distance between grid fields.

The bottleneck distance is computed exactly: the optimum is always one of
finitely many candidate costs (a point-to-point L-infinity distance or a
point-to-diagonal gap), so a binary search over the sorted candidates
with a bipartite-matching feasibility test at each probe finds it.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ._grid import GridField
from .errors import ConfigError
from .persistence import PersistenceDiagram

_INF = math.inf


class _HopcroftKarp:
    """Maximum bipartite matching on an adjacency-list graph."""

    def __init__(self, n_left: int, n_right: int) -> None:
        self.n_left = n_left
        self.n_right = n_right
        self.adj: list[list[int]] = [[] for _ in range(n_left)]

    def add_edge(self, left: int, right: int) -> None:
        self.adj[left].append(right)

    def max_matching(self) -> int:
        match_l = [-1] * self.n_left
        match_r = [-1] * self.n_right
        dist = [0] * self.n_left
        total = 0

        def bfs() -> bool:
            queue: deque[int] = deque()
            found = False
            for u in range(self.n_left):
                if match_l[u] < 0:
                    dist[u] = 0
                    queue.append(u)
                else:
                    dist[u] = -1
            while queue:
                u = queue.popleft()
                for v in self.adj[u]:
                    w = match_r[v]
                    if w < 0:
                        found = True
                    elif dist[w] < 0:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            return found

        def dfs(u: int) -> bool:
            for v in self.adj[u]:
                w = match_r[v]
                if w < 0 or (dist[w] == dist[u] + 1 and dfs(w)):
                    match_l[u] = v
                    match_r[v] = u
                    return True
            dist[u] = -1
            return False

        while bfs():
            for u in range(self.n_left):
                if match_l[u] < 0 and dfs(u):
                    total += 1
        return total


@dataclass
class MatchingProblem:
    """Diagonal-augmented matching feasibility at a fixed cost cap.

    Left side: the points of A plus one diagonal slot per point of B.
    Right side: the points of B plus one diagonal slot per point of A.
    A perfect matching under the cap exists exactly when the bottleneck
    distance is at most the cap.
    """

    a_points: np.ndarray
    b_points: np.ndarray
    cap: float

    def feasible(self) -> bool:
        a = self.a_points
        b = self.b_points
        na, nb = a.shape[0], b.shape[0]
        # Costs and candidates come from identical arithmetic, so exact
        # comparison keeps the binary search exact.
        cap = self.cap
        hk = _HopcroftKarp(na + nb, nb + na)
        if na and nb:
            cost = np.maximum(
                np.abs(a[:, None, 0] - b[None, :, 0]),
                np.abs(a[:, None, 1] - b[None, :, 1]),
            )
            for i, j in zip(*np.nonzero(cost <= cap)):
                hk.add_edge(int(i), int(j))
        a_gap = np.abs(a[:, 1] - a[:, 0]) / 2.0 if na else np.zeros(0)
        b_gap = np.abs(b[:, 1] - b[:, 0]) / 2.0 if nb else np.zeros(0)
        for i in range(na):
            if a_gap[i] <= cap:
                hk.add_edge(i, nb + i)
        for j in range(nb):
            if b_gap[j] <= cap:
                hk.add_edge(na + j, j)
            for i in range(na):
                hk.add_edge(na + j, nb + i)
        return hk.max_matching() == na + nb


def _split_parts(
    diagram: PersistenceDiagram, p: int
) -> tuple[np.ndarray, np.ndarray]:
    """Finite points as an (m, 2) array and sorted essential births."""
    finite = []
    essential = []
    for pair in diagram.in_dim(p):
        if pair.essential:
            essential.append(pair.birth)
        else:
            finite.append((pair.birth, pair.death))
    fin = np.array(finite, dtype=np.float64).reshape(-1, 2)
    return fin, np.sort(np.array(essential, dtype=np.float64))


def _finite_bottleneck(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape[0] == 0 and b.shape[0] == 0:
        return 0.0
    candidates = [0.0]
    candidates.extend(np.abs(a[:, 1] - a[:, 0]) / 2.0)
    candidates.extend(np.abs(b[:, 1] - b[:, 0]) / 2.0)
    if a.shape[0] and b.shape[0]:
        cost = np.maximum(
            np.abs(a[:, None, 0] - b[None, :, 0]),
            np.abs(a[:, None, 1] - b[None, :, 1]),
        )
        candidates.extend(cost.ravel())
    values = np.unique(np.array(candidates, dtype=np.float64))
    lo, hi = 0, len(values) - 1
    # values[hi] is always feasible: project everything to the diagonal
    # or match everything directly, whichever the candidate set allows.
    while lo < hi:
        mid = (lo + hi) // 2
        if MatchingProblem(a, b, float(values[mid])).feasible():
            hi = mid
        else:
            lo = mid + 1
    return float(values[lo])


def bottleneck(a: PersistenceDiagram, b: PersistenceDiagram, p: int) -> float:
    """Exact bottleneck distance between the dimension-p parts of two diagrams.

    Essential classes are matched among themselves on birth values alone;
    a mismatch in essential counts makes the distance infinite.
    """
    fin_a, ess_a = _split_parts(a, p)
    fin_b, ess_b = _split_parts(b, p)
    if ess_a.shape[0] != ess_b.shape[0]:
        return _INF
    ess_part = 0.0
    if ess_a.shape[0]:
        # The sorted coupling minimizes the maximum |birth - birth| cost.
        ess_part = float(np.abs(ess_a - ess_b).max())
    return max(ess_part, _finite_bottleneck(fin_a, fin_b))


def sup_distance(f: GridField, g: GridField) -> float:
    """Maximum absolute difference between two fields on the same grid."""
    if not f.same_geometry(g):
        raise ConfigError("sup_distance needs identical grid geometries")
    return float(np.abs(f.values - g.values).max())
