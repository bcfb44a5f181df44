"""Bipartite Tanner graphs and the alist interchange format.

A Tanner graph has variable nodes v_1..v_n on one side and check nodes
c_1..c_m on the other; an edge (v, c) means column v of the parity-check
matrix has a 1 in row c.  All indices on public interfaces are 1-based,
matching the alist convention.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable
from pathlib import Path

import numpy as np

__all__ = [
    "TannerGraph",
    "AlistParseError",
    "girth",
    "avoids_short_cycles",
    "bfs_distances",
    "read_alist",
    "write_alist",
    "parse_alist",
    "format_alist",
]


class AlistParseError(ValueError):
    """Raised when alist text is malformed; message carries the line number."""


class TannerGraph:
    """Mutable bipartite graph over variable nodes 1..n and check nodes 1..m.

    Parameters
    ----------
    n, m : int
        Number of variable nodes and check nodes; both must be positive.
    target_vn_degree : int, optional
        Intended uniform variable-node degree for constructed codes.
        Informational only; hand-built graphs may leave it unset.
    """

    def __init__(self, n: int, m: int, target_vn_degree: int | None = None):
        if n < 1 or m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
        self.n = n
        self.m = m
        self.target_vn_degree = target_vn_degree
        # index 0 unused so node ids double as list indices
        self._vn_adj: list[set[int]] = [set() for _ in range(n + 1)]
        self._cn_adj: list[set[int]] = [set() for _ in range(m + 1)]
        self._num_edges = 0

    # -- mutation ----------------------------------------------------------

    def add_edge(self, vn: int, cn: int) -> None:
        """Connect variable node `vn` to check node `cn` (no parallel edges)."""
        self._check_vn(vn)
        self._check_cn(cn)
        if cn in self._vn_adj[vn]:
            raise ValueError(f"edge (v{vn}, c{cn}) already present")
        self._vn_adj[vn].add(cn)
        self._cn_adj[cn].add(vn)
        self._num_edges += 1

    # -- queries -----------------------------------------------------------

    def has_edge(self, vn: int, cn: int) -> bool:
        self._check_vn(vn)
        self._check_cn(cn)
        return cn in self._vn_adj[vn]

    def vn_neighbors(self, vn: int) -> tuple[int, ...]:
        """Check nodes adjacent to `vn`, ascending."""
        self._check_vn(vn)
        return tuple(sorted(self._vn_adj[vn]))

    def cn_neighbors(self, cn: int) -> tuple[int, ...]:
        """Variable nodes adjacent to `cn`, ascending."""
        self._check_cn(cn)
        return tuple(sorted(self._cn_adj[cn]))

    def vn_degree(self, vn: int) -> int:
        self._check_vn(vn)
        return len(self._vn_adj[vn])

    def cn_degree(self, cn: int) -> int:
        self._check_cn(cn)
        return len(self._cn_adj[cn])

    @property
    def num_edges(self) -> int:
        return self._num_edges

    def edges(self) -> set[tuple[int, int]]:
        """All edges as (vn, cn) pairs."""
        return {(v, c) for v in range(1, self.n + 1) for c in self._vn_adj[v]}

    def copy(self) -> TannerGraph:
        dup = TannerGraph(self.n, self.m, self.target_vn_degree)
        dup._vn_adj = [set(s) for s in self._vn_adj]
        dup._cn_adj = [set(s) for s in self._cn_adj]
        dup._num_edges = self._num_edges
        return dup

    def to_biadjacency(self) -> np.ndarray:
        """Dense m-by-n parity-check matrix with entries in {0, 1}."""
        h = np.zeros((self.m, self.n), dtype=np.uint8)
        for v in range(1, self.n + 1):
            for c in self._vn_adj[v]:
                h[c - 1, v - 1] = 1
        return h

    @classmethod
    def from_biadjacency(cls, h: np.ndarray) -> TannerGraph:
        h = np.asarray(h)
        if h.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {h.shape}")
        m, n = h.shape
        graph = cls(n, m)
        for c, v in zip(*np.nonzero(h)):
            graph.add_edge(int(v) + 1, int(c) + 1)
        return graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TannerGraph):
            return NotImplemented
        return (self.n, self.m) == (other.n, other.m) and self._vn_adj == other._vn_adj

    def __repr__(self) -> str:
        return f"TannerGraph(n={self.n}, m={self.m}, edges={self._num_edges})"

    # -- helpers -----------------------------------------------------------

    def _check_vn(self, vn: int) -> None:
        if not 1 <= vn <= self.n:
            raise ValueError(f"variable node {vn} out of range 1..{self.n}")

    def _check_cn(self, cn: int) -> None:
        if not 1 <= cn <= self.m:
            raise ValueError(f"check node {cn} out of range 1..{self.m}")


def bfs_distances(
    graph: TannerGraph, vn: int, removed: Iterable[int] = ()
) -> tuple[list[int], list[int]]:
    """Breadth-first hop distances from variable node `vn` to every node.

    Returns (dist_vn, dist_cn), 1-indexed lists with -1 marking nodes that
    are unreachable.  Variable nodes in `removed` are skipped entirely
    (useful for analyzing a purged graph); `vn` itself must not be removed.
    """
    gone = set(removed)
    if vn in gone:
        raise ValueError(f"start node v{vn} is in the removed set")
    dist_vn = [-1] * (graph.n + 1)
    dist_cn = [-1] * (graph.m + 1)
    dist_vn[vn] = 0
    queue: deque[tuple[bool, int]] = deque([(True, vn)])
    while queue:
        is_vn, node = queue.popleft()
        if is_vn:
            d = dist_vn[node]
            for c in graph._vn_adj[node]:
                if dist_cn[c] < 0:
                    dist_cn[c] = d + 1
                    queue.append((False, c))
        else:
            d = dist_cn[node]
            for v in graph._cn_adj[node]:
                if dist_vn[v] < 0 and v not in gone:
                    dist_vn[v] = d + 1
                    queue.append((True, v))
    return dist_vn, dist_cn


def girth(graph: TannerGraph, removed: Iterable[int] = ()) -> float:
    """Length of the shortest cycle, or math.inf if the graph is a forest.

    Bipartite girth is always even.  Variable nodes in `removed` are
    ignored along with their edges.
    """
    gone = set(removed)
    n = graph.n
    # combined ids: variable node v -> v, check node c -> n + c
    size = n + graph.m + 1
    adj: list[tuple[int, ...]] = [()] * size
    for v in range(1, n + 1):
        if v not in gone:
            adj[v] = tuple(n + c for c in graph._vn_adj[v])
    for c in range(1, graph.m + 1):
        adj[n + c] = tuple(v for v in graph._cn_adj[c] if v not in gone)

    best = math.inf
    dist = [-1] * size
    parent = [0] * size
    for root in range(1, n + 1):
        if root in gone:
            continue
        # BFS from each variable node; a non-tree edge seen from node x to a
        # visited y (not x's parent) closes a cycle of length <= d(x)+d(y)+1,
        # and the minimum over all roots is the exact girth because every
        # cycle contains a variable node.
        dist[root] = 0
        parent[root] = -1
        queue = deque([root])
        touched = [root]
        while queue:
            x = queue.popleft()
            dx = dist[x]
            if 2 * dx >= best - 1:
                break  # deeper layers can only close cycles >= best
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dx + 1
                    parent[y] = x
                    touched.append(y)
                    queue.append(y)
                elif y != parent[x]:
                    cand = dx + dist[y] + 1
                    if cand < best:
                        best = cand
        for node in touched:
            dist[node] = -1
    return best


def avoids_short_cycles(graph: TannerGraph, g: int, removed: Iterable[int] = ()) -> bool:
    """True when the graph (minus `removed` variable nodes) has girth >= g.

    `g` must be an even integer >= 4; odd cycle lengths cannot occur in a
    bipartite graph, so asking about them is a caller bug.
    """
    if g < 4 or g % 2:
        raise ValueError(f"cycle length threshold must be even and >= 4, got {g}")
    return girth(graph, removed) >= g


# -- alist serialization ----------------------------------------------------
#
# Canonical layout (all 1-based, single-space separated, trailing newline):
#   line 1: n m
#   line 2: max_vn_degree max_cn_degree
#   line 3: the n variable-node degrees
#   line 4: the m check-node degrees
#   next n lines: neighbors of each variable node, ascending, zero-padded
#   next m lines: neighbors of each check node, ascending, zero-padded


def format_alist(graph: TannerGraph) -> str:
    """Render the graph in canonical alist form."""
    vdeg = [graph.vn_degree(v) for v in range(1, graph.n + 1)]
    cdeg = [graph.cn_degree(c) for c in range(1, graph.m + 1)]
    dv = max(vdeg, default=0)
    dc = max(cdeg, default=0)
    lines = [
        f"{graph.n} {graph.m}",
        f"{dv} {dc}",
        " ".join(map(str, vdeg)),
        " ".join(map(str, cdeg)),
    ]
    for v in range(1, graph.n + 1):
        row = list(graph.vn_neighbors(v))
        lines.append(" ".join(map(str, row + [0] * (dv - len(row)))))
    for c in range(1, graph.m + 1):
        row = list(graph.cn_neighbors(c))
        lines.append(" ".join(map(str, row + [0] * (dc - len(row)))))
    return "\n".join(lines) + "\n"


def _ints(line: str, lineno: int) -> list[int]:
    out = []
    for tok in line.split():
        try:
            out.append(int(tok))
        except ValueError:
            raise AlistParseError(f"line {lineno}: {tok!r} is not an integer") from None
    return out


def parse_alist(text: str) -> TannerGraph:
    """Parse alist text into a TannerGraph.

    Accepts the common lenient variants (extra spaces, missing zero
    padding) but checks structural consistency: stated degrees must match
    the neighbor rows, and the two adjacency halves must describe the
    same edge set.  Errors report the offending 1-based line number.
    """
    lines = text.splitlines()
    if len(lines) < 4:
        raise AlistParseError(f"line {len(lines) + 1}: file truncated, header incomplete")

    head = _ints(lines[0], 1)
    if len(head) != 2:
        raise AlistParseError(f"line 1: expected 'n m', got {lines[0]!r}")
    n, m = head
    if n < 1 or m < 1:
        raise AlistParseError(f"line 1: need positive n and m, got n={n}, m={m}")

    maxdeg = _ints(lines[1], 2)
    if len(maxdeg) != 2:
        raise AlistParseError(f"line 2: expected two maximum degrees, got {lines[1]!r}")
    dv_max, dc_max = maxdeg

    vdeg = _ints(lines[2], 3)
    if len(vdeg) != n:
        raise AlistParseError(f"line 3: expected {n} variable-node degrees, got {len(vdeg)}")
    cdeg = _ints(lines[3], 4)
    if len(cdeg) != m:
        raise AlistParseError(f"line 4: expected {m} check-node degrees, got {len(cdeg)}")
    if vdeg and max(vdeg, default=0) > dv_max:
        raise AlistParseError(f"line 3: degree {max(vdeg)} exceeds stated maximum {dv_max}")
    if cdeg and max(cdeg, default=0) > dc_max:
        raise AlistParseError(f"line 4: degree {max(cdeg)} exceeds stated maximum {dc_max}")

    if len(lines) < 4 + n + m:
        raise AlistParseError(
            f"line {len(lines) + 1}: file truncated, expected {4 + n + m} lines"
        )

    graph = TannerGraph(n, m)
    for v in range(1, n + 1):
        lineno = 4 + v
        row = [x for x in _ints(lines[lineno - 1], lineno) if x != 0]
        if len(row) != vdeg[v - 1]:
            raise AlistParseError(
                f"line {lineno}: variable node {v} lists {len(row)} neighbors,"
                f" header says {vdeg[v - 1]}"
            )
        for c in row:
            if not 1 <= c <= m:
                raise AlistParseError(f"line {lineno}: check node {c} out of range 1..{m}")
            if graph.has_edge(v, c):
                raise AlistParseError(f"line {lineno}: duplicate edge (v{v}, c{c})")
            graph.add_edge(v, c)

    for c in range(1, m + 1):
        lineno = 4 + n + c
        row = [x for x in _ints(lines[lineno - 1], lineno) if x != 0]
        if len(row) != cdeg[c - 1]:
            raise AlistParseError(
                f"line {lineno}: check node {c} lists {len(row)} neighbors,"
                f" header says {cdeg[c - 1]}"
            )
        seen = set()
        for v in row:
            if not 1 <= v <= n:
                raise AlistParseError(f"line {lineno}: variable node {v} out of range 1..{n}")
            if v in seen:
                raise AlistParseError(f"line {lineno}: duplicate edge (v{v}, c{c})")
            seen.add(v)
            if not graph.has_edge(v, c):
                raise AlistParseError(
                    f"line {lineno}: edge (v{v}, c{c}) missing from the variable-node rows"
                )
        if len(seen) != graph.cn_degree(c):
            raise AlistParseError(
                f"line {lineno}: check node {c} disagrees with the variable-node rows"
            )

    for lineno in range(4 + n + m + 1, len(lines) + 1):
        if lines[lineno - 1].strip():
            raise AlistParseError(f"line {lineno}: unexpected trailing content")
    return graph


def read_alist(path: str | Path) -> TannerGraph:
    """Load a Tanner graph from an alist file."""
    return parse_alist(Path(path).read_text())


def write_alist(graph: TannerGraph, path: str | Path) -> None:
    """Write the graph to `path` in canonical alist form."""
    Path(path).write_text(format_alist(graph))
