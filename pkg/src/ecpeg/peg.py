"""Progressive edge growth (PEG) construction of regular-column LDPC codes.

Edges are placed one variable node at a time.  The first edge of a node
goes to a lowest-degree check node; every later edge runs a BFS from the
node and connects as far away as possible, so any cycle that must be
closed is as long as possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Sequence

import numpy as np

from ecpeg.tanner import TannerGraph, bfs_distances

__all__ = [
    "CandidateResult",
    "first_cn_select",
    "peg_candidates",
    "min_degree_select",
    "build_peg",
]


@dataclass(frozen=True)
class CandidateResult:
    """Outcome of the PEG distance search for one new edge.

    cns
        Candidate check nodes, ascending.  Connecting to any of them is
        optimal under the PEG rule.
    creates_cycle
        False when the candidates are unreachable from the variable node,
        so the new edge closes no cycle.  True when every non-adjacent
        check node is reachable and any choice closes a cycle.
    cycle_len
        Length of the shortest cycle the new edge would create, or None
        when creates_cycle is False.
    """

    cns: tuple[int, ...]
    creates_cycle: bool
    cycle_len: int | None


def first_cn_select(graph: TannerGraph, rng: np.random.Generator) -> int:
    """Check node of minimum current degree; ties broken uniformly."""
    degrees = [graph.cn_degree(c) for c in range(1, graph.m + 1)]
    low = min(degrees)
    ties = [c for c in range(1, graph.m + 1) if degrees[c - 1] == low]
    return ties[int(rng.integers(len(ties)))]


def peg_candidates(graph: TannerGraph, vn: int) -> CandidateResult:
    """Optimal check nodes for the next edge at `vn` under the PEG rule.

    `vn` must already have at least one edge (the first edge is placed by
    degree, not by distance).  If some check nodes not yet adjacent to
    `vn` are unreachable by BFS, they are the candidates and no cycle is
    created.  Otherwise the candidates are the non-adjacent check nodes
    at maximum BFS distance d, and the new edge closes a cycle of length
    d + 1.
    """
    if graph.vn_degree(vn) == 0:
        raise ValueError(f"variable node {vn} has no edges yet; place its first edge by degree")
    adjacent = set(graph.vn_neighbors(vn))
    if len(adjacent) == graph.m:
        raise ValueError(f"variable node {vn} is already adjacent to every check node")
    _, dist_cn = bfs_distances(graph, vn)
    unreachable = [c for c in range(1, graph.m + 1) if dist_cn[c] < 0]
    if unreachable:
        return CandidateResult(tuple(unreachable), creates_cycle=False, cycle_len=None)
    far = max(dist_cn[c] for c in range(1, graph.m + 1) if c not in adjacent)
    cands = tuple(
        c for c in range(1, graph.m + 1) if c not in adjacent and dist_cn[c] == far
    )
    return CandidateResult(cands, creates_cycle=True, cycle_len=far + 1)


def min_degree_select(
    graph: TannerGraph, cns: Sequence[int], rng: np.random.Generator
) -> int:
    """Pick the candidate of minimum current degree; ties broken uniformly."""
    if not cns:
        raise ValueError("empty candidate set")
    low = min(graph.cn_degree(c) for c in cns)
    ties = sorted(c for c in cns if graph.cn_degree(c) == low)
    return ties[int(rng.integers(len(ties)))]


def check_construction_params(n: int, m: int, d_v: int) -> None:
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    if d_v < 2:
        raise ValueError(f"variable-node degree must be >= 2, got {d_v}")
    if d_v > m:
        raise ValueError(f"variable-node degree {d_v} exceeds the {m} check nodes")


def build_peg(n: int, m: int, d_v: int, seed: int) -> TannerGraph:
    """Construct an (n, m) Tanner graph with uniform variable degree d_v.

    Deterministic given the seed: ties in the degree rules are the only
    random choices.
    """
    check_construction_params(n, m, d_v)
    rng = np.random.default_rng(seed)
    graph = TannerGraph(n, m, target_vn_degree=d_v)
    for vn in range(1, n + 1):
        for k in range(d_v):
            if k == 0:
                cn = first_cn_select(graph, rng)
            else:
                found = peg_candidates(graph, vn)
                cn = min_degree_select(graph, found.cns, rng)
            graph.add_edge(vn, cn)
    return graph
