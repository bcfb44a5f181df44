"""Entropy-constrained PEG construction.

Plain PEG maximizes the length of each cycle it is forced to close but
does not care which variable nodes end up on those cycles.  The variant
here additionally steers unavoidable short cycles onto a small group of
variable nodes: a ledger tracks how many short cycles pass through each
node, and when a new edge must close a short cycle the check node is
chosen to minimize the entropy of that distribution.  Concentrated
cycles make the weakest nodes easy to list, which later analysis
exploits.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Iterable, Sequence

import numpy as np

from ecpeg.tanner import TannerGraph, bfs_distances, girth
from ecpeg.peg import (
    check_construction_params,
    first_cn_select,
    min_degree_select,
    peg_candidates,
)

__all__ = [
    "CycleLedger",
    "EcpegResult",
    "entropy",
    "new_cycles_through_edge",
    "entropy_constrained_select",
    "build_ecpeg",
]


def entropy(p: Iterable[float]) -> float:
    """Shannon entropy in bits, -sum(p_i * log2(p_i)) with 0 log 0 = 0.

    `p` must be nonnegative and sum to either 1 or 0 (an all-zero vector
    is the convention for "no mass yet" and has entropy 0).
    """
    arr = np.asarray(list(p) if not isinstance(p, np.ndarray) else p, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d probability vector, got shape {arr.shape}")
    if arr.size and arr.min() < 0:
        raise ValueError("probabilities must be nonnegative")
    total = float(arr.sum())
    if abs(total) > 1e-9 and abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total!r}, expected 0 or 1")
    return _entropy_unchecked(arr)


def _entropy_unchecked(arr: np.ndarray) -> float:
    # Same formula without the normalization check; the construction
    # ranks sub-normalized vectors (tracked lengths with no cycles yet
    # contribute zero mass) and only the ordering matters there.
    pos = arr[arr > 0]
    if pos.size == 0:
        return 0.0
    return float(-(pos * np.log2(pos)).sum())


def _check_tracked_params(n: int, g_cap: int) -> None:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if g_cap < 6 or g_cap % 2:
        raise ValueError(f"cycle-length cap must be even and >= 6, got {g_cap}")


class CycleLedger:
    """Per-node counts of short cycles created during construction.

    Tracks one counter vector per even cycle length in {4, ..., g_cap-2};
    entry i of vector g is how many recorded g-cycles pass through
    variable node i.  Lengths >= g_cap are deliberately not tracked: the
    construction only needs to place the cycles it failed to avoid.
    """

    def __init__(self, n: int, g_cap: int):
        _check_tracked_params(n, g_cap)
        self.n = n
        self.g_cap = g_cap
        self.tracked = tuple(range(4, g_cap, 2))
        self._counts = {g: np.zeros(n + 1, dtype=np.int64) for g in self.tracked}
        self._totals = dict.fromkeys(self.tracked, 0)

    def _check_len(self, cycle_len: int) -> None:
        if cycle_len not in self._totals:
            raise ValueError(
                f"cycle length {cycle_len} not tracked (tracked: {list(self.tracked)})"
            )

    def total(self, cycle_len: int) -> int:
        """Number of recorded cycles of the given length."""
        self._check_len(cycle_len)
        return self._totals[cycle_len]

    def counts(self, cycle_len: int) -> np.ndarray:
        """Copy of the per-node counter vector; index 0 is unused."""
        self._check_len(cycle_len)
        return self._counts[cycle_len].copy()

    def record(self, cycle_len: int, supports: Iterable[frozenset[int]]) -> None:
        """Add newly created cycles, given as variable-node support sets."""
        self._check_len(cycle_len)
        counts = self._counts[cycle_len]
        added = 0
        for support in supports:
            if len(support) != cycle_len // 2:
                raise ValueError(
                    f"a {cycle_len}-cycle touches {cycle_len // 2} variable nodes,"
                    f" got support of size {len(support)}"
                )
            for v in support:
                if not 1 <= v <= self.n:
                    raise ValueError(f"variable node {v} out of range 1..{self.n}")
                counts[v] += 1
            added += 1
        self._totals[cycle_len] += added

    def normalized(self, cycle_len: int) -> np.ndarray:
        """Counter vector scaled to sum 1, or all zeros if nothing recorded."""
        self._check_len(cycle_len)
        total = self._totals[cycle_len]
        counts = self._counts[cycle_len]
        if total == 0:
            return np.zeros(self.n + 1)
        return counts / counts.sum()

    def joint(self) -> np.ndarray:
        """Average of the normalized vectors over all tracked lengths.

        Sums to (number of lengths with at least one cycle) / (number of
        tracked lengths), so it is sub-normalized until every tracked
        length has appeared.
        """
        out = np.zeros(self.n + 1)
        for g in self.tracked:
            out += self.normalized(g)
        return out / len(self.tracked)

    def joint_entropy(self) -> float:
        return _entropy_unchecked(self.joint())

    def hypothetical_entropy(
        self, cycle_len: int, supports: Sequence[frozenset[int]]
    ) -> float:
        """Joint entropy if the given cycles were recorded, without recording."""
        self._check_len(cycle_len)
        counts = self._counts[cycle_len].astype(float)
        for support in supports:
            for v in support:
                counts[v] += 1
        out = np.zeros(self.n + 1)
        for g in self.tracked:
            if g == cycle_len:
                total = counts.sum()
                out += counts / total if total else counts
            else:
                out += self.normalized(g)
        return _entropy_unchecked(out / len(self.tracked))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "g_cap": self.g_cap,
            "totals": {str(g): self._totals[g] for g in self.tracked},
            "counts": {str(g): self._counts[g][1:].tolist() for g in self.tracked},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> CycleLedger:
        ledger = cls(int(data["n"]), int(data["g_cap"]))
        for g in ledger.tracked:
            counts = data["counts"][str(g)]
            if len(counts) != ledger.n:
                raise ValueError(f"length-{g} counts have {len(counts)} entries, expected {ledger.n}")
            ledger._counts[g][1:] = counts
            ledger._totals[g] = int(data["totals"][str(g)])
        return ledger


def new_cycles_through_edge(
    graph: TannerGraph, cn: int, vn: int, cycle_len: int
) -> list[frozenset[int]]:
    """Variable-node supports of the cycles adding edge (vn, cn) would create.

    The edge must not be in the graph yet.  Each cycle of length
    `cycle_len` through the new edge corresponds to a simple path of
    cycle_len - 1 edges from `cn` to `vn` in the current graph; one
    support set is returned per cycle, so repeated supports are
    meaningful (distinct cycles can touch the same variable nodes).
    """
    if cycle_len < 4 or cycle_len % 2:
        raise ValueError(f"cycle length must be even and >= 4, got {cycle_len}")
    if graph.has_edge(vn, cn):
        raise ValueError(f"edge (v{vn}, c{cn}) already present")
    dist_vn, dist_cn = bfs_distances(graph, vn)
    return _path_supports(graph, cn, vn, cycle_len, dist_vn, dist_cn)


def _path_supports(
    graph: TannerGraph,
    cn: int,
    vn: int,
    cycle_len: int,
    dist_vn: list[int],
    dist_cn: list[int],
) -> list[frozenset[int]]:
    # DFS for simple paths cn -> vn of exactly cycle_len - 1 edges,
    # alternating sides; BFS distances from vn prune branches that
    # cannot reach vn within the remaining budget.
    budget = cycle_len - 1
    if dist_cn[cn] < 0 or dist_cn[cn] > budget:
        return []
    out: list[frozenset[int]] = []
    seen_vn = {vn}
    seen_cn = set()
    path_vns: list[int] = []

    def from_cn(c: int, remaining: int) -> None:
        seen_cn.add(c)
        for u in graph.cn_neighbors(c):
            if u == vn:
                if remaining == 1:
                    out.append(frozenset(path_vns + [vn]))
                continue
            if u in seen_vn or remaining < 2:
                continue
            d = dist_vn[u]
            if d < 0 or d > remaining - 1:
                continue
            seen_vn.add(u)
            path_vns.append(u)
            from_vn(u, remaining - 1)
            path_vns.pop()
            seen_vn.discard(u)
        seen_cn.discard(c)

    def from_vn(u: int, remaining: int) -> None:
        for c in graph.vn_neighbors(u):
            if c in seen_cn:
                continue
            d = dist_cn[c]
            if d < 0 or d > remaining - 1:
                continue
            from_cn(c, remaining - 1)

    from_cn(cn, budget)
    return out


def entropy_constrained_select(
    graph: TannerGraph,
    cns: Sequence[int],
    vn: int,
    cycle_len: int,
    ledger: CycleLedger,
    rng: np.random.Generator,
) -> int:
    """Candidate whose new cycles keep the cycle distribution most peaked.

    Scores each candidate by the joint-ledger entropy it would produce
    and keeps the argmin; remaining ties go to minimum check-node degree,
    then to a uniform random choice.
    """
    if not cns:
        raise ValueError("empty candidate set")
    dist_vn, dist_cn = bfs_distances(graph, vn)
    scored = []
    for c in sorted(cns):
        supports = _path_supports(graph, c, vn, cycle_len, dist_vn, dist_cn)
        scored.append((ledger.hypothetical_entropy(cycle_len, supports), c))
    best = min(score for score, _ in scored)
    ties = [c for score, c in scored if score == best]
    return min_degree_select(graph, ties, rng)


@dataclass(frozen=True)
class EcpegResult:
    """Constructed graph plus the cycle ledger accumulated while building it."""

    graph: TannerGraph
    ledger: CycleLedger
    girth: float


def build_ecpeg(n: int, m: int, d_v: int, g_cap: int, seed: int) -> EcpegResult:
    """Entropy-constrained PEG construction.

    Runs PEG edge placement, but whenever the forced cycle is shorter
    than `g_cap` the check node is chosen by `entropy_constrained_select`
    and the created cycles are recorded in the ledger.  Cycles of length
    >= g_cap fall back to the plain minimum-degree rule and are not
    recorded.  Deterministic given the seed.
    """
    check_construction_params(n, m, d_v)
    _check_tracked_params(n, g_cap)
    rng = np.random.default_rng(seed)
    graph = TannerGraph(n, m, target_vn_degree=d_v)
    ledger = CycleLedger(n, g_cap)
    for vn in range(1, n + 1):
        for k in range(d_v):
            if k == 0:
                cn = first_cn_select(graph, rng)
            else:
                found = peg_candidates(graph, vn)
                if not found.creates_cycle or found.cycle_len >= g_cap:
                    cn = min_degree_select(graph, found.cns, rng)
                else:
                    cn = entropy_constrained_select(
                        graph, found.cns, vn, found.cycle_len, ledger, rng
                    )
                    ledger.record(
                        found.cycle_len,
                        new_cycles_through_edge(graph, cn, vn, found.cycle_len),
                    )
            graph.add_edge(vn, cn)
    return EcpegResult(graph=graph, ledger=ledger, girth=girth(graph))
