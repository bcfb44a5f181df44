"""Exhaustive short-cycle census of a Tanner graph.

Counts every simple cycle up to a length cap and attributes it to the
variable nodes it passes through.  Each cycle is visited exactly once:
the walk is rooted at its lowest-indexed variable node and oriented so
the first check node is smaller than the last.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from collections.abc import Iterable
from pathlib import Path

import numpy as np

from ecpeg.tanner import TannerGraph
from ecpeg.ecpeg import entropy

__all__ = [
    "CycleCensus",
    "enumerate_cycles",
    "cycle_fractions",
    "touch_entropy",
    "vns_by_touch",
    "write_cycle_fractions_csv",
]

# Above this cap the census cost grows too fast to be a sensible default;
# callers who really want longer cycles must opt in.
DEFAULT_LENGTH_CAP = 10


@dataclass(frozen=True)
class CycleCensus:
    """Cycle counts for every even length 4..g_max.

    totals[g] is the number of distinct g-cycles; touches[g][v] is how
    many of them pass through variable node v (index 0 unused).  When
    the census is built with keep_supports=True, supports[g] lists the
    variable-node support of every g-cycle, in enumeration order.
    """

    n: int
    g_max: int
    totals: dict[int, int]
    touches: dict[int, np.ndarray]
    supports: dict[int, list[frozenset[int]]] | None = None

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(range(4, self.g_max + 1, 2))


def enumerate_cycles(
    graph: TannerGraph,
    g_max: int,
    removed: Iterable[int] = (),
    keep_supports: bool = False,
    allow_large: bool = False,
) -> CycleCensus:
    """Count all simple cycles of length <= g_max, exactly once each.

    Variable nodes in `removed` are deleted first, so the census covers
    the purged graph.  g_max must be even and >= 4; values above
    DEFAULT_LENGTH_CAP are refused unless allow_large is set, because
    the search is exponential in the cap.
    """
    if g_max < 4 or g_max % 2:
        raise ValueError(f"cycle length cap must be even and >= 4, got {g_max}")
    if g_max > DEFAULT_LENGTH_CAP and not allow_large:
        raise ValueError(
            f"cap {g_max} above {DEFAULT_LENGTH_CAP} is expensive;"
            " pass allow_large=True to force it"
        )
    gone = set(removed)
    n = graph.n
    vn_adj: list[tuple[int, ...]] = [()] * (n + 1)
    for v in range(1, n + 1):
        if v not in gone:
            vn_adj[v] = graph.vn_neighbors(v)
    cn_adj: list[tuple[int, ...]] = [()] * (graph.m + 1)
    for c in range(1, graph.m + 1):
        cn_adj[c] = tuple(v for v in graph.cn_neighbors(c) if v not in gone)

    totals = dict.fromkeys(range(4, g_max + 1, 2), 0)
    touches = {g: np.zeros(n + 1, dtype=np.int64) for g in totals}
    supports: dict[int, list[frozenset[int]]] | None = None
    if keep_supports:
        supports = {g: [] for g in totals}

    # Alternating DFS two edges at a time.  State: path root, c0, v, c1,
    # ..., c with `used` edges so far; all path variable nodes exceed the
    # root and the closing check node must exceed c0, so each cycle is
    # generated from exactly one root and one orientation.
    for root in range(1, n + 1):
        root_cns = set(vn_adj[root])
        if len(root_cns) < 2:
            continue  # a cycle through root needs two distinct root edges
        seen_vn = {root}
        seen_cn: set[int] = set()
        path_vns = [root]

        def extend(c: int, used: int, c0: int) -> None:
            if c > c0 and c in root_cns:
                g = used + 1
                totals[g] += 1
                t = touches[g]
                for v in path_vns:
                    t[v] += 1
                if supports is not None:
                    supports[g].append(frozenset(path_vns))
            if used > g_max - 3:
                return
            for u in cn_adj[c]:
                if u <= root or u in seen_vn:
                    continue
                seen_vn.add(u)
                path_vns.append(u)
                for c2 in vn_adj[u]:
                    if c2 not in seen_cn:
                        seen_cn.add(c2)
                        extend(c2, used + 2, c0)
                        seen_cn.discard(c2)
                path_vns.pop()
                seen_vn.discard(u)

        for c0 in vn_adj[root]:
            seen_cn.add(c0)
            extend(c0, 1, c0)
            seen_cn.discard(c0)

    return CycleCensus(n=n, g_max=g_max, totals=totals, touches=touches, supports=supports)


def cycle_fractions(census: CycleCensus, g: int) -> np.ndarray:
    """Fraction of g-cycles through each variable node (index 0 unused).

    Entries sum to g/2 (each cycle touches g/2 nodes), not to 1; the
    vector is all zeros when no g-cycle exists.
    """
    if g not in census.totals:
        raise ValueError(f"length {g} not in census (lengths {list(census.lengths)})")
    total = census.totals[g]
    if total == 0:
        return np.zeros(census.n + 1)
    return census.touches[g] / total


def touch_entropy(census: CycleCensus, g: int) -> float:
    """Shannon entropy of the g-cycle touch distribution over nodes.

    Normalizes the touch counts to sum 1 first (unlike cycle_fractions),
    so values are comparable across graphs with different cycle counts.
    Zero when no g-cycle exists.
    """
    if g not in census.totals:
        raise ValueError(f"length {g} not in census (lengths {list(census.lengths)})")
    t = census.touches[g]
    total = t.sum()
    if total == 0:
        return 0.0
    return entropy(t / total)


def vns_by_touch(census: CycleCensus, g: int) -> list[int]:
    """Variable nodes sorted by g-cycle involvement, most-touched first.

    Ties break toward the smaller index so the order is deterministic.
    """
    if g not in census.totals:
        raise ValueError(f"length {g} not in census (lengths {list(census.lengths)})")
    t = census.touches[g]
    return sorted(range(1, census.n + 1), key=lambda v: (-t[v], v))


def write_cycle_fractions_csv(census: CycleCensus, path: str | Path) -> None:
    """One row per variable node with its cycle fraction at each length.

    Rows are sorted by the length-6 fraction descending (falling back to
    the shortest tracked length when 6 is not in the census), then by
    node index, so the most implicated nodes come first.
    """
    fractions = {g: cycle_fractions(census, g) for g in census.lengths}
    sort_g = 6 if 6 in fractions else census.lengths[0]
    order = sorted(range(1, census.n + 1), key=lambda v: (-fractions[sort_g][v], v))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["vn"] + [f"fraction_{g}" for g in census.lengths])
        for v in order:
            writer.writerow([v] + [f"{fractions[g][v]:.10g}" for g in census.lengths])
