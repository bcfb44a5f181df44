"""Stopping sets: recognition, peeling, enumeration, and weight bounds.

A stopping set is a nonempty group of variable nodes such that every
check node touching the group touches it at least twice.  Erasure
peeling stalls exactly on stopping sets, so the small ones are the
failure modes that sampling ought to watch.
"""

from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass, field
from collections.abc import Iterable
from pathlib import Path

import numpy as np

from ecpeg.tanner import TannerGraph

__all__ = [
    "BudgetExceededError",
    "PeelResult",
    "StoppingSetCatalog",
    "WeightBound",
    "StoppingBoundTable",
    "is_stopping_set",
    "peel_decode",
    "enumerate_stopping_sets",
    "enumerate_up_to_budget",
    "stopping_set_fractions",
    "fraction_touched",
    "stopping_weight_lower_bound",
    "derived_weight_bound",
]


class BudgetExceededError(RuntimeError):
    """Enumeration stopped because it hit its search-node budget."""

    def __init__(self, nodes: int, max_weight: int):
        super().__init__(
            f"stopping-set search exceeded {nodes} nodes at weight cap {max_weight}"
        )
        self.nodes = nodes
        self.max_weight = max_weight


def _check_vns(graph: TannerGraph, vns: Iterable[int]) -> set[int]:
    out = set()
    for v in vns:
        if not 1 <= v <= graph.n:
            raise ValueError(f"variable node {v} out of range 1..{graph.n}")
        out.add(v)
    return out


def is_stopping_set(graph: TannerGraph, vns: Iterable[int]) -> bool:
    """True when every check node touching `vns` touches it at least twice.

    The empty set satisfies that vacuously but is excluded by definition,
    so passing it is treated as a caller bug.
    """
    members = _check_vns(graph, vns)
    if not members:
        raise ValueError("stopping sets are nonempty by definition")
    hits: dict[int, int] = {}
    for v in members:
        for c in graph.vn_neighbors(v):
            hits[c] = hits.get(c, 0) + 1
    return all(k >= 2 for k in hits.values())


@dataclass(frozen=True)
class PeelResult:
    """Outcome of erasure peeling.

    residual is the set of variable nodes still erased when no check
    node has exactly one erased neighbor; it is the unique maximal
    stopping set inside the erased set (empty iff decoding succeeded).
    """

    decoded: bool
    residual: frozenset[int]


def peel_decode(graph: TannerGraph, erased: Iterable[int]) -> PeelResult:
    """Run the peeling decoder on an erasure pattern.

    Repeatedly pick a check node with exactly one erased neighbor and
    recover that neighbor.  The order of picks does not affect the
    result.  An empty erasure pattern decodes trivially.
    """
    left = _check_vns(graph, erased)
    hits = [0] * (graph.m + 1)
    for v in left:
        for c in graph.vn_neighbors(v):
            hits[c] += 1
    ready = deque(c for c in range(1, graph.m + 1) if hits[c] == 1)
    while ready:
        c = ready.popleft()
        if hits[c] != 1:
            continue
        v = next(u for u in graph.cn_neighbors(c) if u in left)
        left.discard(v)
        for c2 in graph.vn_neighbors(v):
            hits[c2] -= 1
            if hits[c2] == 1:
                ready.append(c2)
    return PeelResult(decoded=not left, residual=frozenset(left))


# -- exhaustive enumeration --------------------------------------------------


def _search_stopping_sets(
    vn_adj: list[tuple[int, ...]],
    cn_adj: list[tuple[int, ...]],
    max_weight: int,
    work_budget: int | None,
) -> list[tuple[int, ...]]:
    """Branch-and-bound over include/exclude decisions per variable node.

    Invariants at every search node: cnt[c] counts included neighbors of
    check node c, rem[c] counts undecided ones, and `deficient` holds the
    check nodes with cnt == 1.  A check node with cnt == 1 and rem == 0
    can never be satisfied (prune); with rem == 1 its last undecided
    neighbor is forced in (unit propagation).  Each included node fixes
    at most d_vmax deficient checks, giving the weight bound.  Every
    stopping set of size <= max_weight is emitted exactly once: at the
    unique node where its last member enters and no check is deficient.
    """
    n = len(vn_adj) - 1
    m = len(cn_adj) - 1
    d_vmax = max((len(a) for a in vn_adj[1:]), default=0) or 1
    UNDEC, IN, OUT = 0, 1, 2
    status = bytearray(n + 1)
    cnt = [0] * (m + 1)
    rem = [len(cn_adj[c]) for c in range(m + 1)]
    deficient: set[int] = set()
    members: list[int] = []
    found: list[tuple[int, ...]] = []
    nodes = 0

    def include(v: int) -> None:
        status[v] = IN
        members.append(v)
        for c in vn_adj[v]:
            rem[c] -= 1
            x = cnt[c] + 1
            cnt[c] = x
            if x == 1:
                deficient.add(c)
            elif x == 2:
                deficient.discard(c)

    def undo_include(v: int) -> None:
        status[v] = UNDEC
        members.pop()
        for c in vn_adj[v]:
            x = cnt[c]
            if x == 1:
                deficient.discard(c)
            elif x == 2:
                deficient.add(c)
            cnt[c] = x - 1
            rem[c] += 1

    def exclude(v: int) -> None:
        status[v] = OUT
        for c in vn_adj[v]:
            rem[c] -= 1

    def undo_exclude(v: int) -> None:
        status[v] = UNDEC
        for c in vn_adj[v]:
            rem[c] += 1

    def node(grew: bool) -> None:
        nonlocal nodes
        nodes += 1
        if work_budget is not None and nodes > work_budget:
            raise BudgetExceededError(nodes, max_weight)
        forced: list[int] = []
        alive = True
        while True:
            need = (len(deficient) + d_vmax - 1) // d_vmax
            if len(members) + need > max_weight:
                alive = False
                break
            unit = 0
            dead = False
            for c in deficient:
                r = rem[c]
                if r == 0:
                    dead = True
                    break
                if r == 1 and unit == 0:
                    unit = c
            if dead:
                alive = False
                break
            if unit == 0:
                break
            u = next(v for v in cn_adj[unit] if status[v] == UNDEC)
            include(u)
            forced.append(u)
            grew = True
        if alive:
            if grew and not deficient and members:
                found.append(tuple(sorted(members)))
            if deficient:
                c = min(deficient, key=lambda x: (rem[x], x))
                u = next(v for v in cn_adj[c] if status[v] == UNDEC)
                include(u)
                node(True)
                undo_include(u)
                exclude(u)
                node(False)
                undo_exclude(u)
            elif len(members) < max_weight:
                picked: list[int] = []
                for u in range(1, n + 1):
                    if status[u] == UNDEC:
                        include(u)
                        node(True)
                        undo_include(u)
                        exclude(u)
                        picked.append(u)
                for u in reversed(picked):
                    undo_exclude(u)
        for u in reversed(forced):
            undo_include(u)

    if max_weight >= 1 and n >= 1:
        node(False)
    return found


def enumerate_stopping_sets(
    graph: TannerGraph, max_weight: int, work_budget: int | None = None
) -> StoppingSetCatalog:
    """All stopping sets of size <= max_weight, each exactly once.

    `work_budget` caps the number of branch-and-bound search nodes;
    exceeding it raises BudgetExceededError rather than returning a
    partial (and silently misleading) catalog.
    """
    if max_weight < 0:
        raise ValueError(f"weight cap must be >= 0, got {max_weight}")
    if max_weight > graph.n:
        max_weight = graph.n
    vn_adj = [()] + [graph.vn_neighbors(v) for v in range(1, graph.n + 1)]
    cn_adj = [()] + [graph.cn_neighbors(c) for c in range(1, graph.m + 1)]
    found = _search_stopping_sets(vn_adj, cn_adj, max_weight, work_budget)
    by_weight: dict[int, list[frozenset[int]]] = {}
    for tup in found:
        by_weight.setdefault(len(tup), []).append(frozenset(tup))
    return StoppingSetCatalog(
        n=graph.n,
        max_weight=max_weight,
        sets_by_weight={
            w: tuple(sorted(sets, key=sorted)) for w, sets in sorted(by_weight.items())
        },
    )


def enumerate_up_to_budget(
    graph: TannerGraph, weight_cap: int, work_budget: int
) -> tuple[StoppingSetCatalog, int]:
    """Enumerate at increasing weight caps until one exceeds the budget.

    Returns the catalog for the largest cap that completed, along with
    that cap.  Cap 0 (an empty catalog) is returned when even weight 1
    is out of budget.  Every reported weight is therefore complete; the
    catalog never contains a partially enumerated weight.
    """
    if work_budget < 1:
        raise ValueError(f"work budget must be >= 1, got {work_budget}")
    done = StoppingSetCatalog(n=graph.n, max_weight=0, sets_by_weight={})
    completed = 0
    for cap in range(1, min(weight_cap, graph.n) + 1):
        try:
            done = enumerate_stopping_sets(graph, cap, work_budget)
        except BudgetExceededError:
            break
        completed = cap
    return done, completed


@dataclass(frozen=True)
class StoppingSetCatalog:
    """Stopping sets grouped by weight, complete up to max_weight.

    sets_by_weight maps each weight with at least one set to a sorted
    tuple of frozensets.  A catalog may also be built from an explicit
    list of sets (see from_sets) for adversary models that only consider
    a restricted family.
    """

    n: int
    max_weight: int
    sets_by_weight: dict[int, tuple[frozenset[int], ...]] = field(default_factory=dict)

    @classmethod
    def from_sets(
        cls,
        graph: TannerGraph,
        sets: Iterable[Iterable[int]],
        max_weight: int | None = None,
    ) -> StoppingSetCatalog:
        """Catalog from explicit sets, each verified against the graph."""
        grouped: dict[int, set[frozenset[int]]] = {}
        for raw in sets:
            s = frozenset(_check_vns(graph, raw))
            if not is_stopping_set(graph, s):
                raise ValueError(f"{sorted(s)} is not a stopping set of this graph")
            grouped.setdefault(len(s), set()).add(s)
        top = max(grouped, default=0)
        if max_weight is None:
            max_weight = top
        elif top > max_weight:
            raise ValueError(f"a set of weight {top} exceeds the stated cap {max_weight}")
        return cls(
            n=graph.n,
            max_weight=max_weight,
            sets_by_weight={
                w: tuple(sorted(grouped[w], key=sorted)) for w in sorted(grouped)
            },
        )

    def weights(self) -> tuple[int, ...]:
        return tuple(sorted(self.sets_by_weight))

    def count(self, weight: int) -> int:
        return len(self.sets_by_weight.get(weight, ()))

    def total_count(self) -> int:
        return sum(len(s) for s in self.sets_by_weight.values())

    def sets(self, weight: int) -> tuple[frozenset[int], ...]:
        return self.sets_by_weight.get(weight, ())

    def all_sets(self) -> Iterable[frozenset[int]]:
        for w in self.weights():
            yield from self.sets_by_weight[w]

    def min_weight(self) -> int | None:
        """Smallest stopping-set weight, or None if the catalog is empty."""
        ws = self.weights()
        return ws[0] if ws else None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "max_weight": self.max_weight,
            "sets": {
                str(w): [sorted(s) for s in self.sets_by_weight[w]]
                for w in self.weights()
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> StoppingSetCatalog:
        sets_by_weight = {}
        for key, rows in data["sets"].items():
            w = int(key)
            sets = tuple(sorted((frozenset(map(int, row)) for row in rows), key=sorted))
            for s in sets:
                if len(s) != w:
                    raise ValueError(f"set {sorted(s)} filed under weight {w}")
            sets_by_weight[w] = sets
        return cls(
            n=int(data["n"]),
            max_weight=int(data["max_weight"]),
            sets_by_weight=sets_by_weight,
        )

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n")

    @classmethod
    def read_json(cls, path: str | Path) -> StoppingSetCatalog:
        return cls.from_json_dict(json.loads(Path(path).read_text()))

    def write_histogram_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["weight", "count"])
            for w in self.weights():
                writer.writerow([w, self.count(w)])


def stopping_set_fractions(catalog: StoppingSetCatalog, weight: int) -> np.ndarray:
    """Fraction of weight-`weight` sets containing each variable node.

    Index 0 unused; all zeros when the catalog has no sets of that
    weight.  Entries sum to weight (each set contributes its members).
    """
    out = np.zeros(catalog.n + 1)
    sets = catalog.sets(weight)
    if not sets:
        return out
    for s in sets:
        for v in s:
            out[v] += 1
    return out / len(sets)


def fraction_touched(
    catalog: StoppingSetCatalog, sample_vns: Iterable[int], weight: int
) -> float:
    """Fraction of weight-`weight` sets that intersect the sample.

    Returns 0.0 when the catalog has no sets of that weight (there is
    nothing for a sample to catch).
    """
    sets = catalog.sets(weight)
    if not sets:
        return 0.0
    sample = set(sample_vns)
    hit = sum(1 for s in sets if not sample.isdisjoint(s))
    return hit / len(sets)


# -- minimum-weight bounds ---------------------------------------------------

_PROVENANCES = ("published", "supplied", "derived")


@dataclass(frozen=True)
class WeightBound:
    """A lower bound on the minimum stopping-set weight, with its origin.

    provenance is "published" for bounds taken from the literature,
    "supplied" for user-provided values, and "derived" for bounds
    established by enumeration on a concrete graph.
    """

    value: int
    provenance: str

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"bound must be >= 1, got {self.value}")
        if self.provenance not in _PROVENANCES:
            raise ValueError(f"provenance must be one of {_PROVENANCES}")


def stopping_weight_lower_bound(d_v: int, girth: float) -> WeightBound | None:
    """Published girth-based bound, or None when no bound is known.

    For a graph with uniform variable degree d_v and girth at least 10,
    every stopping set has at least 1 + d_v**2 members.  Smaller girths
    return None here; use a StoppingBoundTable to record supplied or
    derived values for them.
    """
    if d_v < 1:
        raise ValueError(f"variable degree must be >= 1, got {d_v}")
    if girth >= 10:
        return WeightBound(1 + d_v * d_v, "published")
    return None


class StoppingBoundTable:
    """Minimum-stopping-weight bounds for one variable degree, by girth.

    A bound recorded at girth g applies to any graph of girth >= g, so
    lookup takes the best bound at or below the queried girth.  The
    published girth-10 bound is preloaded.
    """

    def __init__(self, d_v: int):
        if d_v < 1:
            raise ValueError(f"variable degree must be >= 1, got {d_v}")
        self.d_v = d_v
        self._entries: dict[int, WeightBound] = {
            10: WeightBound(1 + d_v * d_v, "published")
        }

    def add(self, girth: int, value: int, provenance: str = "supplied") -> None:
        if girth < 4 or girth % 2:
            raise ValueError(f"girth key must be even and >= 4, got {girth}")
        self._entries[girth] = WeightBound(value, provenance)

    def lookup(self, girth: float) -> WeightBound | None:
        """Strongest applicable bound for a graph of the given girth."""
        hits = [b for g, b in self._entries.items() if g <= girth]
        if not hits:
            return None
        return max(hits, key=lambda b: b.value)

    def entries(self) -> dict[int, WeightBound]:
        return dict(self._entries)


def derived_weight_bound(catalog: StoppingSetCatalog) -> WeightBound:
    """Bound established by exhaustive enumeration.

    A nonempty catalog pins the minimum weight exactly; an empty one
    shows every stopping set is heavier than the enumerated cap.
    """
    w = catalog.min_weight()
    if w is None:
        if catalog.max_weight >= catalog.n:
            raise ValueError("graph has no stopping sets at all; no bound applies")
        return WeightBound(catalog.max_weight + 1, "derived")
    return WeightBound(w, "derived")
