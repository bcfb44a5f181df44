"""Greedy cover sets over short cycles and the sample sets built from them.

Construction concentrates short cycles on few variable nodes; this
module turns that concentration into concrete sample sets.  For each
cycle length, a greedy pass repeatedly takes the node on the most
remaining cycles until none survive.  The union over lengths up to g-2
is the g-sample set: querying it touches every cycle shorter than g,
and in particular every stopping set that contains such a cycle.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ecpeg.tanner import TannerGraph, girth
from ecpeg.cycles import enumerate_cycles

__all__ = [
    "SampleSetFamily",
    "greedy_cover_sets",
    "cover_set",
    "g_sample_set",
    "greedy_sample_set",
]


@dataclass(frozen=True)
class SampleSetFamily:
    """Greedy cover sets of one graph, one list per cycle length.

    covers[g] holds the nodes picked while covering the g-cycles that
    survived all shorter rounds, in pick order, each with the number of
    cycles it covered at pick time (these counts are nonincreasing).
    Rounds run from the graph's girth up to g_cap - 2; an acyclic graph,
    or one whose girth is already above g_cap - 2, has no rounds.
    """

    n: int
    g_cap: int
    seed: int
    girth: float
    covers: dict[int, list[tuple[int, int]]] = field(default_factory=dict)

    def rounds(self) -> tuple[int, ...]:
        return tuple(sorted(self.covers))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "g_cap": self.g_cap,
            "seed": self.seed,
            "girth": None if math.isinf(self.girth) else int(self.girth),
            "covers": {
                str(g): [[v, k] for v, k in self.covers[g]] for g in self.rounds()
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> SampleSetFamily:
        raw_girth = data["girth"]
        return cls(
            n=int(data["n"]),
            g_cap=int(data["g_cap"]),
            seed=int(data["seed"]),
            girth=math.inf if raw_girth is None else int(raw_girth),
            covers={
                int(g): [(int(v), int(k)) for v, k in rows]
                for g, rows in data["covers"].items()
            },
        )

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n")

    @classmethod
    def read_json(cls, path: str | Path) -> SampleSetFamily:
        return cls.from_json_dict(json.loads(Path(path).read_text()))


def greedy_cover_sets(graph: TannerGraph, g_cap: int, seed: int) -> SampleSetFamily:
    """Cover the short cycles of `graph`, one length at a time.

    Round g enumerates the g-cycles that avoid every node picked in
    earlier rounds, then greedily picks the node lying on the most
    surviving cycles (ties resolved uniformly at random) until none
    survive.  Deterministic given the seed.
    """
    if g_cap < 6 or g_cap % 2:
        raise ValueError(f"cycle-length cap must be even and >= 6, got {g_cap}")
    g0 = girth(graph)
    rng = np.random.default_rng(seed)
    covers: dict[int, list[tuple[int, int]]] = {}
    removed: set[int] = set()
    if g0 <= g_cap - 2:
        for g in range(int(g0), g_cap - 1, 2):
            census = enumerate_cycles(graph, g, removed=removed, keep_supports=True)
            for shorter in range(4, g, 2):
                if census.totals[shorter]:
                    raise RuntimeError(
                        f"round {g} found uncovered {shorter}-cycles;"
                        " earlier rounds should have removed them"
                    )
            assert census.supports is not None
            alive = list(census.supports[g])
            entries: list[tuple[int, int]] = []
            while alive:
                per_vn = Counter()
                for sup in alive:
                    per_vn.update(sup)
                best = max(per_vn.values())
                ties = sorted(v for v, k in per_vn.items() if k == best)
                pick = ties[int(rng.integers(len(ties)))]
                entries.append((pick, best))
                removed.add(pick)
                alive = [sup for sup in alive if pick not in sup]
            covers[g] = entries
    return SampleSetFamily(n=graph.n, g_cap=g_cap, seed=seed, girth=g0, covers=covers)


def cover_set(family: SampleSetFamily, g: int) -> frozenset[int]:
    """All nodes picked through round g: together they hit every cycle
    of length <= g in the original graph.

    Lengths below the girth need no cover and return the empty set;
    lengths above g_cap - 2 were never computed and raise.
    """
    if g < 4 or g % 2:
        raise ValueError(f"cycle length must be even and >= 4, got {g}")
    if g < family.girth:
        return frozenset()
    if g > family.g_cap - 2:
        raise ValueError(
            f"family only covers cycle lengths up to {family.g_cap - 2}, asked for {g}"
        )
    out: set[int] = set()
    for rnd in family.rounds():
        if rnd <= g:
            out.update(v for v, _ in family.covers[rnd])
    return frozenset(out)


def g_sample_set(family: SampleSetFamily, g: int) -> frozenset[int]:
    """Sample set targeting girth-g designs: the cover through length g - 2.

    Any stopping set containing a cycle shorter than g intersects this
    set, so sampling all of it catches those stopping sets with
    certainty.
    """
    if g < 4 or g % 2:
        raise ValueError(f"target girth must be even and >= 4, got {g}")
    if g == 4:
        return frozenset()
    return cover_set(family, g - 2)


def greedy_sample_set(family: SampleSetFamily, s: int) -> frozenset[int]:
    """Best s-node sample set obtainable from the family's greedy order.

    Finds the smallest length whose cumulative cover exceeds s, takes
    the full cover of the previous length, and fills the rest with that
    round's picks in pick order (they cover the most cycles first).  If
    even the largest cover has at most s nodes, the remainder is padded
    with uniformly random unused nodes, seeded from the family seed and
    s so the result is reproducible.
    """
    if not 0 <= s <= family.n:
        raise ValueError(f"sample budget must be in 0..{family.n}, got {s}")
    chosen: list[int] = []
    have: set[int] = set()
    for rnd in family.rounds():
        picks = [v for v, _ in family.covers[rnd]]
        if len(have) + len(picks) > s:
            chosen = sorted(have) + picks[: s - len(have)]
            return frozenset(chosen)
        have.update(picks)
    if len(have) == s:
        return frozenset(have)
    pool = np.array(sorted(set(range(1, family.n + 1)) - have), dtype=np.int64)
    rng = np.random.default_rng(np.random.SeedSequence([family.seed, s]))
    extra = rng.choice(pool, size=s - len(have), replace=False)
    return frozenset(have | {int(v) for v in extra})
