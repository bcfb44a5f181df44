"""Command-line front end.

Subcommands cover the full pipeline: construct a code, census its
cycles, build sample sets, enumerate stopping sets, and tabulate
failure curves.  Every run writes a manifest.json recording the exact
parameters and seed, outputs are written atomically (temp file plus
rename), and reruns with the same arguments produce byte-identical
files.  Existing outputs are only overwritten with --force.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path
from statistics import median
from collections.abc import Callable, Sequence

from ecpeg import __version__
from ecpeg.tanner import TannerGraph, girth, read_alist, format_alist
from ecpeg.peg import build_peg
from ecpeg.ecpeg import build_ecpeg
from ecpeg.cycles import enumerate_cycles, touch_entropy, write_cycle_fractions_csv
from ecpeg.sampling import SampleSetFamily, greedy_cover_sets, g_sample_set
from ecpeg.stopsets import (
    StoppingSetCatalog,
    enumerate_stopping_sets,
    enumerate_up_to_budget,
)
from ecpeg.failure import (
    ensemble_reference_points,
    failure_curve_points,
    write_failure_csv,
)

__all__ = ["main"]


def _write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _write_json(path: Path, obj: object) -> None:
    _write_text(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _write_via(path: Path, writer: Callable[[Path], None]) -> None:
    tmp = path.with_name(path.name + ".tmp")
    writer(tmp)
    os.replace(tmp, path)


def _prepare_out(out: Path, names: Sequence[str], force: bool) -> None:
    out.mkdir(parents=True, exist_ok=True)
    clashes = [str(out / n) for n in names if (out / n).exists()]
    if clashes and not force:
        raise ValueError(
            "refusing to overwrite existing outputs (use --force): " + ", ".join(clashes)
        )


def _json_girth(g: float) -> int | None:
    return None if math.isinf(g) else int(g)


def _resolve_m(args: argparse.Namespace) -> int:
    if args.m is not None:
        return args.m
    if not 0.0 < args.rate < 1.0:
        raise ValueError(f"rate must be strictly between 0 and 1, got {args.rate}")
    return round(args.n * (1.0 - args.rate))


def _parse_int_list(text: str) -> list[int]:
    """Comma-separated integers, with a-b ranges: '1,3,5-8' -> [1,3,5,6,7,8]."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo_text, hi_text = part.split("-", 1)
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError(f"no integers in {text!r}")
    return sorted(set(out))


def _cmd_construct(args: argparse.Namespace) -> int:
    m = _resolve_m(args)
    out = Path(args.out)
    names = ["code.alist", "manifest.json"]
    if args.kind == "ecpeg":
        names.append("ledger.json")
    _prepare_out(out, names, args.force)
    manifest = {
        "command": "construct",
        "version": __version__,
        "kind": args.kind,
        "n": args.n,
        "m": m,
        "rate": args.rate,
        "d_v": args.d_v,
        "g_cap": args.g_cap if args.kind == "ecpeg" else None,
        "seed": args.seed,
    }
    if args.kind == "peg":
        graph = build_peg(args.n, m, args.d_v, args.seed)
        manifest["girth"] = _json_girth(girth(graph))
    else:
        result = build_ecpeg(args.n, m, args.d_v, args.g_cap, args.seed)
        graph = result.graph
        manifest["girth"] = _json_girth(result.girth)
        _write_json(out / "ledger.json", result.ledger.to_json_dict())
    manifest["num_edges"] = graph.num_edges
    _write_text(out / "code.alist", format_alist(graph))
    _write_json(out / "manifest.json", manifest)
    print(f"wrote {out / 'code.alist'} (n={graph.n}, m={graph.m}, girth={manifest['girth']})")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    graph = read_alist(args.alist)
    out = Path(args.out)
    _prepare_out(out, ["cycle_fractions.csv", "analysis.json"], args.force)
    census = enumerate_cycles(graph, args.g_max, allow_large=args.allow_large)
    analysis = {
        "command": "analyze",
        "version": __version__,
        "alist": args.alist,
        "n": graph.n,
        "m": graph.m,
        "g_max": args.g_max,
        "girth": _json_girth(girth(graph)),
        "totals": {str(g): census.totals[g] for g in census.lengths},
        "touch_entropy": {str(g): touch_entropy(census, g) for g in census.lengths},
    }
    _write_via(out / "cycle_fractions.csv", lambda p: write_cycle_fractions_csv(census, p))
    _write_json(out / "analysis.json", analysis)
    print(f"wrote {out / 'analysis.json'} (totals {analysis['totals']})")
    return 0


def _cmd_sample_sets(args: argparse.Namespace) -> int:
    graph = read_alist(args.alist)
    out = Path(args.out)
    _prepare_out(out, ["family.json", "manifest.json"], args.force)
    family = greedy_cover_sets(graph, args.g_cap, args.seed)
    manifest = {
        "command": "sample-sets",
        "version": __version__,
        "alist": args.alist,
        "g_cap": args.g_cap,
        "seed": args.seed,
        "girth": _json_girth(family.girth),
        "cover_sizes": {str(g): len(family.covers[g]) for g in family.rounds()},
        "sample_set_size": len(g_sample_set(family, args.g_cap)),
    }
    _write_via(out / "family.json", family.write_json)
    _write_json(out / "manifest.json", manifest)
    print(f"wrote {out / 'family.json'} (cover sizes {manifest['cover_sizes']})")
    return 0


def _cmd_stopsets(args: argparse.Namespace) -> int:
    graph = read_alist(args.alist)
    out = Path(args.out)
    _prepare_out(out, ["catalog.json", "histogram.csv", "manifest.json"], args.force)
    if args.budget is not None:
        catalog, completed = enumerate_up_to_budget(graph, args.max_weight, args.budget)
    else:
        catalog = enumerate_stopping_sets(graph, args.max_weight)
        completed = catalog.max_weight
    manifest = {
        "command": "stopsets",
        "version": __version__,
        "alist": args.alist,
        "max_weight_requested": args.max_weight,
        "max_weight_completed": completed,
        "budget": args.budget,
        "total_sets": catalog.total_count(),
        "min_weight": catalog.min_weight(),
    }
    _write_via(out / "catalog.json", catalog.write_json)
    _write_via(out / "histogram.csv", catalog.write_histogram_csv)
    _write_json(out / "manifest.json", manifest)
    print(
        f"wrote {out / 'catalog.json'} ({catalog.total_count()} sets,"
        f" weights complete to {completed})"
    )
    return 0


def _cmd_failure_curves(args: argparse.Namespace) -> int:
    catalog = StoppingSetCatalog.read_json(args.catalog)
    family = SampleSetFamily.read_json(args.family)
    out = Path(args.out)
    _prepare_out(out, ["failure.csv", "manifest.json"], args.force)
    if args.weights:
        weights = _parse_int_list(args.weights)
    else:
        weights = list(catalog.weights()[:2])
        if not weights:
            raise ValueError("catalog is empty and no --weights were given")
    s_values = _parse_int_list(args.samples)
    points = failure_curve_points(
        catalog, family, weights, s_values, mc_trials=args.trials, seed=args.seed
    )
    if args.overlay:
        points.extend(ensemble_reference_points(catalog.n, s_values))
    manifest = {
        "command": "failure-curves",
        "version": __version__,
        "catalog": args.catalog,
        "family": args.family,
        "weights": weights,
        "s_values": s_values,
        "trials": args.trials,
        "seed": args.seed,
        "overlay": bool(args.overlay),
        "rows": len(points),
    }
    _write_via(out / "failure.csv", lambda p: write_failure_csv(points, p))
    _write_json(out / "manifest.json", manifest)
    print(f"wrote {out / 'failure.csv'} ({len(points)} rows)")
    return 0


def _graph_report(graph: TannerGraph, g_cap: int, seed: int, args) -> dict:
    census = enumerate_cycles(graph, g_cap - 2)
    family = greedy_cover_sets(graph, g_cap, seed)
    report = {
        "girth": _json_girth(girth(graph)),
        "cycle_totals": {str(g): census.totals[g] for g in census.lengths},
        "touch_entropy": {str(g): touch_entropy(census, g) for g in census.lengths},
        "cover_sizes": {str(g): len(family.covers[g]) for g in family.rounds()},
        "sample_set_size": len(g_sample_set(family, g_cap)),
    }
    if args.max_weight:
        catalog, completed = enumerate_up_to_budget(graph, args.max_weight, args.budget)
        report["stopset_weights_complete_to"] = completed
        report["min_stopping_weight"] = catalog.min_weight()
        report["stopset_counts"] = {str(w): catalog.count(w) for w in catalog.weights()}
    return report


def _cmd_compare(args: argparse.Namespace) -> int:
    m = _resolve_m(args)
    out = Path(args.out)
    _prepare_out(out, ["compare.json"], args.force)
    seeds = _parse_int_list(args.seeds)
    per_seed: dict[str, dict] = {}
    for seed in seeds:
        peg_graph = build_peg(args.n, m, args.d_v, seed)
        ec = build_ecpeg(args.n, m, args.d_v, args.g_cap, seed)
        per_seed[str(seed)] = {
            "peg": _graph_report(peg_graph, args.g_cap, seed, args),
            "ecpeg": _graph_report(ec.graph, args.g_cap, seed, args),
        }

    def _median_of(kind: str, key: str, sub: str | None = None) -> float | None:
        vals = []
        for seed in seeds:
            v = per_seed[str(seed)][kind].get(key)
            if sub is not None and v is not None:
                v = v.get(sub)
            if v is None:
                return None
            vals.append(v)
        return median(vals)

    medians: dict[str, dict] = {}
    for kind in ("peg", "ecpeg"):
        medians[kind] = {"sample_set_size": _median_of(kind, "sample_set_size")}
        for g in range(4, args.g_cap - 1, 2):
            medians[kind][f"touch_entropy_{g}"] = _median_of(kind, "touch_entropy", str(g))
    result = {
        "command": "compare",
        "version": __version__,
        "n": args.n,
        "m": m,
        "rate": args.rate,
        "d_v": args.d_v,
        "g_cap": args.g_cap,
        "seeds": seeds,
        "max_weight": args.max_weight,
        "budget": args.budget,
        "per_seed": per_seed,
        "medians": medians,
    }
    _write_json(out / "compare.json", result)
    print(f"wrote {out / 'compare.json'} (medians: {json.dumps(medians, sort_keys=True)})")
    return 0


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--force", action="store_true", help="overwrite existing outputs")


def _add_nm(p: argparse.ArgumentParser) -> None:
    p.add_argument("-n", type=int, required=True, help="variable nodes")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("-m", type=int, help="check nodes")
    group.add_argument("--rate", type=float, help="code rate; m = round(n*(1-rate))")
    p.add_argument("--d-v", type=int, default=4, help="variable-node degree")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecpeg",
        description="LDPC construction and sampling-security analysis",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code and write it as alist")
    p.add_argument("--kind", choices=("peg", "ecpeg"), default="ecpeg")
    _add_nm(p)
    p.add_argument("--g-cap", type=int, default=10, help="target girth cap (ecpeg)")
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("analyze", help="cycle census of an existing code")
    p.add_argument("--alist", required=True)
    p.add_argument("--g-max", type=int, default=8, help="largest cycle length to count")
    p.add_argument("--allow-large", action="store_true", help="permit g-max above 10")
    _add_out(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("sample-sets", help="greedy cycle covers and sample sets")
    p.add_argument("--alist", required=True)
    p.add_argument("--g-cap", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)
    p.set_defaults(func=_cmd_sample_sets)

    p = sub.add_parser("stopsets", help="enumerate small stopping sets")
    p.add_argument("--alist", required=True)
    p.add_argument("--max-weight", type=int, required=True)
    p.add_argument("--budget", type=int, help="search-node budget; completed weights only")
    _add_out(p)
    p.set_defaults(func=_cmd_stopsets)

    p = sub.add_parser("failure-curves", help="failure probability vs sample count")
    p.add_argument("--catalog", required=True, help="catalog.json from stopsets")
    p.add_argument("--family", required=True, help="family.json from sample-sets")
    p.add_argument("--weights", help="erasure weights, e.g. 9,10 (default: two smallest)")
    p.add_argument("--samples", required=True, help="sample counts, e.g. 1-30")
    p.add_argument("--trials", type=int, default=0, help="Monte-Carlo trials (0 = exact only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--overlay", action="store_true", help="add published-ensemble rows")
    _add_out(p)
    p.set_defaults(func=_cmd_failure_curves)

    p = sub.add_parser("compare", help="PEG vs entropy-constrained PEG, several seeds")
    _add_nm(p)
    p.add_argument("--g-cap", type=int, default=10)
    p.add_argument("--seeds", default="0,1,2,3,4", help="e.g. 0-4 or 0,7,13")
    p.add_argument("--max-weight", type=int, default=0, help="also enumerate stopping sets")
    p.add_argument("--budget", type=int, default=2_000_000)
    _add_out(p)
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
