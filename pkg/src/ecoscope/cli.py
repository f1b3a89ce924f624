"""Command-line front end.

Exit codes: 0 success (no alerts, or alerts confirmed), 1 alerts raised and not
confirmed, 2 usage or configuration error. Results go to stdout, diagnostics
and prompts to stderr.

``--format structured`` prints one JSON document per command, keys sorted,
two-space indent, floats rounded to 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import abandonment, advisor, depgraph, incidents, popularity, registry, squatting
from .errors import EcoscopeError, InsufficientTailError
from .snapshot import Ecosystem, read_snapshot, serialize_snapshot

SNAPSHOT_ENV = "ECOSCOPE_SNAPSHOT"


class UsageError(Exception):
    pass


def _num(x):
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _num(obj)


def dump_structured(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def _load_snapshot(args):
    path = args.snapshot or os.environ.get(SNAPSHOT_ENV)
    if not path:
        raise UsageError(f"a snapshot is required: pass --snapshot or set {SNAPSHOT_ENV}")
    try:
        return read_snapshot(path)
    except OSError as exc:
        raise UsageError(f"cannot read snapshot {path}: {exc.strerror or exc}") from None
    except EcoscopeError as exc:
        raise UsageError(f"invalid snapshot {path}: {exc}") from None


def _policy(args):
    overrides = {
        "obscure_download_threshold": args.obscure_threshold,
        "popularity_ratio_threshold": args.ratio_threshold,
        "max_alert_distance": args.max_distance,
        "abandonment_window_days": args.window_days,
    }
    try:
        if args.policy:
            return advisor.AdvisorPolicy.from_file(args.policy, **overrides)
        return advisor.AdvisorPolicy(**{k: v for k, v in overrides.items() if v is not None})
    except OSError as exc:
        raise UsageError(f"cannot read policy {args.policy}: {exc.strerror or exc}") from None
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid policy: {exc}") from None


# --- commands ----------------------------------------------------------------


def cmd_ingest(args, out):
    if args.config:
        try:
            configs = registry.load_registry_config(args.config)
        except (OSError, ValueError, TypeError) as exc:
            raise UsageError(f"invalid registry config {args.config}: {exc}") from None
    else:
        configs = registry.DEFAULT_CONFIGS
    eco = Ecosystem.parse(args.ecosystem)
    names = list(args.names)
    if args.names_file:
        with open(args.names_file, encoding="utf-8") as fh:
            names += [line.strip() for line in fh if line.strip() and not line.startswith("#")]
    if not names:
        raise UsageError("ingest needs package names (positional or --names-file)")
    client = registry.make_client(eco, configs[eco])
    snap = registry.build_snapshot(client, names)
    text = serialize_snapshot(snap)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(snap)} records to {args.out}", file=sys.stderr)
    else:
        out.write(text)
    return 0


def graph_stats_payload(snap, prune=True):
    graph = depgraph.build_graph(snap)
    before = len(graph)
    if prune:
        graph, _ = depgraph.prune_disconnected(graph)
    stats = depgraph.graph_summary(graph)
    return {
        "ecosystem": snap.ecosystem.value,
        "nodes_before_prune": before,
        "disconnected_removed": stats.disconnected_removed,
        "node_count": stats.node_count,
        "avg_outdegree": stats.avg_outdegree,
        "avg_tree_size": stats.avg_tree_size,
        "avg_tree_depth": stats.avg_tree_depth,
        "unresolved": [list(p) for p in graph.unresolved],
        "closure_size_cdf": [list(p) for p in depgraph.closure_size_distribution(graph)],
    }


def cmd_graph_stats(args, out):
    data = graph_stats_payload(_load_snapshot(args), prune=not args.keep_disconnected)
    if args.format == "structured":
        out.write(dump_structured(data))
        return 0
    out.write(f"ecosystem            {data['ecosystem']}\n"
              f"nodes (before prune) {data['nodes_before_prune']}\n"
              f"disconnected removed {data['disconnected_removed']}\n"
              f"nodes                {data['node_count']}\n"
              f"avg outdegree        {data['avg_outdegree']:.2f}\n"
              f"avg tree size        {data['avg_tree_size']:.2f}\n"
              f"avg tree depth       {data['avg_tree_depth']:.2f}\n"
              f"unresolved deps      {len(data['unresolved'])}\n")
    return 0


def popularity_payload(snap, k=20, threshold=1000, xmin=popularity.DEFAULT_XMIN):
    sample = popularity.DownloadSample.from_snapshot(snap)
    try:
        fit = popularity.fit_power_law(sample, xmin)
        fit_data = {"alpha": fit.alpha, "xmin": fit.xmin, "n_tail": fit.n_tail}
    except InsufficientTailError:
        fit_data = None
    return {
        "ecosystem": snap.ecosystem.value,
        "packages": len(snap),
        "total_downloads": sum(r.downloads for r in snap),
        "top_k": k,
        "top_packages": [list(p) for p in popularity.top_packages(snap, k)],
        "top_share": popularity.top_share(snap, k),
        "threshold": threshold,
        "count_at_least": popularity.count_at_least(snap, threshold),
        "xmin": xmin,
        "fit": fit_data,
        "ccdf": [list(p) for p in popularity.ccdf(sample)] if len(sample) else [],
    }


def cmd_popularity(args, out):
    snap = _load_snapshot(args)
    data = popularity_payload(snap, args.top, args.threshold, args.xmin)
    if args.format == "structured":
        out.write(dump_structured(data))
        return 0
    out.write(f"packages: {data['packages']}, total downloads: {data['total_downloads']}\n")
    out.write(f"top {data['top_k']} share: {100 * data['top_share']:.2f}%\n")
    for name, dl in data["top_packages"]:
        out.write(f"  {dl:>14}  {name}\n")
    out.write(f"packages with >= {data['threshold']} downloads: {data['count_at_least']}\n")
    fit = data["fit"]
    if fit:
        out.write(f"power-law fit: alpha={fit['alpha']:.3f} (xmin={fit['xmin']:g}, n_tail={fit['n_tail']})\n")
    else:
        out.write(f"power-law fit: fewer than 2 packages with >= {data['xmin']:g} downloads\n")
    return 0


def abandonment_payload(snap, top=10, window_days=abandonment.DEFAULT_WINDOW_DAYS):
    rep = abandonment.abandonment_report(snap, top_n=top, window_days=window_days)
    return {
        "total": rep.total,
        "abandoned": rep.abandoned,
        "fraction": rep.fraction,
        "reference_time": rep.reference_time,
        "window_days": rep.window_days,
        "cumulative_abandoned_downloads": rep.cumulative_abandoned_downloads,
        "top_abandoned": [list(p) for p in rep.top_abandoned],
    }


def cmd_abandonment(args, out):
    data = abandonment_payload(_load_snapshot(args), args.top, args.window_days or abandonment.DEFAULT_WINDOW_DAYS)
    if args.format == "structured":
        out.write(dump_structured(data))
        return 0
    out.write(f"abandoned: {data['abandoned']} of {data['total']} ({100 * data['fraction']:.1f}%), "
              f"no release in {data['window_days']} days\n")
    out.write(f"cumulative downloads of abandoned packages: {data['cumulative_abandoned_downloads']}\n")
    for name, dl in data["top_abandoned"]:
        out.write(f"  {dl:>14}  {name}\n")
    return 0


def squat_scan_payload(snap, max_distance=1, min_length=0):
    pairs = squatting.candidate_pairs(snap.records, max_distance, min_length)
    ranked = squatting.rank_typo_candidates(pairs, snap)
    return {
        "max_distance": max_distance,
        "min_length": min_length,
        "pair_count": len(ranked),
        "candidates": [c.to_dict() for c in ranked],
    }


def _write_candidates(out, candidates):
    for c in candidates:
        out.write(f"  {c['subject']} -> {c['target']}: {c['evidence']}\n")


def cmd_squat_scan(args, out):
    data = squat_scan_payload(_load_snapshot(args), args.max_distance or 1, args.min_length)
    if args.format == "structured":
        out.write(dump_structured(data))
        return 0
    out.write(f"{data['pair_count']} name pairs within distance {data['max_distance']} "
              f"(min length {data['min_length']})\n")
    _write_candidates(out, data["candidates"])
    return 0


def import_squat_payload(snap):
    cands = squatting.import_squat_candidates(snap)
    return {"candidate_count": len(cands), "candidates": [c.to_dict() for c in cands]}


def cmd_import_squat_scan(args, out):
    snap = _load_snapshot(args)
    try:
        data = import_squat_payload(snap)
    except EcoscopeError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "structured":
        out.write(dump_structured(data))
        return 0
    out.write(f"{data['candidate_count']} import-squatting candidates\n")
    _write_candidates(out, data["candidates"])
    return 0


def incidents_payload(records):
    summary = incidents.incident_summary(records)
    return {
        "count": summary.total,
        "median_ttd_days": summary.median_ttd_days,
        "mean_ttd_days": summary.mean_ttd_days,
        "counts": summary.counts,
        "records": [r.to_dict() for r in records],
    }


def cmd_incidents(args, out):
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                records = incidents.read_incidents(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot load incidents from {args.file}: {exc}") from None
    else:
        records = incidents.load_incidents()
    data = incidents_payload(records)
    if args.format == "structured":
        out.write(dump_structured(data))
        return 0
    out.write(f"{data['count']} incidents; time to discovery median {data['median_ttd_days']:g} days, "
              f"mean {data['mean_ttd_days']:.2f} days\n")
    for dim, tally in data["counts"].items():
        parts = ", ".join(f"{k}={v}" for k, v in tally.items())
        out.write(f"  {dim}: {parts}\n")
    for r in records:
        out.write(f"  {r.id:<24} {r.attack_type.value:<10} {r.time_to_discovery_days:g} days\n")
    return 0


def _confirm(args, alerts, subject):
    """Return (exit code, decision). Never touches stdin when --yes is given."""
    if not alerts:
        return 0, "none"
    if args.yes:
        return 0, "confirmed"
    sys.stderr.write(f"Install '{subject}' anyway? [y/N] ")
    sys.stderr.flush()
    answer = sys.stdin.readline()
    if not answer:
        sys.stderr.write("\n")
    if answer.strip().lower() in ("y", "yes"):
        return 0, "confirmed"
    return 1, "declined"


def _report_alerts(args, out, requested, alerts):
    if args.format == "human":
        for a in alerts:
            out.write(f"obscurity alert [{a.kind.value}, {a.severity.value}]: {a.describe()}\n")
        out.flush()
    code, decision = _confirm(args, alerts, requested)
    if args.format == "structured":
        out.write(dump_structured({
            "request": requested,
            "alerts": [a.to_dict() for a in alerts],
            "decision": decision,
        }))
    elif not alerts:
        out.write(f"no alerts for '{requested}'\n")
    return code


def cmd_check(args, out):
    snap = _load_snapshot(args)
    policy = _policy(args)
    index = advisor.PackageIndex(snap)
    alerts = advisor.check_install(index, args.name, policy)
    if snap.ecosystem is Ecosystem.PYPI:
        imports = advisor.check_import(index, args.name, policy)
        if imports and imports[0].kind is advisor.AlertKind.UNKNOWN_PACKAGE:
            alerts = [a for a in alerts if a.kind is not advisor.AlertKind.UNKNOWN_PACKAGE]
        alerts = imports + alerts
    return _report_alerts(args, out, args.name, alerts)


def cmd_check_update(args, out):
    snap = _load_snapshot(args)
    policy = _policy(args)
    rec = advisor.PackageIndex(snap).get(args.name)
    if rec is None:
        alerts = [advisor.Alert(advisor.AlertKind.UNKNOWN_PACKAGE, policy.severity, args.name)]
    else:
        alerts = advisor.check_update(rec, snap.captured_at, policy)
    return _report_alerts(args, out, args.name, alerts)


# --- argument parsing --------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--snapshot", help=f"snapshot file (default: ${SNAPSHOT_ENV})")
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("-v", "--verbose", action="store_true")

    policy = argparse.ArgumentParser(add_help=False)
    policy.add_argument("--policy", help="JSON file with advisor policy fields")
    policy.add_argument("--obscure-threshold", type=int, dest="obscure_threshold")
    policy.add_argument("--ratio-threshold", type=float, dest="ratio_threshold")
    policy.add_argument("--max-distance", type=int, dest="max_distance")
    policy.add_argument("--window-days", type=int, dest="window_days")
    policy.add_argument("--yes", action="store_true", help="confirm any alert without prompting")

    parser = argparse.ArgumentParser(prog="ecoscope", description="Risk analytics for npm/PyPI snapshots.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("ingest", parents=[common], help="build a snapshot from a registry")
    p.add_argument("names", nargs="*")
    p.add_argument("--ecosystem", required=True, choices=[e.value for e in Ecosystem])
    p.add_argument("--names-file")
    p.add_argument("--config", help="registry endpoint config (JSON)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("graph-stats", parents=[common], help="dependency graph metrics")
    p.add_argument("--keep-disconnected", action="store_true")
    p.set_defaults(func=cmd_graph_stats)

    p = sub.add_parser("popularity", parents=[common], help="download concentration and power-law fit")
    p.add_argument("--top", type=int, default=20)
    p.add_argument("--threshold", type=int, default=1000)
    p.add_argument("--xmin", type=float, default=popularity.DEFAULT_XMIN)
    p.set_defaults(func=cmd_popularity)

    p = sub.add_parser("abandonment", parents=[common], help="packages without a release in the window")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--window-days", type=int, dest="window_days")
    p.set_defaults(func=cmd_abandonment)

    p = sub.add_parser("squat-scan", parents=[common], help="similarly named package pairs")
    p.add_argument("--max-distance", type=int, choices=(1, 2), dest="max_distance")
    p.add_argument("--min-length", type=int, default=0)
    p.set_defaults(func=cmd_squat_scan)

    p = sub.add_parser("import-squat-scan", parents=[common], help="PyPI package/module name mismatches")
    p.set_defaults(func=cmd_import_squat_scan)

    p = sub.add_parser("incidents", parents=[common], help="bundled attack incidents and taxonomy counts")
    p.add_argument("--file", help="read incidents from this file instead of the bundled set")
    p.set_defaults(func=cmd_incidents)

    p = sub.add_parser("check", parents=[common, policy], help="obscurity alerts for an install")
    p.add_argument("name")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("check-update", parents=[common, policy], help="obscurity alerts for an update")
    p.add_argument("name")
    p.set_defaults(func=cmd_check_update)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"ecoscope: error: {exc}", file=sys.stderr)
        return 2
    except EcoscopeError as exc:
        print(f"ecoscope: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
