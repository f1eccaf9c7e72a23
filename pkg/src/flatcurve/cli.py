"""Command-line entry point: ``flatcurve <subcommand> [flags]``.

Exit codes: 0 success, 2 usage error, 3 runtime or convergence failure,
4 file I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .centrality import ConvergenceError, Measure, compute_scores, rank_top_fraction
from .distfit import FitError
from .epidemic import EpidemicError, isolate, spread_from
from .experiment import ExperimentError, compare_flattening, default_workers, run_experiment
from .generators import WsParams, watts_strogatz
from .graph import GraphError, read_edgelist, write_edgelist
from .io import (
    OutputError,
    config_from_kwargs,
    emit_csv,
    emit_json,
    fmt,
    load_sweeps,
    parse_floats,
    parse_measures,
    result_from_dict,
    read_json,
)
from .metrics import reference_values, structural_metrics
from .plot import emit_plot
from .seeding import make_rng

log = logging.getLogger("flatcurve")

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_IO = 0, 2, 3, 4

SUBCOMMANDS = ("generate", "metrics", "centrality", "spread", "experiment", "plot")


class UsageError(Exception):
    pass


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1), got {text}")
    return value


def _measure(text: str) -> str:
    return Measure.parse(text).value


def _measures(text: str) -> str:
    return ",".join(m.value for m in parse_measures(text))


def _betas(text: str) -> str:
    return ",".join(format(b, "g") for b in parse_floats(text))


# (flag, dest, type, default, help); order fixes the rendered argv
_GRAPH_FLAGS = [
    ("--n", "n", int, 100, "number of nodes"),
    ("--k", "k", int, 6, "mean degree (even)"),
    ("--beta", "beta", float, 0.1, "rewiring probability"),
    ("--seed", "seed", int, 42, "RNG seed"),
]
_FLAGS: dict[str, list] = {
    "generate": _GRAPH_FLAGS + [("--out", "out", str, "", "edge-list file (default stdout)")],
    "metrics": _GRAPH_FLAGS
    + [
        ("--graph", "graph", str, "", "read this edge list instead of generating"),
        ("--refs", "refs", str, "analytic", "reference mode: analytic | empirical"),
    ],
    "centrality": _GRAPH_FLAGS
    + [
        ("--centrality", "centrality", _measure, "degree", "measure name"),
        ("--isolate", "isolate", _fraction, 0.15, "fraction to select"),
    ],
    "spread": _GRAPH_FLAGS
    + [
        ("--source", "source", int, 0, "seed node (id in the intact graph)"),
        ("--centrality", "centrality", _measure, "none", "isolation measure"),
        ("--isolate", "isolate", _fraction, 0.0, "isolated fraction"),
    ],
    "experiment": [
        ("--config", "config", str, "", "INI sweep file"),
        ("--sweep", "sweep", str, "", "sweep section name in --config"),
        ("--n", "n", int, 100, "number of nodes"),
        ("--k", "k", int, 6, "mean degree (even)"),
        ("--beta", "beta", _betas, "0.025,0.05,0.1,0.2,0.3", "comma-separated rewiring probabilities"),
        ("--isolate", "isolate", _fraction, 0.0, "isolated fraction for centrality cells"),
        ("--centrality", "centrality", _measures, "none", "comma-separated measures, or 'all'"),
        ("--trials", "trials", int, 100, "Monte-Carlo trials per cell"),
        ("--seed", "seed", int, 42, "master seed"),
        ("--refs", "refs", str, "analytic", "reference mode: analytic | empirical"),
        ("--fit", "fit", str, "mle", "gamma fit: mle | mom"),
        ("--workers", "workers", int, 0, "worker processes (0: $FLATCURVE_WORKERS or 1)"),
        ("--out", "out", str, "results.csv", "CSV output path"),
        ("--json", "json", str, "", "JSON output path"),
        ("--plot", "plot", str, "", "SVG output directory or file stem"),
    ],
    "plot": [
        ("--json", "json", str, "results.json", "JSON written by 'experiment'"),
        ("--out", "out", str, "plots", "SVG output directory or file stem"),
    ],
}


@dataclass(frozen=True)
class CliInvocation:
    subcommand: str
    options: dict = field(default_factory=dict)
    verbose: int = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flatcurve", description=__doc__.splitlines()[0], allow_abbrev=False)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, allow_abbrev=False)
        for flag, dest, typ, default, help_ in _FLAGS[name]:
            sp.add_argument(flag, dest=dest, type=typ, default=default, help=f"{help_} (default: {default})")
    return parser


def _validate(sub: str, opts: dict) -> None:
    if opts.get("refs", "analytic") not in ("analytic", "empirical"):
        raise UsageError(f"--refs must be analytic or empirical, got {opts['refs']!r}")
    if opts.get("fit", "mle") not in ("mle", "mom"):
        raise UsageError(f"--fit must be mle or mom, got {opts['fit']!r}")
    if sub in ("centrality", "spread") and opts["centrality"] == "none" and opts["isolate"] > 0:
        if sub == "spread":
            raise UsageError("--isolate > 0 conflicts with --centrality none")
        raise UsageError("--centrality none has no scores")
    if sub == "experiment":
        measures = opts["centrality"].split(",")
        if opts["isolate"] > 0 and measures == ["none"]:
            raise UsageError("--isolate > 0 conflicts with --centrality none")
        if opts["sweep"] and not opts["config"]:
            raise UsageError("--sweep requires --config")
        if opts["trials"] < 1:
            raise UsageError("--trials must be >= 1")
        if opts["workers"] < 0:
            raise UsageError("--workers must be >= 0")


def parse_cli(argv: Sequence[str]) -> CliInvocation:
    ns = build_parser().parse_args(list(argv))
    opts = {dest: getattr(ns, dest) for _, dest, *_ in _FLAGS[ns.subcommand]}
    _validate(ns.subcommand, opts)
    return CliInvocation(ns.subcommand, opts, ns.verbose)


def render_cli(inv: CliInvocation) -> list[str]:
    argv = ["-v"] * inv.verbose + [inv.subcommand]
    for flag, dest, *_ in _FLAGS[inv.subcommand]:
        value = inv.options[dest]
        argv += [flag, value if isinstance(value, str) else repr(value)]
    return argv


def _ws_graph(o: dict):
    params = WsParams(o["n"], o["k"], o["beta"], o["seed"])
    return watts_strogatz(params, make_rng(o["seed"]))


def _cmd_generate(o: dict) -> None:
    g = _ws_graph(o)
    if o["out"]:
        try:
            write_edgelist(g, o["out"])
        except OSError as exc:
            raise OutputError(f"cannot write {o['out']}: {exc}") from exc
    else:
        print(f"# nodes {g.n}")
        for u, v in g.edges():
            print(u, v)


def _cmd_metrics(o: dict) -> None:
    if o["graph"]:
        try:
            g = read_edgelist(o["graph"])
        except OSError as exc:
            raise OutputError(f"cannot read {o['graph']}: {exc}") from exc
        k = round(2 * g.num_edges / g.n)
        k += k % 2
    else:
        g, k = _ws_graph(o), o["k"]
    refs = reference_values(g.n, k, o["refs"], seed=o["seed"])
    m = structural_metrics(g, refs)
    sw = m.small_worldness
    print(f"nodes\t{g.n}\nedges\t{g.num_edges}")
    print(f"C\t{m.clustering:.6g}")
    print(f"L\t{fmt(m.path_length.value) if m.path_length.defined else 'undefined'}")
    print(f"disconnected_frac\t{m.path_length.disconnected_fraction:.6g}")
    for name in ("s1", "s2", "s3"):
        v = getattr(sw, name)
        print(f"{name.upper()}\t{'undefined' if v is None else format(v, '.6g')}")


def _cmd_centrality(o: dict) -> None:
    g = _ws_graph(o)
    sc = compute_scores(g, Measure.parse(o["centrality"]))
    ranking = rank_top_fraction(sc, o["isolate"])
    print("rank\tnode\tscore\tselected")
    for r, node in enumerate(ranking.order, 1):
        print(f"{r}\t{node}\t{sc.scores[node]:.10g}\t{int(node in ranking.selected)}")


def _cmd_spread(o: dict) -> None:
    g = _ws_graph(o)
    measure = Measure.parse(o["centrality"])
    selected = frozenset()
    if measure is not Measure.NONE and o["isolate"] > 0:
        selected = rank_top_fraction(compute_scores(g, measure), o["isolate"]).selected
    if not 0 <= o["source"] < g.n:
        raise UsageError(f"--source {o['source']} out of range for {g.n} nodes")
    if o["source"] in selected:
        raise UsageError(f"--source {o['source']} is among the isolated nodes")
    iso = isolate(g, selected)
    levels = spread_from(iso.graph, iso.old_to_new[o["source"]])
    print("iteration\tnew_infections")
    for d, c in enumerate(levels, 1):
        print(f"{d}\t{c}")
    print(f"# unreachable\t{iso.graph.n - 1 - sum(levels)}")


def _experiment_config(o: dict):
    kw = {}
    if o["config"]:
        sweeps = load_sweeps(o["config"])
        if o["sweep"]:
            if o["sweep"] not in sweeps:
                raise UsageError(f"sweep {o['sweep']!r} not found in {o['config']}")
            kw = dict(sweeps[o["sweep"]])
        elif len(sweeps) == 1:
            kw = dict(next(iter(sweeps.values())))
        else:
            raise UsageError(f"{o['config']} has several sweeps; choose one with --sweep")
    # flags given explicitly on the command line override the file
    explicit = o.get("_explicit", set())
    mapping = {
        "n": ("n", lambda v: v),
        "k": ("k", lambda v: v),
        "beta": ("betas", parse_floats),
        "isolate": ("isolation_fraction", lambda v: v),
        "centrality": ("measures", parse_measures),
        "trials": ("trials", lambda v: v),
        "seed": ("master_seed", lambda v: v),
        "refs": ("reference_mode", lambda v: v),
        "fit": ("fit_method", lambda v: v),
    }
    for dest, (key, conv) in mapping.items():
        if not o["config"] or dest in explicit or key not in kw:
            kw[key] = conv(o[dest])
    return config_from_kwargs(kw)


def _cmd_experiment(o: dict) -> None:
    try:
        config = _experiment_config(o)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    workers = o["workers"] or default_workers()
    log.info("running %d cells x %d trials with %d worker(s)",
             len(config.betas) * len(config.measures), config.trials, workers)
    result = run_experiment(config, workers=workers)
    emit_csv(result, o["out"])
    if o["json"]:
        emit_json(result, o["json"])
    if o["plot"]:
        emit_plot(result, o["plot"])
    print(Path(o["out"]).read_text(), end="")
    if Measure.NONE in config.measures and len(config.measures) >= 3:
        for row in compare_flattening(result):
            ranks = " < ".join(f"{m.value}({row.peaks[m]})" for m in row.ranking)
            print(f"# beta={row.beta:g}: {ranks}")


def _cmd_plot(o: dict) -> None:
    result = result_from_dict(read_json(o["json"]))
    for path in emit_plot(result, o["out"]):
        print(path)


_COMMANDS = {
    "generate": _cmd_generate,
    "metrics": _cmd_metrics,
    "centrality": _cmd_centrality,
    "spread": _cmd_spread,
    "experiment": _cmd_experiment,
    "plot": _cmd_plot,
}


def _explicit_dests(argv: Sequence[str], sub: str) -> set[str]:
    flags = {flag: dest for flag, dest, *_ in _FLAGS[sub]}
    return {flags[a.split("=")[0]] for a in argv if a.split("=")[0] in flags}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        inv = parse_cli(argv)
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.WARNING - 10 * min(inv.verbose, 2), format="%(levelname)s %(message)s"
    )
    opts = dict(inv.options, _explicit=_explicit_dests(argv, inv.subcommand))
    try:
        _COMMANDS[inv.subcommand](opts)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OutputError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (GraphError, EpidemicError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, FitError, ExperimentError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
