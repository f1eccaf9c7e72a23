"""Result files: sweep CSV, full JSON, per-cell histogram CSV, and INI sweep configs."""

from __future__ import annotations

import configparser
import csv
import io
import json
from dataclasses import replace
from pathlib import Path
from typing import Optional

import numpy as np

from .centrality import MEASURE_ORDER, Measure
from .distfit import curve_points
from .epidemic import DistanceHistogram
from .experiment import CellResult, ExperimentConfig, ExperimentResult

CSV_COLUMNS = (
    "beta",
    "measure",
    "L_mean",
    "C_mean",
    "S1",
    "S2",
    "S3",
    "peak_distance",
    "peak_count",
    "gamma_a",
    "gamma_b",
    "unreachable_frac",
    "trials",
    "seed",
)

CURVE_STEP = 0.1


class OutputError(OSError):
    pass


def fmt(x) -> str:
    """Six significant digits; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".6g")


def r6(x) -> Optional[float]:
    return None if x is None else float(format(float(x), ".6g"))


def written_gamma(g):
    """Gamma parameters as written to disk; curves and plots derive from these
    so a result reloaded from JSON reproduces them exactly."""
    if g is None:
        return None
    return replace(g, shape=r6(g.shape), scale=r6(g.scale))


def _write(path: str | Path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _csv_row(c: CellResult) -> list[str]:
    g = c.gamma
    return [
        fmt(c.beta),
        c.measure.value,
        fmt(c.L_mean),
        fmt(c.C_mean),
        fmt(c.S1),
        fmt(c.S2),
        fmt(c.S3),
        fmt(c.peak_distance),
        fmt(c.peak_count),
        fmt(g.shape if g else None),
        fmt(g.scale if g else None),
        fmt(c.unreachable_frac),
        fmt(c.trials),
        fmt(c.seed),
    ]


def results_csv(result: ExperimentResult | None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for c in result.cells if result is not None else ():
        w.writerow(_csv_row(c))
    return buf.getvalue()


def emit_csv(result: ExperimentResult | None, path: str | Path) -> None:
    _write(path, results_csv(result))


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def curve_grid(max_distance: int) -> list[float]:
    steps = int(round((max_distance + 1) / CURVE_STEP))
    return [round(CURVE_STEP * i, 10) for i in range(1, steps + 1)]


def cell_to_dict(c: CellResult) -> dict:
    g = c.gamma
    d = {
        "beta": r6(c.beta),
        "measure": c.measure.value,
        "trials": c.trials,
        "seed": c.seed,
        "L_mean": r6(c.L_mean),
        "C_mean": r6(c.C_mean),
        "S1": r6(c.S1),
        "S2": r6(c.S2),
        "S3": r6(c.S3),
        "disconnected_frac": r6(c.disconnected_frac),
        "peak_distance": c.peak_distance,
        "peak_count": c.peak_count,
        "unreachable_total": c.histogram.unreachable_total,
        "unreachable_frac": r6(c.unreachable_frac),
        "survivors_total": c.survivors_total,
        "histogram": {str(k): v for k, v in sorted(c.histogram.counts.items())},
        "gamma": None,
        "curve": [],
    }
    if g is not None:
        d["gamma"] = {
            "shape": r6(g.shape),
            "scale": r6(g.scale),
            "log_likelihood": r6(g.log_likelihood),
            "iterations": g.iterations,
            "method": g.method,
            "shape_below_one": g.shape_below_one,
        }
        grid = curve_grid(c.histogram.max_distance)
        d["curve"] = [[r6(x), r6(y)] for x, y in curve_points(written_gamma(g), grid)]
    return d


def result_to_dict(result: ExperimentResult) -> dict:
    refs = result.refs
    return {
        "config": result.config.to_dict(),
        "fingerprint": result.config.fingerprint(),
        "references": {k: r6(v) for k, v in vars(refs).items()},
        "cells": [cell_to_dict(c) for c in result.cells],
    }


def results_json(result: ExperimentResult) -> str:
    return json.dumps(result_to_dict(result), indent=2, sort_keys=True) + "\n"


def emit_json(result: ExperimentResult, path: str | Path) -> None:
    _write(path, results_json(result))


def read_json(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    for cell in data.get("cells", []):
        cell["histogram"] = {int(k): v for k, v in cell["histogram"].items()}
    return data


def histogram_csv(h: DistanceHistogram, fingerprint: str = "") -> str:
    lines = [
        f"# trials={h.trials}",
        f"# unreachable_total={h.unreachable_total}",
        f"# config={fingerprint}",
        "distance,count",
    ]
    lines.extend(f"{d},{c}" for d, c in sorted(h.counts.items()))
    return "\n".join(lines) + "\n"


def read_histogram_csv(path: str | Path) -> DistanceHistogram:
    meta = {}
    counts = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif line and line != "distance,count":
            d, c = line.split(",")
            counts[int(d)] = int(c)
    return DistanceHistogram(counts, int(meta.get("trials", 0)), int(meta.get("unreachable_total", 0)))


def parse_measures(text: str) -> tuple[Measure, ...]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if items == ["all"]:
        return MEASURE_ORDER
    return tuple(Measure.parse(t) for t in items)


def parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


_CONFIG_KEYS = {
    "n": int,
    "k": int,
    "betas": parse_floats,
    "measures": parse_measures,
    "isolation_fraction": float,
    "trials": int,
    "master_seed": int,
    "reference_mode": str,
    "fit_method": str,
}


def load_sweeps(path: str | Path) -> dict[str, dict]:
    """Parse an INI file of ``key = value`` sweeps.

    ``[defaults]`` applies to every ``[sweep NAME]`` section. Returns the raw
    keyword dictionaries keyed by sweep name so callers can layer overrides.
    """
    cp = configparser.ConfigParser(default_section="defaults", interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    sweeps = {}
    for section in cp.sections():
        kind, _, name = section.partition(" ")
        if kind != "sweep" or not name.strip():
            raise ValueError(f"{path}: unexpected section [{section}]; use [sweep NAME]")
        kw = {}
        for key, raw in cp.items(section):
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}: [{section}] unknown key {key!r}")
            kw[key] = _CONFIG_KEYS[key](raw.strip())
        sweeps[name.strip()] = kw
    return sweeps


def config_from_kwargs(kw: dict) -> ExperimentConfig:
    missing = {"n", "k", "betas"} - kw.keys()
    if missing:
        raise ValueError(f"sweep is missing required keys: {', '.join(sorted(missing))}")
    return ExperimentConfig(**kw)


def result_from_dict(data: dict) -> ExperimentResult:
    """Rebuild a result from :func:`result_to_dict` output (six-digit precision)."""
    from .distfit import GammaParams
    from .metrics import References

    cfg = data["config"]
    config = ExperimentConfig(
        n=cfg["n"],
        k=cfg["k"],
        betas=tuple(cfg["betas"]),
        measures=tuple(cfg["measures"]),
        isolation_fraction=cfg["isolation_fraction"],
        trials=cfg["trials"],
        master_seed=cfg["master_seed"],
        reference_mode=cfg["reference_mode"],
        fit_method=cfg["fit_method"],
    )
    result = ExperimentResult(config, References(**data["references"]))
    for c in data["cells"]:
        g = c["gamma"]
        gamma = None
        if g is not None:
            gamma = GammaParams(
                g["shape"], g["scale"], log_likelihood=g["log_likelihood"],
                iterations=g["iterations"], method=g["method"],
            )
        hist = DistanceHistogram(
            {int(k): v for k, v in c["histogram"].items()}, c["trials"], c["unreachable_total"]
        )
        result.cells.append(
            CellResult(
                beta=c["beta"],
                measure=Measure.parse(c["measure"]),
                trials=c["trials"],
                L_mean=c["L_mean"],
                C_mean=c["C_mean"],
                S1=c["S1"],
                S2=c["S2"],
                S3=c["S3"],
                disconnected_frac=c["disconnected_frac"],
                histogram=hist,
                survivors_total=c["survivors_total"],
                peak_distance=c["peak_distance"],
                peak_count=c["peak_count"],
                gamma=gamma,
                seed=c["seed"],
            )
        )
    return result
