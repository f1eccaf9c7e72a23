"""Monte-Carlo sweeps over rewiring probability and isolation measure."""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from .centrality import MEASURE_ORDER, Measure
from .distfit import FitError, GammaParams, fit_gamma
from .epidemic import DistanceHistogram, aggregate, check_isolation, peak, spread_after_isolation
from .generators import WsParams, watts_strogatz
from .metrics import References, reference_values, structural_metrics
from .seeding import float_key, make_rng, mix

WORKERS_ENV = "FLATCURVE_WORKERS"

# measure ordinals are fixed so seeds do not depend on the order of a sweep
_MEASURE_KEY = {m: i for i, m in enumerate(MEASURE_ORDER)}


class ExperimentError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    k: int
    betas: tuple[float, ...]
    measures: tuple[Measure, ...] = (Measure.NONE,)
    isolation_fraction: float = 0.0
    trials: int = 100
    master_seed: int = 0
    reference_mode: str = "analytic"
    fit_method: str = "mle"

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(
            self,
            "measures",
            tuple(Measure.parse(m) if isinstance(m, str) else m for m in self.measures),
        )
        for b in self.betas:
            WsParams(self.n, self.k, b)
        if not 0.0 <= self.isolation_fraction < 1.0:
            raise ValueError(
                f"isolation fraction must lie in [0, 1), got {self.isolation_fraction}"
            )
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.reference_mode not in ("analytic", "empirical"):
            raise ValueError(f"unknown reference mode {self.reference_mode!r}")
        if self.fit_method not in ("mle", "mom"):
            raise ValueError(f"unknown fit method {self.fit_method!r}")
        if len(set(self.measures)) != len(self.measures):
            raise ValueError("duplicate measures in sweep")
        if len(set(self.betas)) != len(self.betas):
            raise ValueError("duplicate beta values in sweep")

    def fraction_for(self, measure: Measure) -> float:
        return 0.0 if measure is Measure.NONE else self.isolation_fraction

    def to_dict(self) -> dict:
        d = asdict(self)
        d["measures"] = [m.value for m in self.measures]
        d["betas"] = list(self.betas)
        return d

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def trial_seed(master_seed: int, beta: float, trial: int) -> int:
    return mix(master_seed, float_key(beta), trial)


@dataclass
class CellResult:
    beta: float
    measure: Measure
    trials: int
    L_mean: Optional[float]
    C_mean: float
    S1: Optional[float]
    S2: Optional[float]
    S3: Optional[float]
    disconnected_frac: float
    histogram: DistanceHistogram
    survivors_total: int
    peak_distance: Optional[int]
    peak_count: int
    gamma: Optional[GammaParams]
    seed: int
    wall_time: float = 0.0

    @property
    def unreachable_frac(self) -> float:
        susceptible = self.survivors_total - self.trials
        if susceptible <= 0:
            return 0.0
        return self.histogram.unreachable_total / susceptible


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    refs: References
    cells: list[CellResult] = field(default_factory=list)

    def cell(self, beta: float, measure: Measure | str) -> CellResult:
        measure = Measure.parse(measure) if isinstance(measure, str) else measure
        for c in self.cells:
            if c.beta == beta and c.measure is measure:
                return c
        raise KeyError((beta, measure.value))


@dataclass
class _TrialRecord:
    clustering: float
    path_length: Optional[float]
    disconnected_frac: float
    s: tuple[Optional[float], Optional[float], Optional[float]]
    outcomes: dict  # Measure -> (histogram, survivors)
    seconds: float


def _run_unit(config: ExperimentConfig, refs: References, beta: float, trial: int) -> _TrialRecord:
    start = time.perf_counter()
    rng = make_rng(trial_seed(config.master_seed, beta, trial))
    g = watts_strogatz(WsParams(config.n, config.k, beta), rng)
    draw = float(rng.random())
    sm = structural_metrics(g, refs)
    outcomes = {}
    for measure in config.measures:
        out = spread_after_isolation(g, measure, config.fraction_for(measure), draw)
        outcomes[measure] = (out.histogram, out.survivors)
    sw = sm.small_worldness
    return _TrialRecord(
        sm.clustering,
        sm.path_length.value,
        sm.path_length.disconnected_fraction,
        (sw.s1, sw.s2, sw.s3),
        outcomes,
        time.perf_counter() - start,
    )


def _run_unit_star(args):
    return _run_unit(*args)


def _mean_or_none(values) -> Optional[float]:
    if not values or any(v is None for v in values):
        return None
    return math.fsum(values) / len(values)


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    return max(1, workers)


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> ExperimentResult:
    """Run every (beta, measure) cell of the sweep.

    One WS graph per (beta, trial) is shared by all measures of that beta, so
    measures are compared on identical graphs and seed draws. Output does not
    depend on ``workers``.
    """
    workers = default_workers() if workers is None else max(1, int(workers))
    for m in config.measures:
        check_isolation(m, config.fraction_for(m))
    refs = reference_values(
        config.n, config.k, config.reference_mode, seed=mix(config.master_seed, 0x5EF)
    )
    units = [(config, refs, b, t) for b in config.betas for t in range(config.trials)]
    if workers == 1 or len(units) == 1:
        records = [_run_unit_star(u) for u in units]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_unit_star, units, chunksize=max(1, len(units) // (8 * workers))))

    result = ExperimentResult(config, refs)
    for bi, beta in enumerate(config.betas):
        recs = records[bi * config.trials : (bi + 1) * config.trials]
        L = [r.path_length for r in recs if r.path_length is not None]
        C = [r.clustering for r in recs]
        s_means = [_mean_or_none([r.s[i] for r in recs]) for i in range(3)]
        disc = math.fsum(r.disconnected_frac for r in recs) / len(recs)
        seconds = math.fsum(r.seconds for r in recs)
        for measure in config.measures:
            try:
                hist = aggregate(r.outcomes[measure][0] for r in recs)
                survivors = sum(r.outcomes[measure][1] for r in recs)
                if hist.total:
                    pk_d, pk_c = peak(hist)
                else:
                    pk_d, pk_c = None, 0
                gamma = None
                try:
                    gamma = fit_gamma(*hist.samples(), method=config.fit_method)
                except FitError:
                    pass
            except Exception as exc:
                raise ExperimentError(f"cell beta={beta}, measure={measure.value}: {exc}") from exc
            result.cells.append(
                CellResult(
                    beta=beta,
                    measure=measure,
                    trials=config.trials,
                    L_mean=_mean_or_none(L),
                    C_mean=math.fsum(C) / len(C),
                    S1=s_means[0],
                    S2=s_means[1],
                    S3=s_means[2],
                    disconnected_frac=disc,
                    histogram=hist,
                    survivors_total=survivors,
                    peak_distance=pk_d,
                    peak_count=pk_c,
                    gamma=gamma,
                    seed=config.master_seed,
                    wall_time=seconds,
                )
            )
    return result


@dataclass(frozen=True)
class FlatteningRow:
    beta: float
    baseline_peak: int
    ranking: tuple[Measure, ...]  # ascending peak count, ties by table order
    peaks: dict
    reduction: dict  # Measure -> peak / baseline peak


def compare_flattening(result: ExperimentResult) -> list[FlatteningRow]:
    rows = []
    for beta in result.config.betas:
        cells = [c for c in result.cells if c.beta == beta]
        base = [c for c in cells if c.measure is Measure.NONE]
        if not base:
            raise ExperimentError(f"no 'none' baseline cell at beta={beta}")
        if len(cells) < 3:
            raise ExperimentError(f"need at least two centrality cells at beta={beta}")
        b = base[0].peak_count
        peaks = {c.measure: c.peak_count for c in cells}
        ranking = tuple(sorted(peaks, key=lambda m: (peaks[m], _MEASURE_KEY[m])))
        reduction = {m: (p / b if b else float("nan")) for m, p in peaks.items()}
        rows.append(FlatteningRow(beta, b, ranking, peaks, reduction))
    return rows


def all_measures() -> tuple[Measure, ...]:
    return MEASURE_ORDER
