"""End-to-end chaos detection and noise-robustness sweeps.

Three detectors share one calling convention, ``test(series, cfg, seed)``
returning ``(score, verdict)``:

* `zero_one_test`, the 0-1 test on the f_max-subsampled series;
* `ps_test`, the persistence score of KDE images of p-q projections;
* `opn_test`, normalised persistent entropy of the ordinal partition network.

`run_sweep` runs them over a grid of bifurcation parameters, noise colours,
SNRs and trials; `emit_outputs` writes the table and plots.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import dynsys, noise, ordinal, tda, zero_one
from .kde import DEFAULT_SMOOTHING, GridSpec, intensity_field
from .timeseries import TimeSeries

PS_THRESHOLD = (math.sqrt(2) + math.sqrt(2) / 2) / 2
TEST_NAMES = ("zero_one", "ps", "opn")
CSV_HEADER = ("system", "param", "alpha", "snr_db", "trial", "test", "score",
              "verdict", "warnings")

DEFAULT_GRIDS = {
    "lorenz": tuple(np.round(np.linspace(180.3, 181.3, 11), 10)),
    "rossler": tuple(np.round(np.linspace(0.25, 0.55, 13), 10)),
}
# long enough that the subsampled series keeps ~5000 points
DEFAULT_DURATION = {"lorenz": 400.0, "rossler": 12000.0}
DEFAULT_TAU = {"lorenz": 108, "rossler": 170}


class Outcome(NamedTuple):
    score: float
    verdict: str


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to reproduce a sweep.

    ``params=()``, ``duration=None``, ``dt=None`` and ``opn_tau=None`` are
    filled with per-system defaults. SNRs are in dB; ``inf`` means no noise.
    """

    system: str = "lorenz"
    params: tuple = ()
    component: int = 0
    alphas: tuple = (-2.0, -1.0, 0.0, 1.0, 2.0)
    snrs: tuple = (math.inf, 40.0, 35.0, 30.0, 25.0, 20.0)
    trials: int = 1
    seed: int = 0
    tests: tuple = TEST_NAMES
    duration: float | None = None
    dt: float | None = None
    transient: float = 100.0
    # 0-1 test
    n_c: int = 100
    zero_one_mode: str = "correlation"
    zero_one_threshold: float = 0.5
    n_samples: int = 5000
    fs_multiplier: float = 3.0
    fmax_threshold: float = 0.01
    # persistence score
    ps_ensemble: int = 200
    ps_threshold: float = PS_THRESHOLD
    birth_floor: float = tda.DEFAULT_BIRTH_FLOOR
    grid_resolution: int = 128
    grid_padding: float = 0.05
    smoothing: float = DEFAULT_SMOOTHING
    bandwidth_scale: float = 2.0
    # ordinal partition network
    opn_dim: int = 6
    opn_tau: int | None = None
    opn_length: int = 100_000
    entropy_threshold: float = 0.8
    threads: int = 1

    def __post_init__(self):
        system = dynsys.System(self.system).value
        object.__setattr__(self, "system", system)
        for name in ("params", "alphas", "snrs", "tests"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.params:
            object.__setattr__(self, "params", DEFAULT_GRIDS[system])
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))
        object.__setattr__(self, "alphas", tuple(float(v) for v in self.alphas))
        object.__setattr__(self, "snrs", tuple(float(v) for v in self.snrs))
        if self.duration is None:
            object.__setattr__(self, "duration", DEFAULT_DURATION[system])
        if self.dt is None:
            object.__setattr__(self, "dt", dynsys.DEFAULT_DT[system])
        if self.opn_tau is None:
            object.__setattr__(self, "opn_tau", DEFAULT_TAU[system])
        if not self.alphas or not self.snrs:
            raise ValueError("alpha and SNR grids must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        unknown = set(self.tests) - set(TEST_NAMES)
        if unknown or not self.tests:
            raise ValueError(f"tests must be a non-empty subset of {TEST_NAMES}")
        for a in self.alphas:
            noise.NoiseSpec(a, 2)  # range check
        zero_one.Mode(self.zero_one_mode)
        if not 0 < self.fmax_threshold < 1:
            raise ValueError("fmax_threshold must lie in (0, 1)")
        ordinal.EmbeddingParams(self.opn_dim, self.opn_tau)

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.grid_resolution, self.grid_padding)

    def system_params(self, value: float) -> dynsys.SystemParams:
        return dynsys.SystemParams(self.system).with_bifurcation_value(value)

    def replace(self, **changes) -> "SweepConfig":
        return dataclasses.replace(self, **changes)


class SweepRow(NamedTuple):
    system: str
    param: float
    alpha: float
    snr_db: float
    trial: int
    test: str
    score: float
    verdict: str
    warnings: str = ""


@dataclass(frozen=True)
class SweepResult:
    rows: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.rows)

    def select(self, **match) -> list:
        return [r for r in self.rows
                if all(getattr(r, k) == v for k, v in match.items())]


# ------------------------------------------------------------------- tests

def _subsampled(series: TimeSeries, cfg: SweepConfig) -> TimeSeries:
    sub = zero_one.subsample_fmax(series, cfg.fs_multiplier, cfg.fmax_threshold)
    if len(sub) > cfg.n_samples:
        sub = sub.head(cfg.n_samples)
    elif len(sub) < cfg.n_samples:
        warnings.warn(f"only {len(sub)} samples after subsampling "
                      f"(wanted {cfg.n_samples})", RuntimeWarning)
    return sub


def zero_one_test(series: TimeSeries, cfg: SweepConfig = SweepConfig(), seed=None) -> Outcome:
    """Median K_c of the subsampled series; chaotic at or above the threshold."""
    sub = _subsampled(series, cfg)
    res = zero_one.zero_one_score(sub, n_c=cfg.n_c, seed=seed, mode=cfg.zero_one_mode)
    verdict = "chaotic" if res.score >= cfg.zero_one_threshold else "periodic"
    return Outcome(res.score, verdict)


def ps_diagram(series, c: float, cfg: SweepConfig = SweepConfig()) -> tda.PersistenceDiagram:
    """Peak persistence diagram of the density image of one p-q projection."""
    pts = zero_one.pq_project(series, c).points
    field_ = intensity_field(pts, cfg.grid, cfg.smoothing, cfg.bandwidth_scale)
    return tda.superlevel_0d(field_)


def ps_test(series: TimeSeries, cfg: SweepConfig = SweepConfig(), seed=None) -> Outcome:
    """Persistence score over ``cfg.ps_ensemble`` random projection angles.

    Each diagram records the density peaks of one p-q image: a point sits at
    (peak height, merge height) in intensity units, so a lone sharp ridge
    (periodic) lands near (1, 1) and a diffuse cloud (chaotic) closer to the
    origin. The essential class is left out since every image has one.
    """
    sub = _subsampled(series, cfg)
    cs = zero_one.draw_cs(cfg.ps_ensemble, seed)
    diagrams = [ps_diagram(sub, c, cfg) for c in cs]
    score = tda.persistence_score(diagrams, cfg.birth_floor, include_essential=False)
    return Outcome(score, "periodic" if score >= cfg.ps_threshold else "chaotic")


def opn_test(series: TimeSeries, cfg: SweepConfig = SweepConfig(), seed=None) -> Outcome:
    """Normalised H1 persistent entropy of the ordinal partition network.

    Uses the first ``cfg.opn_length`` samples at the original sampling rate.
    A network too small to carry a loop structure is reported as
    ``"indeterminate"`` with a NaN score.
    """
    x = series.head(min(len(series), cfg.opn_length))
    try:
        net = ordinal.opn_from_series(x, ordinal.EmbeddingParams(cfg.opn_dim, cfg.opn_tau))
    except ordinal.DegenerateNetworkError as exc:
        warnings.warn(f"degenerate network: {exc}", RuntimeWarning)
        return Outcome(math.nan, "indeterminate")
    for msg in net.warnings:
        warnings.warn(msg, RuntimeWarning)
    diagram = tda.vr_persistence(net.dist, max_dim=1)
    score = tda.normalized_persistent_entropy(diagram, dim=1)
    return Outcome(score, "chaotic" if score >= cfg.entropy_threshold else "periodic")


TESTS = {"zero_one": zero_one_test, "ps": ps_test, "opn": opn_test}


# ------------------------------------------------------------------- sweep

def cell_seed(master: int, index: tuple) -> int:
    """Master seed XOR a stable 63-bit hash of the cell index."""
    digest = hashlib.blake2b(repr(tuple(int(i) for i in index)).encode(), digest_size=8)
    return (int(master) ^ int.from_bytes(digest.digest(), "big")) & (2 ** 63 - 1)


@lru_cache(maxsize=4)
def _simulation(system, value, duration, dt, transient, component) -> TimeSeries:
    params = dynsys.SystemParams(system).with_bifurcation_value(value)
    return dynsys.simulate(params, duration, dt=dt, t_transient=transient,
                           component=component)


def _format_warnings(caught) -> str:
    return "; ".join(str(w.message) for w in caught)


def _run_cell(cfg: SweepConfig, index: tuple) -> list:
    pi, ai, si, trial = index
    value, alpha, snr = cfg.params[pi], cfg.alphas[ai], cfg.snrs[si]
    streams = np.random.SeedSequence(cell_seed(cfg.seed, index)).spawn(len(TEST_NAMES) + 1)
    noise_seed, *test_seeds = [int(s.generate_state(1)[0]) for s in streams]

    def row(test, score, verdict, note):
        return SweepRow(cfg.system, value, alpha, snr, trial, test, score, verdict, note)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            clean = _simulation(cfg.system, value, cfg.duration, cfg.dt,
                                cfg.transient, cfg.component)
            if math.isinf(snr):
                series = clean
            else:
                xi = noise.gen_colored(noise.NoiseSpec(alpha, len(clean), noise_seed), clean.dt)
                series = noise.contaminate(clean, xi, snr).series
        except Exception as exc:  # recorded, the sweep carries on
            note = "; ".join(filter(None, [_format_warnings(caught),
                                           f"{type(exc).__name__}: {exc}"]))
            return [row(t, math.nan, "error", note) for t in cfg.tests]
        setup_note = _format_warnings(caught)

    rows = []
    for test in cfg.tests:
        seed = test_seeds[TEST_NAMES.index(test)]
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                score, verdict = TESTS[test](series, cfg, seed)
            except Exception as exc:
                warnings.warn(f"{type(exc).__name__}: {exc}")
                score, verdict = math.nan, "error"
            note = "; ".join(filter(None, [setup_note, _format_warnings(caught)]))
        rows.append(row(test, float(score), verdict, note))
    return rows


def _cell_job(args):
    return _run_cell(*args)


def cell_indices(cfg: SweepConfig) -> list:
    return [(pi, ai, si, t)
            for pi in range(len(cfg.params))
            for ai in range(len(cfg.alphas))
            for si in range(len(cfg.snrs))
            for t in range(cfg.trials)]


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Simulate, contaminate and test every cell of the configured grid.

    Cells are independent; with ``cfg.threads > 1`` they run in a process
    pool. Rows come back in grid order whatever the completion order, and
    a cell that fails yields rows with verdict ``"error"`` instead of
    stopping the sweep.
    """
    jobs = [(cfg, idx) for idx in cell_indices(cfg)]
    if cfg.threads == 1:
        chunks = map(_cell_job, jobs)
        rows = [r for chunk in chunks for r in chunk]
    else:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            rows = [r for chunk in pool.map(_cell_job, jobs) for r in chunk]
    return SweepResult(tuple(rows))


# ----------------------------------------------------------------- outputs

def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def write_csv(result: SweepResult, path=None) -> str:
    if not len(result):
        raise ValueError("cannot write an empty sweep result")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in result.rows:
        w.writerow([r.system, _fmt(r.param), _fmt(r.alpha), _fmt(r.snr_db), r.trial,
                    r.test, _fmt(r.score), r.verdict, r.warnings])
    text = buf.getvalue()
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"could not write {path}: {exc}") from exc
    return text


def read_csv(source) -> SweepResult:
    """Parse a table written by `write_csv` (a path or the CSV text)."""
    text = source
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        text = Path(source).read_text()
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise ValueError(f"unexpected header {header}")
    rows = [SweepRow(s, float(p), float(a), float(snr), int(t), test, float(sc), v, note)
            for s, p, a, snr, t, test, sc, v, note in reader]
    return SweepResult(tuple(rows))


def plot_scores(result: SweepResult, test: str, alpha: float, path) -> Path:
    """Score against parameter, one line per SNR, averaged over trials."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = result.select(test=test, alpha=alpha)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    snrs = sorted({r.snr_db for r in rows}, reverse=True)
    for snr in snrs:
        sel = [r for r in rows if r.snr_db == snr]
        params = sorted({r.param for r in sel})
        means = [np.nanmean([r.score for r in sel if r.param == p]) if any(
            not math.isnan(r.score) for r in sel if r.param == p) else np.nan for p in params]
        label = "SNR inf" if math.isinf(snr) else f"SNR {snr:g} dB"
        ax.plot(params, means, marker="o", ms=3, label=label)
    system = rows[0].system if rows else ""
    ax.set_xlabel({"lorenz": r"$\rho$", "rossler": "$a$"}.get(system, "parameter"))
    ax.set_ylabel({"zero_one": "0-1 score", "ps": "PS", "opn": "E'"}.get(test, "score"))
    ax.set_title(f"{system} {test}, {noise.color_name(alpha)} noise")
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = Path(path)
    plt.rcParams["svg.hashsalt"] = "chaostda"
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def emit_outputs(result: SweepResult, out_dir) -> dict:
    """Write ``results.csv`` and one SVG per (test, alpha) into ``out_dir``."""
    if not len(result):
        raise ValueError("cannot emit an empty sweep result")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"could not create {out}: {exc}") from exc
    paths = {"csv": out / "results.csv"}
    write_csv(result, paths["csv"])
    for test in dict.fromkeys(r.test for r in result.rows):
        for alpha in dict.fromkeys(r.alpha for r in result.rows):
            key = f"{test}_alpha{alpha:g}"
            paths[key] = plot_scores(result, test, alpha, out / f"{key}.svg")
    return paths
