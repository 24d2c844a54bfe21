"""Command line entry point: ``python -m chaostda <command> ...``.

Exit status is 0 on success, 1 for usage or configuration errors and 2 when
the computation or file I/O fails.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
import typing
import warnings
from pathlib import Path

import numpy as np

from . import dynsys, noise, pipeline
from .timeseries import TimeSeries

LIST_FIELDS = {"params": float, "alphas": float, "snrs": float, "tests": str}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _scalar_type(name: str):
    hint = typing.get_type_hints(pipeline.SweepConfig)[name]
    if hint in (int, float, str):
        return hint
    args = [a for a in typing.get_args(hint) if a is not type(None)]
    return args[0] if args else str


def parse_value(name: str, text: str):
    """Convert the text of one config entry to the type of its field."""
    text = text.strip()
    if name in LIST_FIELDS:
        kind = LIST_FIELDS[name]
        return tuple(kind(v.strip()) for v in text.split(",") if v.strip())
    kind = _scalar_type(name)
    if text.lower() == "none":
        return None
    return kind(text)


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    fields = {f.name for f in dataclasses.fields(pipeline.SweepConfig)}
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in fields:
            raise UsageError(f"{path}:{lineno}: expected 'key = value' with a known key")
        try:
            out[key] = parse_value(key, value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from exc
    return out


def _add_config_flags(p):
    g = p.add_argument_group("sweep configuration")
    for f in dataclasses.fields(pipeline.SweepConfig):
        if f.name in ("seed", "threads"):
            continue
        flag = "--" + f.name.replace("_", "-")
        g.add_argument(flag, dest=f.name, default=None, metavar="LIST"
                       if f.name in LIST_FIELDS else f.name.upper())
    p.add_argument("--config", help="file of 'key = value' lines")
    p.add_argument("--seed", default=None)
    p.add_argument("--threads", default=None)
    p.add_argument("--out-dir", default=".")


def build_config(args) -> pipeline.SweepConfig:
    values = read_config(args.config) if args.config else {}
    for f in dataclasses.fields(pipeline.SweepConfig):
        raw = getattr(args, f.name, None)
        if raw is not None:
            try:
                values[f.name] = parse_value(f.name, raw)
            except ValueError as exc:
                raise UsageError(f"--{f.name.replace('_', '-')}: {exc}") from exc
    try:
        return pipeline.SweepConfig(**values)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


def write_series(series: TimeSeries, path) -> Path:
    data = np.column_stack((series.times, series.samples))
    np.savetxt(path, data, delimiter=",", header="t,x", comments="", fmt="%.17g")
    return Path(path)


def read_series(path) -> TimeSeries:
    """Load a ``t,x`` CSV (or a single column, taken as unit-spaced)."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] == 1:
        return TimeSeries(data[:, 0])
    t, x = data[:, 0], data[:, 1]
    dt = (t[-1] - t[0]) / (len(t) - 1)
    return TimeSeries(x, dt, t[0])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaostda", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="integrate a flow and save its observable")
    _add_config_flags(p)
    p.add_argument("--value", type=float, help="bifurcation parameter (default: first of --params)")
    p.add_argument("--out", default="series.csv")

    p = sub.add_parser("noise", help="generate a colored noise series")
    _add_config_flags(p)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--length", type=int, default=2 ** 16)
    p.add_argument("--sample-dt", type=float, default=1.0)
    p.add_argument("--out", default="noise.csv")

    for name, help_ in (("test01", "0-1 test"), ("pstest", "persistence score test"),
                        ("opntest", "ordinal network entropy test")):
        p = sub.add_parser(name, help=f"run the {help_} on a saved series")
        _add_config_flags(p)
        p.add_argument("input", help="series CSV written by 'simulate'")

    p = sub.add_parser("sweep", help="run a full sweep and write table and plots")
    _add_config_flags(p)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = build_config(args)
    except UsageError as exc:
        print(f"chaostda: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"chaostda: cannot read config: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "simulate":
            value = cfg.params[0] if args.value is None else args.value
            series = dynsys.simulate(cfg.system_params(value), cfg.duration, dt=cfg.dt,
                                     t_transient=cfg.transient, component=cfg.component)
            print(write_series(series, out_dir / args.out))
        elif args.command == "noise":
            xi = noise.gen_colored(noise.NoiseSpec(args.alpha, args.length, cfg.seed),
                                   args.sample_dt)
            print(write_series(xi, out_dir / args.out))
        elif args.command in ("test01", "pstest", "opntest"):
            test = {"test01": pipeline.zero_one_test, "pstest": pipeline.ps_test,
                    "opntest": pipeline.opn_test}[args.command]
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                score, verdict = test(read_series(args.input), cfg, cfg.seed)
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
            print(f"score={score:.17g} verdict={verdict}")
        else:
            result = pipeline.run_sweep(cfg)
            for key, path in pipeline.emit_outputs(result, out_dir).items():
                print(path)
    except Exception as exc:
        print(f"chaostda: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())
