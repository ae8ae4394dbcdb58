"""Command-line front end: ``teleswitch run`` and ``teleswitch fit``."""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .channel import DelayProfile
from .config import ConfigError, load_scenario, preset, qoe_fragment
from .engine import SessionConfig, run_scenario
from .output import summary_text, sweep_table, trace_csv, write_bundle
from .qoe import DegenerateFitError, SchemeId, fit_4pl, load_ratings

DEFAULT_SWEEP = "0,10,25,50,100,200"
_SCHEME_MODES = {"tdpa": "fixed_tdpa", "mmt": "fixed_mmt", "auto": "auto"}


class UsageError(Exception):
    pass


def _parse_sweep(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--sweep expects comma-separated RTTs in ms, got {text!r}") from None
    if not vals or any(v < 0 for v in vals):
        raise UsageError("--sweep needs one or more non-negative RTTs")
    if len(set(vals)) != len(vals):
        raise UsageError("--sweep RTTs must be distinct")
    return vals


def build_config(args) -> SessionConfig:
    """Resolve preset, config file and flag overrides, in that order."""
    base = preset(args.preset or "paper-soft-object")
    cfg = load_scenario(args.config, base) if args.config else base
    updates = {}
    if args.scheme:
        updates["scheme_mode"] = _SCHEME_MODES[args.scheme]
    if args.duration_s is not None:
        updates["duration"] = args.duration_s
    if args.seed is not None:
        updates["rng_seed"] = args.seed
    if args.rtt_ms is not None:
        if args.rtt_ms < 0:
            raise UsageError("--rtt-ms must be non-negative")
        updates["delay_profile"] = DelayProfile.constant(args.rtt_ms / 1000.0, cfg.sample_period)
    try:
        return replace(cfg, **updates)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _simulate(cfg: SessionConfig):
    trace = run_scenario(cfg)
    return trace_csv(trace), trace.summary()


def _header(cfg: SessionConfig) -> dict[str, str]:
    return {
        "scheme_mode": cfg.scheme_mode.value,
        "duration_s": f"{cfg.duration:g}",
        "rng_seed": str(cfg.rng_seed),
        "rows": str(cfg.n_ticks),
    }


def cmd_run(args) -> int:
    cfg = build_config(args)
    out = Path(args.out)
    if args.sweep is None:
        csv_text, summary = _simulate(cfg)
        write_bundle(out, {"trace.csv": csv_text, "summary.txt": summary_text(summary, _header(cfg))})
        print(f"wrote {out / 'trace.csv'} ({cfg.n_ticks} rows)")
        return 0

    rtts = _parse_sweep(args.sweep)
    cfgs = [replace(cfg, delay_profile=DelayProfile.constant(r / 1000.0, cfg.sample_period)) for r in rtts]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_simulate, cfgs))
    else:
        results = [_simulate(c) for c in cfgs]

    files, rows = {}, []
    for rtt, c, (csv_text, summary) in zip(rtts, cfgs, results):
        sub = f"rtt_{rtt:g}ms"
        files[f"{sub}/trace.csv"] = csv_text
        files[f"{sub}/summary.txt"] = summary_text(summary, {"rtt_ms": f"{rtt:g}", **_header(c)})
        rows.append((rtt, summary))
    table = sweep_table(rows)
    files["sweep_summary.csv"] = table
    write_bundle(out, files)
    sys.stdout.write(table)
    return 0


def cmd_fit(args) -> int:
    try:
        points = load_ratings(args.ratings)
    except OSError as exc:
        raise UsageError(f"cannot read ratings {args.ratings}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = fit_4pl(points)
    p = result.params
    print(f"A = {p.A!r}")
    print(f"B = {p.B_slope!r}")
    print(f"C = {p.C!r}")
    print(f"D = {p.D!r}")
    print(f"rms = {result.rms!r}")
    if args.emit:
        write_bundle(Path(args.emit).parent or Path("."), {Path(args.emit).name: qoe_fragment(p, SchemeId(args.scheme))})
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="teleswitch", description="Delayed teleoperation simulator with QoE-driven scheme switching.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="simulate one scenario or a delay sweep")
    run.add_argument("--config", metavar="PATH", help="scenario file layered over the preset")
    run.add_argument("--preset", metavar="NAME", help="named preset (default paper-soft-object)")
    run.add_argument("--scheme", choices=sorted(_SCHEME_MODES))
    run.add_argument("--rtt-ms", type=float, help="constant round-trip delay, split evenly")
    run.add_argument("--duration-s", type=float)
    run.add_argument("--seed", type=int)
    run.add_argument("--out", metavar="DIR", required=True)
    run.add_argument("--sweep", metavar="RTTS", nargs="?", const=DEFAULT_SWEEP,
                     help=f"comma-separated RTTs in ms (default {DEFAULT_SWEEP})")
    run.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
    run.set_defaults(func=cmd_run)

    fit = sub.add_parser("fit", help="fit a 4PL curve to delay ratings")
    fit.add_argument("--ratings", metavar="PATH", required=True, help="lines of 'tau_ms, MOS'")
    fit.add_argument("--emit", metavar="PATH", help="write a [qoe] fragment here")
    fit.add_argument("--scheme", choices=[s.value for s in SchemeId], default=SchemeId.TDPA_PD.value,
                     help="key used in the emitted fragment")
    fit.set_defaults(func=cmd_fit)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, ConfigError, DegenerateFitError) as exc:
        print(f"teleswitch: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"teleswitch: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
