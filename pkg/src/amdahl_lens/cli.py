"""``amdahl-lens`` command line front end.

Every subcommand writes a report to standard output or ``--out PATH`` as
JSON (default) or CSV. JSON reports have the shape::

    {"command": ..., "inputs_digest": "sha256:...", "results": ..., "warnings": [...]}

Exit codes: 0 success, 2 usage error, 3 data or model infeasibility,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import bounds as bnd
from . import ingest, precision, predict, simulator
from .errors import AmdahlLensError, ModelInfeasibleError, SnapshotParseError
from .model import AlphaEstimate, alpha_from_efficiency, alpha_from_speedup
from .report import Report, digest

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_IO = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _inputs_digest(args, files=()):
    skip = {"out", "format", "func", "input", "config"}
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    parts = [json.dumps(flags, sort_keys=True, default=str)]
    for path in files:
        parts.append(Path(path).read_bytes())
    return digest(parts)


def _alpha_dict(a: AlphaEstimate) -> dict:
    return {
        "alpha": a.alpha,
        "one_minus_alpha": a.one_minus_alpha,
        "max_gain": a.max_gain,
        "source": a.source.value,
    }


# ---- alpha -----------------------------------------------------------------

def cmd_alpha(args) -> Report:
    n = args.cores
    if args.efficiency is not None:
        if args.rmax is not None or args.rpeak is not None or args.speedup is not None:
            raise UsageError("give --efficiency, --rmax/--rpeak or --speedup, not several")
        eff = args.efficiency
        alpha = alpha_from_efficiency(eff, n)
    elif args.rmax is not None or args.rpeak is not None:
        if args.rmax is None or args.rpeak is None or args.speedup is not None:
            raise UsageError("--rmax and --rpeak must be given together")
        if not args.rpeak > 0:
            raise UsageError("--rpeak must be positive")
        eff = args.rmax / args.rpeak
        alpha = alpha_from_efficiency(eff, n)
    elif args.speedup is not None:
        alpha = alpha_from_speedup(args.speedup, n)
        eff = args.speedup / n
    else:
        raise UsageError("one of --efficiency, --rmax/--rpeak or --speedup is required")
    results = {"cores": n, "efficiency": eff, **_alpha_dict(alpha)}
    return Report("alpha", _inputs_digest(args), results)


# ---- bounds ----------------------------------------------------------------

def _bound_dict(b: bnd.BoundResult) -> dict:
    return {
        "kind": b.kind.value,
        "sequential_cycles": b.sequential_cycles,
        "total_cycles": b.window.total_cycles,
        "one_minus_alpha_bound": b.one_minus_alpha_bound,
        "max_gain": b.max_gain,
        "access_factor": b.access_factor,
    }


def cmd_bounds(args) -> Report:
    w = bnd.MeasurementWindow(args.duration, args.clock)
    kinds = ["clock", "propagation", "addressing", "os", "access"] if args.kind == "all" else [args.kind]
    warnings = []
    out = []
    for kind in kinds:
        if kind == "clock":
            out.append(bnd.clock_quantum_bound(w))
        elif kind == "propagation":
            out.append(bnd.propagation_bound(args.distance, w))
        elif kind == "addressing":
            if args.cores is None:
                if args.kind == "all":
                    warnings.append("addressing bound skipped: --cores not given")
                    continue
                raise UsageError("--kind addressing needs --cores")
            out.append(bnd.addressing_bound(args.cores, args.cluster, w))
        elif kind == "os":
            out.append(bnd.os_bound(args.context_switch, w))
        elif kind == "access":
            out.append(bnd.instruction_access_bound(w, args.factor))
    if args.kind in ("os", "all"):
        warnings.append(f"quoted OS-level limit for comparison: {bnd.QUOTED_OS_LIMIT:g}")
    rows = [_bound_dict(b) for b in out]
    results = {"window": {"duration_s": w.duration_s, "clock_hz": w.clock_hz, "total_cycles": w.total_cycles},
               "bounds": rows}
    return Report("bounds", _inputs_digest(args), results, warnings, table=rows)


# ---- decompose -------------------------------------------------------------

def cmd_decompose(args) -> Report:
    times_given = args.time64 is not None or args.time16 is not None
    meas_given = any(v is not None for v in (args.eff64, args.eff16, args.perf_ratio))
    results = {"model": args.model}
    if times_given and meas_given:
        raise UsageError("give either --time64/--time16 or --eff64/--eff16/--cores/--perf-ratio")
    if times_given:
        if args.time64 is None or args.time16 is None:
            raise UsageError("--time64 and --time16 must be given together")
        t64, t16 = args.time64, args.time16
    elif meas_given:
        if None in (args.eff64, args.eff16, args.cores, args.perf_ratio):
            raise UsageError("--eff64, --eff16, --cores and --perf-ratio are all required")
        try:
            m = precision.DualPrecisionMeasurement(args.eff64, args.eff16, args.cores, args.perf_ratio)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        results["one_minus_alpha64"] = alpha_from_efficiency(m.eff64, m.n).one_minus_alpha
        results["one_minus_alpha16"] = alpha_from_efficiency(m.eff16, m.n).one_minus_alpha
        t64, t16 = precision.times_from_measurement(m)
    else:
        raise UsageError("no input given")
    d = precision.decompose(t16, t64, args.model, args.length_ratio)
    results.update({
        "time64": d.time64,
        "time16": d.time16,
        "f16": d.f16,
        "f0": d.f0,
        "expected_perf_ratio": precision.expected_perf_ratio(d),
        "length_ratio": d.length_ratio,
    })
    return Report("decompose", _inputs_digest(args), results)


# ---- simulate --------------------------------------------------------------

_PRESETS = {"hpl": simulator.hpl_preset, "hpcg": simulator.hpcg_preset, "brain": simulator.brain_preset}
_SIM_FLAGS = {
    "n": "n", "dispatch": "dispatch_cycles", "join": "join_cycles", "payload": "payload_cycles",
    "iterations": "iterations", "seq": "per_iteration_seq_cycles", "floor": "period_floor_cycles",
}


def _sim_config(args) -> simulator.SimConfig:
    if args.config:
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        looping = data.pop("looping", None)
        if looping is not None:
            data["looping"] = simulator.Looping(looping.get("form", "constant"), looping.get("lam", 0.0))
        cfg = simulator.SimConfig(**data)
    elif args.preset:
        cfg = _PRESETS[args.preset]()
    else:
        cfg = simulator.SimConfig(n=args.n if args.n is not None else 2)
    overrides = {field: getattr(args, flag) for flag, field in _SIM_FLAGS.items() if getattr(args, flag) is not None}
    if args.looping is not None:
        overrides["looping"] = simulator.Looping(args.looping, args.lam)
    return replace(cfg, **overrides)


def _outcome_dict(o: simulator.SimOutcome) -> dict:
    return {
        "n": o.n,
        "total_cycles": o.total_cycles,
        "iteration_cycles": o.iteration_cycles,
        "reference_cycles": o.reference_cycles,
        "speedup": o.speedup,
        "alpha_eff": None if o.alpha_eff is None else o.alpha_eff.alpha,
        "one_minus_alpha_eff": None if o.alpha_eff is None else o.alpha_eff.one_minus_alpha,
        "payload_fraction": o.payload_fraction,
        "overhead_fraction": o.overhead_fraction,
        "idle_fraction": o.idle_fraction,
        "payload_rate": o.payload_rate,
        "degenerate": o.degenerate,
    }


def _parse_sweep(args):
    if args.sweep and args.sweep_log:
        raise UsageError("give --sweep or --sweep-log, not both")
    if args.sweep:
        return [int(x) for x in args.sweep.split(",") if x.strip()]
    lo, hi, points = args.sweep_log.split(":")
    return [int(n) for n in predict.log_axis(float(lo), float(hi), int(points), integer=True)]


def cmd_simulate(args) -> Report:
    try:
        cfg = _sim_config(args)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid simulator configuration: {exc}") from None
    files = [args.config] if args.config else []
    if args.sweep or args.sweep_log:
        try:
            n_values = _parse_sweep(args)
        except ValueError as exc:
            raise UsageError(f"bad sweep value: {exc}") from None
        sweep = simulator.sweep_n(cfg, n_values)
        rows = [_outcome_dict(o) for _, o in sweep]
        results = {"sweep": rows, "argmax_n": simulator.argmax_payload(sweep)}
        return Report("simulate", _inputs_digest(args, files), results, table=rows)
    out = _outcome_dict(simulator.simulate(cfg))
    warnings = [out["degenerate"]] if out["degenerate"] else []
    return Report("simulate", _inputs_digest(args, files), out, warnings, table=[out])


# ---- predict ---------------------------------------------------------------

def _curve_rows(c: predict.PredictionCurve, extra: dict) -> list[dict]:
    return [{**extra, **row} for row in c.rows()]


def cmd_predict(args) -> Report:
    modes = [m for m in ("surface", "curve", "validate") if getattr(args, m)]
    if len(modes) != 1:
        raise UsageError("choose exactly one of --surface, --curve, --validate")
    mode = modes[0]
    files = [args.input] if args.input else []
    warnings = [predict.EXTRAPOLATION_CAVEAT] if mode != "surface" else []

    if mode == "surface":
        n_axis = predict.log_axis(args.n_min, args.n_max, args.points, integer=True)
        oma_axis = predict.log_axis(args.oma_min, args.oma_max, args.oma_points)
        grid = predict.surface(n_axis, oma_axis)
        rows = grid.rows()
        return Report("predict", _inputs_digest(args), {"surface": rows}, warnings, table=rows)

    if mode == "validate":
        if not args.input:
            raise UsageError("--validate needs --in")
        snaps = _read_snapshots(args.input)
        reports = predict.validate_history(snaps)
        rows = []
        for r in reports:
            rows.append({
                "name": r.name, "prior_epoch": r.prior_epoch, "later_epoch": r.later_epoch,
                "n_prior": r.n_prior, "n_later": r.n_later,
                "predicted_efficiency": r.predicted_efficiency,
                "predicted_payload_flops": r.predicted_payload,
                "measured_payload_flops": r.measured_payload,
                "relative_error": r.relative_error,
                "warnings": [w for w in r.warnings if w != predict.EXTRAPOLATION_CAVEAT],
            })
        return Report("predict", _inputs_digest(args, files), {"validation": rows}, warnings, table=rows)

    looping = None
    if args.looping is not None and args.looping != "constant":
        looping = simulator.Looping(args.looping, args.lam)
    n_axis = predict.log_axis(args.n_min, args.n_max, args.points, integer=True)
    curves, rows = [], []
    if args.input:
        for snap in _read_snapshots(args.input):
            rec = ingest.derive(snap)
            if rec.alpha is None:
                warnings.append(f"{snap.name} {snap.epoch} {snap.workload}: no alpha, skipped")
                continue
            c = predict.curve(rec.alpha, snap.p_single, n_axis, looping)
            extra = {"name": snap.name, "epoch": str(snap.epoch), "workload": snap.workload}
            curves.append(_curve_summary(c, extra))
            rows.extend(_curve_rows(c, extra))
    else:
        if args.one_minus_alpha is not None:
            alpha = AlphaEstimate(args.one_minus_alpha)
        elif args.efficiency is not None and args.cores is not None:
            alpha = alpha_from_efficiency(args.efficiency, args.cores)
        else:
            raise UsageError("--curve needs --in, --one-minus-alpha, or --efficiency with --cores")
        if args.p_single is None:
            raise UsageError("--curve without --in needs --p-single")
        c = predict.curve(alpha, args.p_single, n_axis, looping)
        curves.append(_curve_summary(c, {}))
        rows.extend(_curve_rows(c, {}))
    return Report("predict", _inputs_digest(args, files), {"curves": curves}, warnings, table=rows)


def _curve_summary(c: predict.PredictionCurve, extra: dict) -> dict:
    sat = c.p_single / c.alpha.one_minus_alpha if c.alpha.one_minus_alpha > 0 else None
    out = {**extra, "order": c.order, "one_minus_alpha": c.alpha.one_minus_alpha,
           "p_single_flops": c.p_single, "saturation_flops": sat}
    if c.looping is not None:
        out["looping"] = {"form": c.looping.form.value, "lam": c.looping.lam}
        out["argmax_n"] = c.argmax()
    out["points"] = c.rows()
    return out


# ---- ingest ----------------------------------------------------------------

def _read_snapshots(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return ingest.parse_snapshots(fh)


def _record_dict(r: ingest.DerivedRecord) -> dict:
    s = r.snapshot
    return {
        "name": s.name,
        "epoch": str(s.epoch),
        "workload": s.workload,
        "cores_total": s.cores_total,
        "cores_used": s.cores_used,
        "rpeak_flops": s.r_peak,
        "rmax_flops": s.r_max,
        "clock_hz": s.clock_hz,
        "perf_ratio": s.perf_ratio,
        "efficiency": r.efficiency,
        "one_minus_alpha": None if r.alpha is None else r.alpha.one_minus_alpha,
        "corrected_efficiency": r.corrected_efficiency,
    }


def cmd_ingest(args) -> Report:
    if not args.input:
        raise UsageError("ingest needs --in")
    records = [ingest.derive(s) for s in _read_snapshots(args.input)]
    pairing = ingest.pair_workloads(records)
    rows = [_record_dict(r) for r in records]
    warnings = []
    for r in records:
        warnings.extend(f"{r.snapshot.name} {r.snapshot.epoch} {r.snapshot.workload}: {note}" for note in r.notes)
    warnings.extend(pairing.unmatched)
    pairs = [
        {"name": p.name, "epoch": str(p.epoch), "eff64": p.measurement.eff64, "eff16": p.measurement.eff16,
         "cores": p.measurement.n, "perf_ratio": p.measurement.perf_ratio, "ratio_source": p.ratio_source}
        for p in pairing.pairs
    ]
    results = {"records": rows, "pairs": pairs}
    return Report("ingest", _inputs_digest(args, [args.input]), results, warnings,
                  table=rows, columns=list(rows[0]) if rows else None)


# ---- parser ----------------------------------------------------------------

def _common(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="amdahl-lens", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alpha", help="effective parallelism from a measured efficiency or speedup")
    p.add_argument("--efficiency", type=float)
    p.add_argument("--rmax", type=float)
    p.add_argument("--rpeak", type=float)
    p.add_argument("--speedup", type=float)
    p.add_argument("--cores", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("bounds", help="limiting-factor bounds on 1-alpha")
    p.add_argument("--kind", choices=("clock", "propagation", "addressing", "os", "access", "all"), default="all")
    p.add_argument("--duration", type=float, default=bnd.HPL_RUNTIME_S, help="window length in seconds")
    p.add_argument("--clock", type=float, default=bnd.HPL_CLOCK_HZ, help="clock frequency in Hz")
    p.add_argument("--distance", type=float, default=100.0, help="cable length in metres")
    p.add_argument("--cores", type=int)
    p.add_argument("--cluster", type=float, default=1.0)
    p.add_argument("--context-switch", type=int, default=bnd.CONTEXT_SWITCH_CYCLES)
    p.add_argument("--factor", type=float, default=bnd.FAR_MEMORY_FACTOR, help="instruction access factor")
    _common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("decompose", help="housekeeping / operand-length split of dual-precision runs")
    p.add_argument("--model", choices=("serial", "timeaware"), required=True)
    p.add_argument("--time64", type=float)
    p.add_argument("--time16", type=float)
    p.add_argument("--eff64", type=float)
    p.add_argument("--eff16", type=float)
    p.add_argument("--cores", type=int)
    p.add_argument("--perf-ratio", type=float)
    p.add_argument("--length-ratio", type=float, default=4.0)
    _common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("simulate", help="fork-join timeline simulation")
    p.add_argument("--config", help="JSON file with simulator fields")
    p.add_argument("--preset", choices=sorted(_PRESETS))
    p.add_argument("--n", type=int)
    p.add_argument("--dispatch", type=float)
    p.add_argument("--join", type=float)
    p.add_argument("--payload", type=float)
    p.add_argument("--iterations", type=int)
    p.add_argument("--seq", type=float)
    p.add_argument("--floor", type=float)
    p.add_argument("--looping", choices=("constant", "linear", "log"))
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--sweep", help="comma-separated unit counts")
    p.add_argument("--sweep-log", help="MIN:MAX:POINTS log-spaced unit counts")
    _common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("predict", help="efficiency surface, payload curves, stage validation")
    p.add_argument("--surface", action="store_true")
    p.add_argument("--curve", action="store_true")
    p.add_argument("--validate", action="store_true")
    p.add_argument("--in", dest="input", help="snapshot CSV")
    p.add_argument("--one-minus-alpha", type=float)
    p.add_argument("--efficiency", type=float)
    p.add_argument("--cores", type=int)
    p.add_argument("--p-single", type=float, help="per-unit performance in flop/s")
    p.add_argument("--n-min", type=float, default=1.0)
    p.add_argument("--n-max", type=float, default=1e9)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--oma-min", type=float, default=1e-9)
    p.add_argument("--oma-max", type=float, default=1e-2)
    p.add_argument("--oma-points", type=int, default=8)
    p.add_argument("--looping", choices=("constant", "linear", "log"))
    p.add_argument("--lam", type=float, default=0.0)
    _common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("ingest", help="parse a snapshot CSV and derive alpha per record")
    p.add_argument("--in", dest="input", help="snapshot CSV")
    _common(p)
    p.set_defaults(func=cmd_ingest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
        text = report.render(args.format)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"amdahl-lens {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelInfeasibleError, SnapshotParseError) as exc:
        print(f"amdahl-lens {args.command}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"amdahl-lens {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except (AmdahlLensError, ValueError) as exc:
        print(f"amdahl-lens {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    for w in report.warnings:
        if args.format == "csv":
            print(f"warning: {w}", file=sys.stderr)
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"amdahl-lens: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
