"""Command-line entry point: ``falsify {ei,capacity,bounds,gen,validate}``.

Exit codes: 0 success, 1 a check failed (oracle mismatch, coverage
shortfall), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds
from .capacity import (
    capacity_report,
    ei_min_risk,
    mml_preimage_count,
    rademacher_direct,
    rademacher_via_distribution,
)
from .core import InputSpace, Sample
from .errors import FalsifyError, RequiresDistinctSample
from .experiment import (
    ExperimentConfig,
    RepertoireSpec,
    plot_rows,
    run_experiment,
    write_plot_data,
    write_summary,
    write_trial_log,
)
from .learning import (
    MinRiskHistogram,
    Repertoire,
    RiskValue,
    dichotomy_count,
    min_risk_by_enumeration,
    min_risk_histogram,
)
from .mechanism import Mechanism, actual_repertoire, effective_information, output_marginal

ORACLE_M_CAP = 12


class CheckFailed(Exception):
    pass


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _table(rows: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def _json_arg(text: str):
    """Inline JSON, or a path to a JSON file."""
    if os.path.exists(text):
        with open(text) as f:
            return json.load(f)
    return json.loads(text)


def _parse_output(mech: Mechanism, raw: str):
    if raw in mech.outputs:
        return raw
    try:
        val = json.loads(raw)
    except json.JSONDecodeError:
        return raw
    return val


# --- subcommands ----------------------------------------------------------

def cmd_ei(args) -> int:
    mech = Mechanism.load(args.mechanism)
    y = _parse_output(mech, args.output)
    ei = effective_information(mech, y)
    rep = actual_repertoire(mech, y)
    marginal = output_marginal(mech, y)
    if args.format == "json":
        text = _dump({
            "output": y,
            "ei_bits": ei,
            "marginal": marginal,
            "posterior": rep.posterior.tolist(),
        })
    else:
        text = f"ei: {ei:.4f} bits\np(y): {marginal:.6g}\nsupport: {len(rep.support)} of {mech.n_inputs} inputs\n"
    _emit(text, args.out)
    return 0


def _load_sample(raw: str) -> Sample:
    obj = _json_arg(raw)
    if isinstance(obj, dict):
        obj = obj["indices"]
    return Sample(tuple(obj))


def _oracle_checks(F: Repertoire, d: Sample, space: InputSpace) -> list[str]:
    """Full-enumeration identities; returns a list of failures."""
    if space.m > ORACLE_M_CAP:
        raise FalsifyError(f"--oracle needs m <= {ORACLE_M_CAP}, got {space.m}")
    failures = []
    h = min_risk_histogram(F, d)
    direct = rademacher_direct(F, space, d)
    via = rademacher_via_distribution(h)
    if direct != via:
        failures.append(f"rademacher: direct {direct} != via distribution {via}")
    if bounds.ei_rademacher_capacity(h) != via:
        failures.append("falsification-weighted capacity differs from Rademacher complexity")
    if sum(h.counts.values()) != h.pattern_universe:
        failures.append("histogram does not cover every sign assignment")
    if d.distinct:
        q = dichotomy_count(F, d)
        if h.count(0) != q:
            failures.append(f"zero-risk count {h.count(0)} != dichotomies {q}")
        full = min_risk_by_enumeration(F, space, d)
        scaled = {k: c << (space.m - len(d)) for k, c in h.counts.items()}
        if full != scaled:
            failures.append("histogram disagrees with full labeling enumeration")
        if mml_preimage_count(F, d, space) != full.get(0, 0):
            failures.append("code-length preimage differs from zero-risk preimage")
    return failures


def cmd_capacity(args) -> int:
    F = Repertoire.load(args.repertoire)
    d = _load_sample(args.sample)
    space = InputSpace(args.m or F.m)
    rep = capacity_report(F, d, space)
    failures = _oracle_checks(F, d, space) if args.oracle else []

    if args.format == "json":
        obj = rep.to_json()
        if args.oracle:
            obj["oracle"] = {"ok": not failures, "failures": failures}
        text = _dump(obj)
    else:
        rows = [
            ("sample length l", rep.l),
            ("distinct", d.distinct),
            ("dichotomies", rep.dichotomies),
            ("V (VC-entropy)", f"{rep.vc_entropy_bits} bits"),
            ("R (Rademacher)", rep.rademacher),
        ]
        if rep.ei_zero_bits is not None:
            rows += [
                ("ei(R, 0)", f"{rep.ei_zero_bits} bits"),
                ("MML length", f"{rep.mml_length_bits} bits"),
            ]
        else:
            rows.append(("ei / MML", "n/a (sample has repeated points)"))
        for k, c in sorted(rep.histogram.items()):
            rows.append((f"count[{k}/{rep.l}]", c))
        text = _table(rows)
        if args.oracle:
            text += "oracle: all identities hold\n" if not failures else "".join(
                f"oracle: FAILED {f}\n" for f in failures)
    _emit(text, args.out)
    if failures:
        raise CheckFailed("; ".join(failures))
    return 0


def _parse_emp(raw: str) -> RiskValue:
    k, _, l = raw.partition("/")
    if not l:
        raise FalsifyError(f"empirical risk must be given as k/l, got {raw!r}")
    return RiskValue(int(k), int(l))


def cmd_bounds(args) -> int:
    emp = _parse_emp(args.emp)
    l = emp.sample_size
    conf = bounds.Confidence(args.delta)
    consts = bounds.constants().scaled(c1=args.c1_scale)
    reports = []
    h = None
    if args.histogram:
        h = MinRiskHistogram.from_json(_json_arg(args.histogram))
        if h.l != l:
            raise FalsifyError(f"histogram has l={h.l} but empirical risk has l={l}")
    if args.vc_entropy is not None:
        reports.append(bounds.vc_bound(emp, args.vc_entropy, l, conf, consts))
    R = Fraction(args.rademacher) if args.rademacher is not None else None
    if R is None and h is not None:
        R = rademacher_via_distribution(h)
    if R is not None:
        reports.append(bounds.rademacher_bound(emp, R, l, conf, consts))
    ei0 = args.ei0
    if ei0 is None and h is not None and h.distinct:
        ei0 = ei_min_risk(h, 0)
    if ei0 is not None:
        reports.append(bounds.ei_vc_bound(emp, ei0, l, conf, consts))
    if h is not None:
        reports.append(bounds.ei_rademacher_bound(emp, h, conf, consts))
    if not reports:
        raise FalsifyError("give at least one of --vc-entropy, --rademacher, --ei0, --histogram")

    if args.format == "json":
        text = _dump([r.to_json() for r in reports])
    elif args.format == "csv":
        head = "kind,empirical_term,capacity_term,confidence_term,total,vacuous\n"
        text = head + "".join(
            f"{r.kind},{r.empirical_term},{r.capacity_term!r},{r.confidence_term!r},{r.total!r},{int(r.vacuous)}\n"
            for r in reports)
    else:
        text = _table([(r.kind, f"{r.total:.6f}  = {float(r.empirical_term):.6f} + {r.capacity_term:.6f} "
                                f"+ {r.confidence_term:.6f}{'  (vacuous)' if r.vacuous else ''}")
                       for r in reports])
    _emit(text, args.out)
    return 0


def cmd_gen(args) -> int:
    spec = RepertoireSpec(args.kind, k=args.k, seed=args.seed if args.kind == "random-k" else None)
    F = spec.build(args.m)
    if args.name:
        F = Repertoire(F.matrix, args.name)
    _emit(_dump(F.to_json()), args.out)
    return 0


def cmd_validate(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.c1_scale != 1.0:
        overrides["c1_scale"] = args.c1_scale
    if overrides:
        cfg = ExperimentConfig(**{**cfg.__dict__, **overrides})
    summary, records = run_experiment(cfg, workers=args.workers)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    write_trial_log(records, out / "trials.csv")
    write_summary(summary, cfg, out / "summary.json")
    if args.emit_plot_data:
        write_plot_data(plot_rows(records, cfg.l), args.emit_plot_data)

    rows = []
    for k, b in summary.per_bound.items():
        cov = "n/a" if b.coverage is None else f"{b.coverage:.4f}"
        rows.append((k, f"coverage {cov}  violations {b.violations}/{b.trials}"))
    sys.stdout.write(_table(rows))
    if not summary.ok():
        raise CheckFailed(f"coverage below {1 - cfg.delta:.4f}")
    return 0


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table", "csv"), default="table")
    common.add_argument("--out", help="output path (directory for validate); default stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="falsify", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("ei", parents=[common], help="effective information of one measurement")
    e.add_argument("mechanism", help='mechanism JSON {"outputs": [...], "rows": [[...]]}')
    e.add_argument("--output", "-y", required=True, help="observed output value")
    e.set_defaults(func=cmd_ei)

    c = sub.add_parser("capacity", parents=[common], help="capacity report of a repertoire on a sample")
    c.add_argument("repertoire", help="repertoire JSON")
    c.add_argument("--sample", required=True, help="JSON index array, inline or as a file")
    c.add_argument("--m", type=int, help="input space size (defaults to the repertoire's)")
    c.add_argument("--oracle", action="store_true", help="also run full-enumeration identity checks")
    c.set_defaults(func=cmd_capacity)

    b = sub.add_parser("bounds", parents=[common], help="evaluate bound right-hand sides")
    b.add_argument("--emp", required=True, help="empirical risk as k/l")
    b.add_argument("--delta", type=float, default=0.05)
    b.add_argument("--vc-entropy", type=float, help="VC-entropy in bits")
    b.add_argument("--rademacher", help="Rademacher complexity, e.g. 2/3")
    b.add_argument("--ei0", type=float, help="effective information of a zero min-risk, bits")
    b.add_argument("--histogram", help="min-risk histogram JSON, inline or as a file")
    b.add_argument("--c1-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    b.set_defaults(func=cmd_bounds)

    g = sub.add_parser("gen", parents=[common], help="generate a repertoire JSON")
    g.add_argument("kind", choices=("thresholds", "intervals", "random-k"))
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--name")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", parents=[common], help="Monte Carlo bound coverage run")
    v.add_argument("config", help="experiment config (JSON or TOML)")
    v.add_argument("--seed", type=int, help="override the config's master seed")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--emit-plot-data", metavar="PATH")
    v.add_argument("--c1-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CheckFailed as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1
    except RequiresDistinctSample as e:
        print(f"error: {e} (draw a sample without repeated indices)", file=sys.stderr)
        return 2
    except (FalsifyError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
