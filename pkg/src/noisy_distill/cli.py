"""Command-line front end writing CSV sweeps.

Exit codes: 0 ok, 2 bad configuration, 3 numeric failure, 4 classifier
mismatch, 5 empty distillable interval.
"""
import argparse
import csv
import io
import json
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from .classes import (
    CARDINALITIES,
    class_distribution,
    classify_all,
    distillable_interval,
    measurement_noise_curves,
)
from .engine import CLASS_TAGS, iterate_protocol, noisy_round_oracle
from .errors import EmptyInterval, OutOfRange, ZeroSuccessProbability
from .noise import (
    NoiseDistribution,
    absorb_measurement_noise,
    compose_distributions,
    depolarizing_distribution,
    no_noise,
    single_type_distribution,
    validate_noise_type,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_MISMATCH, EXIT_EMPTY = 0, 2, 3, 4, 5


class ConfigError(Exception):
    pass


def fmt(x):
    return format(float(x), ".12g")


def parse_grid(spec):
    """``start:end:step`` with both ends included (to half-step rounding)."""
    try:
        start, end, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise ConfigError(f"grid must look like start:end:step, got {spec!r}") from None
    if step <= 0 or start >= end:
        raise ConfigError(f"invalid grid {spec!r}: need start < end and step > 0")
    n = int(np.floor((end - start) / step + 0.5))
    return [round(start + i * step, 12) for i in range(n + 1)]


def build_noise(args):
    """Noise distribution described by the shared noise flags."""
    kind = args.noise
    try:
        if kind == "ideal":
            d = no_noise()
        elif kind == "depolarizing":
            d = depolarizing_distribution(_need(args, "p"))
        elif kind == "single_type":
            d = single_type_distribution(validate_noise_type(_need(args, "type")), _need(args, "p"))
        elif kind == "class":
            d = class_distribution(_need(args, "class_tag"), _need(args, "p"))
        elif kind == "file":
            d = NoiseDistribution.from_text(Path(_need(args, "noise_file")).read_text())
        else:
            raise ConfigError(f"unknown noise kind {kind!r}")
        if args.eta is not None:
            d = compose_distributions(d, absorb_measurement_noise(args.eta))
    except (OutOfRange, ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from exc
    return d


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        flag = {"class_tag": "class", "noise_file": "noise-file"}.get(name, name)
        raise ConfigError(f"--noise {args.noise} requires --{flag}")
    return value


def resolved_config(args):
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    return json.dumps(cfg, sort_keys=True)


def write_csv(args, header, rows, trailer=()):
    buf = io.StringIO()
    buf.write(f"# noisy-distill {args.command} {resolved_config(args)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    for line in trailer:
        buf.write(f"# {line}\n")
    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_simulate(args):
    d = build_noise(args)
    rows = []
    for F in parse_grid(args.f):
        out = noisy_round_oracle(F, d)
        rows.append([fmt(F), fmt(out.fidelity_out), fmt(out.p_succ), fmt(out.fidelity_out - F)])
    write_csv(args, ["F", "F_out", "p_succ", "delta_F"], rows)
    return EXIT_OK


def cmd_classify(args):
    rows = classify_all(parse_grid(args.f))
    counts = Counter(curve for _, _, curve in rows)
    agree = all(rule == curve for _, rule, curve in rows)
    out = [[t, rule, curve or "none", str(rule == curve).lower()] for t, rule, curve in rows]
    summary = "summary " + " ".join(f"{tag}:{counts.get(tag, 0)}" for tag in CLASS_TAGS)
    write_csv(args, ["type", "rule_class", "curve_class", "agrees"], out, [summary])
    ok = agree and all(counts.get(tag, 0) == n for tag, n in CARDINALITIES.items())
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_thresholds(args):
    iv = distillable_interval(build_noise(args))
    print(f"F_min={iv.f_min:.4f} F_max={iv.f_max:.4f}")
    if args.out:
        write_csv(args, ["F_min", "F_max"], [[fmt(iv.f_min), fmt(iv.f_max)]])
    return EXIT_OK


def cmd_iterate(args):
    if args.rounds < 1:
        raise ConfigError("--rounds must be at least 1")
    if not 0 <= args.f0 <= 1:
        raise ConfigError("--f0 must lie in [0, 1]")
    rows = iterate_protocol(args.f0, build_noise(args), args.rounds)
    out = [[n, fmt(F), "" if np.isnan(ps) else fmt(ps)] for n, F, ps in rows]
    write_csv(args, ["round", "F", "p_succ"], out)
    return EXIT_OK


def cmd_measurement(args):
    try:
        mc = measurement_noise_curves(args.eta, args.p, parse_grid(args.f))
    except OutOfRange as exc:
        raise ConfigError(str(exc)) from exc
    grid = mc.grid
    rows, trailer = [], []

    def emit(name, cls, label, delta):
        rows.extend([name, cls, label, fmt(F), fmt(v)] for F, v in zip(grid, delta))

    def describe(c):
        iv = c.interval
        span = "empty" if iv is None else f"F_min={iv.f_min:.4f} F_max={iv.f_max:.4f}"
        return f"interval {c.label} members={len(c.members)} {span}"

    bases = CLASS_TAGS if args.base == "all" else (args.base,)
    if args.base in ("all", "ideal"):
        emit("none", "ideal", "ideal", mc.ideal.delta)
        trailer.append(describe(mc.ideal))
    if args.base in ("all", "D"):
        emit("uniform", "D", "D", mc.depolarizing.delta)
        trailer.append(describe(mc.depolarizing))
    for tag in bases:
        if tag not in CLASS_TAGS:
            continue
        for c in mc.clusters_of(tag):
            for t in c.members:
                emit(t, tag, c.label, c.delta)
            trailer.append(describe(c))
    write_csv(args, ["type", "class", "subcluster", "F", "delta_F"], rows, trailer)
    return EXIT_OK


def _add_noise_flags(p, eta_help="compose imperfect-measurement noise with this eta"):
    p.add_argument("--noise", choices=["ideal", "depolarizing", "single_type", "class", "file"],
                   default="ideal")
    p.add_argument("--p", type=float, default=None, help="total error weight")
    p.add_argument("--type", default=None, help="noise type IJKL for --noise single_type")
    p.add_argument("--class", dest="class_tag", choices=list(CLASS_TAGS), default=None)
    p.add_argument("--noise-file", default=None, help="file of 'IJKL weight' lines")
    p.add_argument("--eta", type=float, default=None, help=eta_help)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="noisy-distill",
        description="Recurrence entanglement distillation under local Pauli noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="one round on a fidelity grid")
    _add_noise_flags(p)
    p.add_argument("--f", default="0.25:1.0:0.01", help="grid start:end:step")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classify", help="classify all 256 noise types")
    p.add_argument("--f", default="0.25:1.0:0.01")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("thresholds", help="distillable interval [F_min, F_max]")
    _add_noise_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("iterate", help="repeat the protocol from an initial fidelity")
    _add_noise_flags(p)
    p.add_argument("--f0", type=float, required=True)
    p.add_argument("--rounds", type=int, default=50)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("measurement", help="class curves under imperfect measurement")
    p.add_argument("--eta", type=float, default=0.98)
    p.add_argument("--p", type=float, default=0.04, help="weight of each noise type")
    p.add_argument("--base", choices=["all", "ideal", "D", *CLASS_TAGS], default="all")
    p.add_argument("--f", default="0.25:1.0:0.01")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_measurement)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EmptyInterval as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (ZeroSuccessProbability, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
