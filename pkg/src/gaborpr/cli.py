"""Command-line front end: ``gpr <command> [flags]``.

Every structured output is a JSON envelope ``{"header", "config", "result"}``;
the wall-clock timestamp lives only in ``header.timestamp`` so reruns differ
in that field alone.  Plot data goes to CSV.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .counterexamples import (
    ChirpExp,
    CounterexamplePair,
    LineExp,
    RationalAngleSum,
    lattice_pair,
    low_density_Q,
    pair_from_chirp,
    pair_from_exponential_Q,
    q_realness_check,
    separable_counterexample,
)
from .lab import certify_counterexample, default_threads, reconstruction_probe
from .sampling import (
    IntersectingLines,
    IrregularLine,
    LineConfig,
    ParallelLines,
    RootLine,
    SamplingSet,
    SqrtLattice,
    counting_function,
    gamma_star,
    generator_from_descriptor,
    ratio_rationality,
)
from .signals import PHI, combine, hermite_basis, hermite_function, signal_from_dict
from .transforms import Measurements, gabor, magnitude_samples

EXIT_FAIL = 2  # --strict and the check did not pass

_REAL = re.compile(
    r"""^\s*(?P<sign>[+-])?\s*
        (?P<num>(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)?\s*\*?\s*
        (?P<pi>pi)?\s*
        (/\s*(?P<den>(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?))?\s*$""",
    re.X,
)


def parse_real(text: str) -> float:
    """Float with optional multiples of pi: ``0.25``, ``pi``, ``-pi/4``, ``3pi/4``, ``3*pi/2``."""
    m = _REAL.match(str(text))
    if not m or (m["num"] is None and m["pi"] is None):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}")
    val = float(m["num"]) if m["num"] is not None else 1.0
    if m["pi"]:
        val *= math.pi
    if m["den"] is not None:
        den = float(m["den"])
        if den == 0:
            raise argparse.ArgumentTypeError(f"division by zero in {text!r}")
        val /= den
    return -val if m["sign"] == "-" else val


def parse_points(text: str) -> list[tuple[float, float]]:
    """``"t,w;t,w;..."`` into a list of pairs (pi literals allowed)."""
    out = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected 't,w' pairs, got {chunk!r}")
        out.append((parse_real(parts[0]), parse_real(parts[1])))
    return out


def parse_list(text: str) -> list[float]:
    return [parse_real(x) for x in re.split(r"[,\s]+", text.strip()) if x]


def _envelope(command: str, config: dict, result) -> dict:
    return {
        "header": {
            "tool": "gaborpr",
            "version": __version__,
            "command": command,
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        },
        "config": config,
        "result": result,
    }


def _config(args) -> dict:
    skip = {"func", "command", "threads"}  # results do not depend on the worker count
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit(args, result):
    _write(json.dumps(_envelope(args.command, _config(args), result), indent=2, default=_json_default), args.out)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    return d["result"] if isinstance(d, dict) and "header" in d and "result" in d else d


def _load_set(path: str) -> SamplingSet:
    return SamplingSet.from_dict(_load_json(path))


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError("missing required flag(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


# ---------------------------------------------------------------------------
# commands


def _generator(args):
    kind = args.kind
    if kind == "sqrt-lattice":
        _need(args, "a", "b")
        return SqrtLattice(args.a, args.b)
    if kind == "root-line":
        _need(args, "a")
        return RootLine(args.a, args.nu, args.theta0 or 0.0, args.center or (0.0, 0.0))
    if kind == "parallel-lines":
        _need(args, "theta0", "a")
        if not args.anchors or len(args.anchors) != 3:
            raise ValueError("parallel-lines needs exactly 3 anchors: --anchors 't,w;t,w;t,w'")
        return ParallelLines(args.theta0, args.anchors, args.a, args.nu)
    if kind == "intersecting-lines":
        _need(args, "theta1", "theta2", "a")
        return IntersectingLines(args.center or (0.0, 0.0), args.theta1, args.theta2, args.a, args.nu)
    if kind == "irregular-line":
        _need(args, "lambdas")
        return IrregularLine(args.lambdas, args.theta0 or 0.0, args.center or (0.0, 0.0))
    raise ValueError(f"unknown set kind {kind!r}")


def cmd_gen_set(args):
    gen = _generator(args)
    if args.kind == "irregular-line":
        s = gen.sample(args.radius)
    else:
        _need(args, "radius")
        s = gen.sample(args.radius)
    if args.format == "csv":
        _write(s.to_csv(), args.out)
    else:
        _emit(args, s.to_dict())
    return 0


def _unit(args):
    return complex(args.c1[0], args.c1[1]), complex(args.c2[0], args.c2[1])


def _pair_for(args) -> CounterexamplePair | None:
    c1, c2 = _unit(args)
    kind = args.kind
    if kind == "lattice":
        _need(args, "a")
        return lattice_pair(args.a, args.b if args.b is not None else args.a, c1, c2)
    if kind == "parallel":
        _need(args, "theta0", "a")
        if not args.anchors or len(args.anchors) != 3:
            raise ValueError("parallel needs exactly 3 anchors: --anchors 't,w;t,w;t,w'")
        cfg = LineConfig(args.theta0, args.anchors, args.a, args.nu)
        ParallelLines(cfg.theta0, cfg.anchors, cfg.a, cfg.nu)  # validates geometry
        intended = {"kind": "parallel-lines", "params": {"theta0": cfg.theta0, "anchors": [list(p) for p in cfg.anchors], "a": cfg.a, "nu": cfg.nu}}
        if args.chirp:
            q = ChirpExp.for_parallel_lines(cfg)
            return pair_from_chirp(q.c, q.alpha, q.z0, c1, c2, provenance="parallel-line chirp", intended=intended)
        return pair_from_exponential_Q(LineExp.from_config(cfg), args.width, c1, c2, intended=intended)
    if kind == "intersect":
        _need(args, "theta1", "theta2", "a")
        center = args.center or (0.0, 0.0)
        IntersectingLines(center, args.theta1, args.theta2, args.a, args.nu)  # validates geometry
        intended = {"kind": "intersecting-lines", "params": {"center": list(center), "theta1": args.theta1, "theta2": args.theta2, "a": args.a, "nu": args.nu}}
        if args.case:
            q = ChirpExp.for_intersecting_lines(args.case, args.theta1, args.theta2, args.a, center)
            return pair_from_chirp(q.c, q.alpha, q.z0, c1, c2, provenance=f"intersecting-line chirp, case {args.case}", intended=intended)
        pq = ratio_rationality((args.theta1 - args.theta2) / math.pi)
        if pq is None:
            raise ValueError("(theta1 - theta2)/pi is not rational; pass --case for a chirp multiplier")
        q = RationalAngleSum(pq[0], pq[1], args.theta2, complex(center[1], center[0]))
        return pair_from_exponential_Q(q, args.width, c1, c2, intended=intended)
    if kind == "separable":
        _need(args, "a")
        base = lattice_pair(args.a, args.b if args.b is not None else args.a, c1, c2)
        return separable_counterexample(base, _extra(args.extra))
    raise ValueError(f"unknown counterexample kind {kind!r}")


def _extra(spec: str):
    if spec == "gaussian":
        return PHI
    m = re.fullmatch(r"hermite:(\d+)", spec)
    if m:
        return hermite_function(int(m[1]))
    raise ValueError(f"unknown extra factor {spec!r} (use 'gaussian' or 'hermite:N')")


def cmd_counterexample(args):
    if args.kind == "low-density":
        _need(args, "a", "radius")
        if not args.nu > 0.5:
            raise ValueError(f"low-density sets need nu > 1/2 (density 1/nu < 2), got nu = {args.nu}")
        s = RootLine(args.a, args.nu, args.theta0 or 0.0, args.center or (0.0, 0.0)).sample(args.radius)
        gs = gamma_star(s)
        q = low_density_Q(gs)
        rep = q_realness_check(q, gs)
        est = q.estimate
        result = {
            "provenance": f"canonical product on a root line, a={args.a:g}, nu={args.nu:g}",
            "q": q.to_dict(),
            "convergence_exponent": est.rho,
            "low_confidence": est.low_confidence,
            "realness": rep.to_dict(),
        }
        _emit(args, result)
        return 0
    pair = _pair_for(args)
    _emit(args, pair.to_dict())
    return 0


def cmd_verify(args):
    pair = CounterexamplePair.from_dict(_load_json(args.pair))
    s = _load_set(args.set)
    rep = certify_counterexample(pair, s, tol=args.tol, distinct_tol=args.distinct_tol)
    _emit(args, rep.to_dict())
    if args.strict and not rep.counterexample_certified:
        return EXIT_FAIL
    return 0


def _planted(args):
    if args.signal:
        return signal_from_dict(_load_json(args.signal))
    rng = np.random.default_rng(args.seed)
    c = (rng.standard_normal(args.dim) + 1j * rng.standard_normal(args.dim)) / 2
    return combine(c, hermite_basis(args.dim))


def cmd_probe(args):
    planted = None
    if args.measurements:
        with open(args.measurements, encoding="utf-8") as fh:
            meas = Measurements.from_csv(fh.read())
    else:
        _need(args, "set")
        planted = _planted(args)
        meas = magnitude_samples(planted, _load_set(args.set))
    res = reconstruction_probe(
        meas, args.dim, args.restarts, args.seed, planted=planted, max_iter=args.max_iter, threads=args.threads
    )
    out = res.to_dict()
    out["success_rate"] = res.success_rate(args.threshold) if planted is not None else None
    _emit(args, out)
    if args.strict and planted is not None and not (res.rel_error is not None and res.rel_error <= args.threshold):
        return EXIT_FAIL
    return 0


def _density_source(s: SamplingSet):
    try:
        return generator_from_descriptor(s.descriptor)
    except (KeyError, ValueError):
        return s


def cmd_density(args):
    s = _load_set(args.set)
    src = _density_source(s)
    r = np.geomspace(args.rmin, args.rmax, args.steps)
    counts = np.array([counting_function(src, x) for x in r])
    lines = ["r,count,slope"]
    for i, (ri, ci) in enumerate(zip(r, counts)):
        top = (r[: i + 1] >= ri / 10) & (counts[: i + 1] > 0)
        slope = float(np.polyfit(np.log(r[: i + 1][top]), np.log(counts[: i + 1][top]), 1)[0]) if top.sum() >= 2 else float("nan")
        lines.append(f"{float(ri)!r},{int(ci)},{slope!r}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _summary(d: dict) -> list[str]:
    out = []
    if "flags" in d and "on_set_max_dev" in d:
        out.append(f"on-set max deviation: {d['on_set_max_dev']:.3e}")
        w = d.get("off_set_witness") or {}
        if w:
            out.append(f"off-set witness: {w['point']} deviation {w['dev']:.3e}")
        out.append(f"relative phase distance: {d['relative_phase_distance']:.3e}")
        out += [f"{k}: {v}" for k, v in d["flags"].items()]
    elif "runs" in d:
        out.append(f"basis: {d['basis']}, restarts: {len(d['runs'])}")
        out.append(f"best objective: {d['objective']:.3e}")
        if d.get("rel_error") is not None:
            out.append(f"best relative error: {d['rel_error']:.3e}")
        if d.get("success_rate") is not None:
            out.append(f"success rate: {d['success_rate']:.2f}")
    elif "f1" in d:
        out.append(f"pair: {d.get('provenance', '')}")
        out.append(f"multiplier: {(d.get('q') or {}).get('kind')}")
    elif "points" in d:
        out.append(f"set: {d.get('kind')} with {len(d['points'])} points, R={d.get('R')}")
        out += [f"flag {k}: {v}" for k, v in (d.get("flags") or {}).items()]
    else:
        out.append("keys: " + ", ".join(sorted(d)))
    return out


def cmd_report(args):
    if args.pair and args.set:
        pair = CounterexamplePair.from_dict(_load_json(args.pair))
        s = _load_set(args.set)
        pts = s.points
        d = s.dim
        if d == 1:
            v1, v2 = np.abs(gabor(pair.f1, pts[:, 0], pts[:, 1])), np.abs(gabor(pair.f2, pts[:, 0], pts[:, 1]))
            head = "t,w"
        else:
            v1, v2 = np.abs(gabor(pair.f1, pts[:, :d], pts[:, d:])), np.abs(gabor(pair.f2, pts[:, :d], pts[:, d:]))
            head = ",".join([f"t{l + 1}" for l in range(d)] + [f"w{l + 1}" for l in range(d)])
        rows = [head + ",abs_v1,abs_v2"]
        rows += [",".join(repr(float(x)) for x in p) + f",{a!r},{b!r}" for p, a, b in zip(pts, v1.tolist(), v2.tolist())]
        _write("\n".join(rows) + "\n", args.out)
        return 0
    if not args.inputs:
        raise ValueError("report needs input files, or --pair together with --set for plot data")
    lines = []
    for path in args.inputs:
        lines.append(f"## {os.path.basename(path)}")
        lines += ["- " + x for x in _summary(_load_json(path))]
        lines.append("")
    _write("\n".join(lines), args.out)
    return 0


# ---------------------------------------------------------------------------


def _unit_arg(text: str):
    z = complex(text.replace(" ", "").replace("i", "j")) if "pi" not in text else None
    if z is None:
        raise argparse.ArgumentTypeError("give the unimodular constant as a complex literal, e.g. 1, 1j, -0.6+0.8j")
    return (z.real, z.imag)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gpr", description="Gabor phase retrieval sampling experiments")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", "-o", default=None, help="output file (default: stdout)")
        sp.add_argument("--strict", action="store_true", help="exit nonzero when the check fails")
        sp.add_argument("--threads", type=int, default=None, help="worker cap (default: $GPR_THREADS or 1)")

    def geometry(sp):
        sp.add_argument("--a", type=parse_real)
        sp.add_argument("--b", type=parse_real)
        sp.add_argument("--nu", type=parse_real, default=0.5)
        sp.add_argument("--theta0", type=parse_real)
        sp.add_argument("--theta1", type=parse_real)
        sp.add_argument("--theta2", type=parse_real)
        sp.add_argument("--radius", type=parse_real)
        sp.add_argument("--anchors", type=parse_points, help="'t,w;t,w;t,w'")
        sp.add_argument("--center", type=lambda s: parse_points(s)[0], help="'t,w'")

    g = sub.add_parser("gen-set", help="generate a sampling set")
    g.add_argument("--kind", required=True, choices=["sqrt-lattice", "root-line", "parallel-lines", "intersecting-lines", "irregular-line"])
    geometry(g)
    g.add_argument("--lambdas", type=parse_list, help="increasing positive values for irregular-line")
    g.add_argument("--format", choices=["json", "csv"], default="json")
    common(g)
    g.set_defaults(func=cmd_gen_set)

    c = sub.add_parser("counterexample", help="build a counterexample pair")
    c.add_argument("--kind", required=True, choices=["lattice", "parallel", "intersect", "low-density", "separable"])
    geometry(c)
    c.add_argument("--case", choices=["cos", "sin", "double"], help="chirp multiplier for intersecting lines")
    c.add_argument("--chirp", action="store_true", help="chirp multiplier for parallel square-root lines")
    c.add_argument("--width", type=parse_real, default=0.1, help="base Gaussian width for exponential multipliers")
    c.add_argument("--extra", default="gaussian", help="extra factor for separable pairs: gaussian | hermite:N")
    c.add_argument("--c1", type=_unit_arg, default=(1.0, 0.0))
    c.add_argument("--c2", type=_unit_arg, default=(0.0, 1.0))
    common(c)
    c.set_defaults(func=cmd_counterexample)

    v = sub.add_parser("verify", help="certify a pair on a set")
    v.add_argument("--pair", required=True)
    v.add_argument("--set", required=True)
    v.add_argument("--tol", type=float, default=1e-8)
    v.add_argument("--distinct-tol", type=float, default=1e-2)
    common(v)
    v.set_defaults(func=cmd_verify)

    pr = sub.add_parser("probe", help="reconstruction probe")
    pr.add_argument("--set")
    pr.add_argument("--measurements", help="CSV t,w,magnitude (instead of a planted signal)")
    pr.add_argument("--signal", help="signal JSON to plant (default: random Hermite coefficients)")
    pr.add_argument("--dim", type=int, default=8)
    pr.add_argument("--restarts", type=int, default=16)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--max-iter", type=int, default=5000)
    pr.add_argument("--threshold", type=float, default=1e-3)
    common(pr)
    pr.set_defaults(func=cmd_probe)

    d = sub.add_parser("density", help="counting function and log-log slope as CSV")
    d.add_argument("--set", required=True)
    d.add_argument("--rmin", type=parse_real, default=1.0)
    d.add_argument("--rmax", type=parse_real, default=100.0)
    d.add_argument("--steps", type=int, default=20)
    common(d)
    d.set_defaults(func=cmd_density)

    r = sub.add_parser("report", help="summarise JSON artifacts, or emit magnitude plot data")
    r.add_argument("inputs", nargs="*")
    r.add_argument("--pair")
    r.add_argument("--set")
    common(r)
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = default_threads()
    try:
        return args.func(args)
    except (ValueError, TypeError, KeyError, OSError) as e:
        print(f"gpr {args.command}: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
