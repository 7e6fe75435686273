"""Command-line surface: program values, frontier/region/concat scans,
one-shot converse bounds, exact certification, and LP dumps.

Machine-readable results go to --out (CSV with header "R1,R2" for rate
frontiers, JSON otherwise) together with a JSON run manifest; a short human
summary is printed to stdout.  The solver backend can also be chosen with
the NSMAC_SOLVER environment variable.
"""

import argparse
import json
import math
import os
import platform
import sys
import time
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .channels import (Channel, brute_force_success, make_bac, make_noisy_bac,
                       read_channel)
from .concat import concat_scan
from .frontier import ScanConfig, zero_error_frontier
from .lp import LpError, check_value_is_one, dump_lp
from .orbits import OrbitSystem
from .programs import (build_ns_lp_element, build_ns_lp_orbit,
                       build_relaxed_lp, check_nssr_inequality, indep_ns_sum,
                       solve_ns, solve_relaxed)
from .regions import (JointDist, bac_relaxed_closed_form_frontier,
                      classical_region, one_shot_converse, relaxed_region)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3


def _add_channel_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--channel", default="bac",
                   help="named channel (bac, noisy-bac) or a channel file")
    p.add_argument("--eps1", type=str, default="1/1000",
                   help="first flip probability for noisy-bac (fraction ok)")
    p.add_argument("--eps2", type=str, default=None,
                   help="second flip probability for noisy-bac "
                        "(defaults to eps1)")


def _parse_prob(s: str) -> Fraction:
    return Fraction(s)


def _get_channel(args) -> Channel:
    name = args.channel
    if name == "bac":
        return make_bac()
    if name == "noisy-bac":
        e1 = _parse_prob(args.eps1)
        e2 = _parse_prob(args.eps2) if args.eps2 is not None else e1
        return make_noisy_bac(e1, e2)
    if os.path.exists(name):
        return read_channel(name)
    raise SystemExit(f"unknown channel {name!r} (not a name or a file)")


def _solver(args) -> Optional[str]:
    s = getattr(args, "solver", None) or os.environ.get("NSMAC_SOLVER")
    return s or None


def _parse_certify(s: Optional[str], n: int):
    """'exact' or 'float[:tol]'; default exact for n <= 4."""
    if s is None:
        s = "exact" if n <= 4 else "float:1e-7"
    if s == "exact":
        return "exact", 1e-7
    if s.startswith("float"):
        _, _, t = s.partition(":")
        return "float", float(t) if t else 1e-7
    raise SystemExit(f"bad --certify value {s!r}")


def _write_outputs(args, payload: dict, csv_text: Optional[str] = None) -> None:
    out = getattr(args, "out", None)
    manifest = {
        "argv": sys.argv[1:],
        "config": {k: v for k, v in vars(args).items()
                   if k != "func" and not callable(v)},
        "versions": {"nsmac": __version__,
                     "python": platform.python_version(),
                     "numpy": np.__version__},
        "elapsed_s": payload.pop("_elapsed", None),
        "result": payload,
    }
    if out:
        if csv_text is not None:
            with open(out, "w") as f:
                f.write(csv_text)
            mpath = out + ".manifest.json"
        else:
            mpath = out if out.endswith(".json") else out + ".json"
        with open(mpath, "w") as f:
            json.dump(manifest, f, indent=2, default=str)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_success(args) -> int:
    W = _get_channel(args)
    t0 = time.time()
    if args.mode == "ns":
        val, _ = solve_ns(W, args.n, args.k1, args.k2, solver=_solver(args))
    elif args.mode == "relaxed":
        val = solve_relaxed(W, args.n, args.k1, args.k2, solver=_solver(args))
    elif args.mode in ("classical", "classical-sum"):
        from .channels import tensor_power
        Wn = tensor_power(W, args.n) if args.n > 1 else W
        obj = "joint" if args.mode == "classical" else "sum"
        val = brute_force_success(Wn, args.k1, args.k2, objective=obj)
    else:
        raise SystemExit(f"unknown mode {args.mode!r}")
    verdict = ""
    if args.certify is not None and args.mode in ("ns", "relaxed"):
        mode, tol = _parse_certify(args.certify, args.n)
        builder = build_ns_lp_orbit if args.mode == "ns" else \
            (lambda *a, **k: build_relaxed_lp(*a, level="orbit", **k))
        lp = builder(W, args.n, args.k1, args.k2,
                     rational=(mode == "exact" and W.is_rational))
        chk = check_value_is_one(lp, tol=tol, mode=mode, solver=_solver(args))
        verdict = f"  [S=1 check: {chk.status}]"
    print(f"S_{args.mode}(W^(x{args.n}), {args.k1}, {args.k2}) = "
          f"{val:.12g}{verdict}")
    _write_outputs(args, {"value": val, "verdict": verdict.strip(),
                          "_elapsed": time.time() - t0})
    return EXIT_OK


def _cmd_frontier(args) -> int:
    W = _get_channel(args)
    mode, tol = _parse_certify(args.certify, args.n)
    t0 = time.time()
    scan = zero_error_frontier(ScanConfig(
        channel=W, n=args.n, mode=args.mode, certify=mode, tol=tol,
        k1_max=args.k1_max, k2_cap=args.k2_cap, solver=_solver(args)))
    lines = ["R1,R2"]
    for p in scan.points:
        print(f"k1={p.k1:5d} k2={p.k2:5d}  R=({p.rate1:.6f}, {p.rate2:.6f})")
        lines.append(f"{p.rate1:.10f},{p.rate2:.10f}")
    for f in scan.failures:
        print(f"k1={f['k1']}: solver failure: {f['error']}", file=sys.stderr)
    _write_outputs(args, {
        "points": [vars(p) for p in scan.points],
        "failures": scan.failures,
        "_elapsed": time.time() - t0}, csv_text="\n".join(lines) + "\n")
    return EXIT_SOLVER if scan.failures and not scan.points else EXIT_OK


def _cmd_region(args) -> int:
    W = _get_channel(args)
    t0 = time.time()
    if args.kind == "classical":
        fr = classical_region(W, grid=args.grid)
    elif args.kind == "relaxed":
        fr = relaxed_region(W, grid=min(args.grid, 256))
    elif args.kind == "relaxed-closed-form":
        fr = bac_relaxed_closed_form_frontier()
    else:
        raise SystemExit(f"unknown region kind {args.kind!r}")
    csv_text = fr.to_csv(samples=args.samples)
    print(f"{args.kind} region: {len(fr.hull)} hull points, "
          f"max sum-rate {fr.max_sum_rate():.6f}")
    if not getattr(args, "out", None):
        sys.stdout.write(csv_text)
    _write_outputs(args, {"max_sum_rate": fr.max_sum_rate(),
                          "_elapsed": time.time() - t0}, csv_text=csv_text)
    return EXIT_OK


def _parse_range(s: str) -> range:
    a, _, b = s.partition(":")
    return range(int(a), int(b) + 1) if b else range(int(a), int(a) + 1)


def _cmd_concat(args) -> int:
    W = _get_channel(args)
    t0 = time.time()
    fr = concat_scan(W, args.n, _parse_range(args.k1), _parse_range(args.k2),
                     solver=_solver(args))
    csv_text = fr.to_csv()
    meta = [p.params for p in fr.points]
    print(f"concat scan n={args.n}: {len(fr.points)} corner points, "
          f"max sum-rate {fr.max_sum_rate():.6f}")
    if getattr(fr, "failures", None):
        for k1, k2, err in fr.failures:
            print(f"(k1={k1}, k2={k2}) failed: {err}", file=sys.stderr)
    if not getattr(args, "out", None):
        sys.stdout.write(csv_text)
    _write_outputs(args, {"max_sum_rate": fr.max_sum_rate(), "points": meta,
                          "failures": getattr(fr, "failures", []),
                          "_elapsed": time.time() - t0}, csv_text=csv_text)
    return EXIT_OK


def _cmd_converse(args) -> int:
    W = _get_channel(args)
    if args.dist == "uniform":
        p1 = [1.0 / W.nx1] * W.nx1
        p2 = [1.0 / W.nx2] * W.nx2
        P = JointDist.product(p1, p2)
    else:
        raise SystemExit(f"unknown input distribution {args.dist!r}")
    t0 = time.time()
    b1, b2, bsum = one_shot_converse(W, P, args.eps)
    print(f"one-shot converse at eps={args.eps}: "
          f"R1 <= {b1:.6f}, R2 <= {b2:.6f}, R1+R2 <= {bsum:.6f}")
    _write_outputs(args, {"R1": b1, "R2": b2, "Rsum": bsum,
                          "_elapsed": time.time() - t0})
    return EXIT_OK


def _cmd_indep(args) -> int:
    W = _get_channel(args)
    t0 = time.time()
    val, _ = indep_ns_sum(W, args.k1, args.k2, seed=args.seed)
    print(f"independent-NS sum-success heuristic "
          f"(k1={args.k1}, k2={args.k2}): {val:.9f}")
    report = None
    if args.l1 is not None and args.l2 is not None:
        rep = check_nssr_inequality(W, args.k1, args.k2, args.l1, args.l2)
        report = vars(rep)
        print(f"random-coding inequality: {rep.lhs:.9f} <= {rep.rhs:.9f} "
              f"({'holds' if rep.holds else 'VIOLATED'})")
    _write_outputs(args, {"value": val, "nssr": report,
                          "_elapsed": time.time() - t0})
    return EXIT_OK


def _cmd_certify(args) -> int:
    W = _get_channel(args)
    mode, tol = _parse_certify(args.certify or "exact", args.n)
    t0 = time.time()
    if args.mode == "relaxed":
        lp = build_relaxed_lp(W, args.n, args.k1, args.k2, level="orbit",
                              rational=(mode == "exact" and W.is_rational))
    else:
        lp = build_ns_lp_orbit(W, args.n, args.k1, args.k2,
                               rational=(mode == "exact" and W.is_rational))
    chk = check_value_is_one(lp, tol=tol, mode=mode, solver=_solver(args))
    print(f"S=1 check ({mode}): {chk.status}, value {float(chk.value):.12g}")
    _write_outputs(args, {"status": chk.status, "value": float(chk.value),
                          "is_one": chk.is_one,
                          "_elapsed": time.time() - t0})
    return EXIT_OK if chk.is_one else 1


def _cmd_dump_lp(args) -> int:
    W = _get_channel(args)
    rational = args.rational and W.is_rational
    if args.level == "element":
        if args.mode == "relaxed":
            lp = build_relaxed_lp(W, 1, args.k1, args.k2, level="element",
                                  rational=rational)
        else:
            lp = build_ns_lp_element(W, args.k1, args.k2, rational=rational)
    else:
        if args.mode == "relaxed":
            lp = build_relaxed_lp(W, args.n, args.k1, args.k2, level="orbit",
                                  rational=rational)
        else:
            lp = build_ns_lp_orbit(W, args.n, args.k1, args.k2,
                                   rational=rational)
    text = dump_lp(lp)
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(text)
        print(f"wrote LP ({lp.num_vars} vars, {len(lp.rows)} rows) "
              f"to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nsmac",
        description="non-signaling assistance for multiple-access channels")
    sub = ap.add_subparsers(dest="command", required=True)

    def new(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        _add_channel_args(p)
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument("--solver", default=None,
                       help="LP backend: bundled (default) or highs")
        p.set_defaults(func=fn)
        return p

    p = new("success", _cmd_success, help="success probability of a program")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--mode", default="ns",
                   choices=["ns", "relaxed", "classical", "classical-sum"])
    p.add_argument("--certify", default=None,
                   help="also run an S=1 check: 'exact' or 'float:TOL'")

    p = new("frontier", _cmd_frontier, help="zero-error rate-pair scan")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--mode", default="ns", choices=["ns", "relaxed"])
    p.add_argument("--k1-max", type=int, default=None)
    p.add_argument("--k2-cap", type=int, default=None)
    p.add_argument("--certify", default=None)

    p = new("region", _cmd_region, help="capacity-region frontier CSV")
    p.add_argument("--kind", default="classical",
                   choices=["classical", "relaxed", "relaxed-closed-form"])
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--samples", type=int, default=None,
                   help="resample the hull at this many fixed R1 values")

    p = new("concat", _cmd_concat, help="concatenated-code inner bound scan")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--k1", default="2:4", help="range a:b of message counts")
    p.add_argument("--k2", default="2:4")

    p = new("converse", _cmd_converse, help="one-shot hypothesis-testing bounds")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--dist", default="uniform")

    p = new("indep", _cmd_indep, help="independent-assistance heuristic")
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--l1", type=int, default=None)
    p.add_argument("--l2", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)

    p = new("certify", _cmd_certify, help="decide S = 1 with certification")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--mode", default="ns", choices=["ns", "relaxed"])
    p.add_argument("--certify", default=None)

    p = new("dump-lp", _cmd_dump_lp, help="serialize an LP instance")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--mode", default="ns", choices=["ns", "relaxed"])
    p.add_argument("--level", default="orbit", choices=["element", "orbit"])
    p.add_argument("--rational", action="store_true",
                   help="emit exact rational coefficients")
    return ap


def cli_dispatch(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except SystemExit as e:
        if isinstance(e.code, int):
            return e.code
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except (LpError, RuntimeError) as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER


def main() -> None:
    sys.exit(cli_dispatch())
