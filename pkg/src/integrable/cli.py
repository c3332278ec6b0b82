"""Command-line interface: every verifier, solver, and sampler behind one
binary with machine-readable output.

Output contract: JSON run reports by default (sorted keys, so identical
argv gives byte-identical output); CSV for bulk tables. wall_time is null
unless --timing is passed, keeping reports deterministic. Exit codes:
0 all residuals within tolerance, 1 a residual check failed, 2 usage or
parameter error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import models, mpa, oscillator, sixvertex, uqsl2, ybe

PASS_EXIT = 0
FAIL_EXIT = 1
USAGE_EXIT = 2


def _report(command: str, params: dict, results: dict, residuals: dict,
            tol: float, timing_start) -> dict:
    ok = all(v <= tol for v in residuals.values())
    return {
        "command": command,
        "params": params,
        "results": results,
        "residuals": residuals,
        "pass": bool(ok),
        "wall_time": (time.perf_counter() - timing_start)
        if timing_start is not None
        else None,
    }


def _emit(report: dict) -> int:
    print(json.dumps(report, indent=2, sort_keys=True))
    return PASS_EXIT if report["pass"] else FAIL_EXIT


def _cmd_verify(args, t0):
    tol = args.tol
    if args.target == "ybe":
        fam = args.family
        if fam == "r-alpha-beta":
            R = ybe.r_alpha_beta(args.alpha, args.beta)
        elif fam == "permutation":
            from .tensor import permutation_operator

            R = permutation_operator(2, 2)
        elif fam == "identity":
            from .tensor import identity

            R = identity((2, 2))
        elif fam == "frt":
            R = ybe.frt_r(args.q)
        else:
            print(f"unknown --family {fam}", file=sys.stderr)
            return USAGE_EXIT
        res = ybe.verify_braided_ybe(R, tol=tol)
        residuals = {"braided_ybe": min(res["residual"], res["r_check_residual"])}
        rep = _report(
            "verify ybe",
            {"family": fam, "alpha": args.alpha, "beta": args.beta, "q": args.q},
            res,
            residuals,
            tol,
            t0,
        )
        return _emit(rep)
    if args.target == "spectral":
        fam = ybe.asep_r_family(args.q)
        worst = 0.0
        for z in args.grid:
            for w in args.grid:
                worst = max(worst, ybe.verify_spectral_ybe(fam, z, w, tol)["residual"])
        rep = _report(
            "verify spectral",
            {"q": args.q, "grid": list(args.grid)},
            {},
            {"spectral_ybe": worst},
            tol,
            t0,
        )
        return _emit(rep)
    if args.target == "reflection":
        rfam = ybe.asep_r_family(args.q)
        kfam = ybe.reflection_family(args.q, args.alpha, args.gamma, side="left")
        kbar = ybe.reflection_family(args.q, args.beta, args.delta, side="right")
        worst = 0.0
        evaluated = 0
        for z in args.grid:
            for w in args.grid:
                for kf in (kfam, kbar):
                    try:
                        res = ybe.verify_reflection_equation(rfam, kf, z, w, tol)
                    except ybe.EvaluationPole:
                        continue  # grid point sits on a pole of R or K
                    worst = max(worst, res["residual"])
                    evaluated += 1
        if evaluated == 0:
            print("every grid point hits an evaluation pole", file=sys.stderr)
            return USAGE_EXIT
        k1 = kfam.evaluator(1.0).entries
        regular = float(np.max(np.abs(k1 - np.eye(2))))
        rep = _report(
            "verify reflection",
            {
                "q": args.q,
                "alpha": args.alpha,
                "gamma": args.gamma,
                "beta": args.beta,
                "delta": args.delta,
            },
            {},
            {"reflection": worst, "k_at_one": regular},
            tol,
            t0,
        )
        return _emit(rep)
    if args.target == "hecke":
        R = ybe.frt_r(args.q)
        res = ybe.verify_hecke_quadratic(R, args.q**-2, -1.0, tol)
        rep = _report(
            "verify hecke",
            {"q": args.q},
            {"eigenvalues": [args.q**-2, -1.0]},
            {"hecke_quadratic": res["residual"]},
            tol,
            t0,
        )
        return _emit(rep)
    if args.target == "markov":
        fam = ybe.asep_r_family(args.q)
        res = ybe.markov_structure_report(fam, models.asep_bulk_w(args.q), tol)
        rep = _report(
            "verify markov",
            {"q": args.q, "rho_fit": res["params"]["rho_fit"]},
            res["params"],
            res["residuals"],
            max(tol, 1e-8),
            t0,
        )
        return _emit(rep)
    print(f"unknown verify target {args.target}", file=sys.stderr)
    return USAGE_EXIT


def _cmd_rep_check(args, t0):
    r = uqsl2.rep(args.m, args.q)
    res = uqsl2.check_relations(r, tol=args.tol)
    residuals = {k: v for k, v in res.items() if k not in ("max", "pass")}
    rep = _report("rep-check", {"m": args.m, "q": args.q}, {}, residuals, args.tol, t0)
    return _emit(rep)


def _cmd_universal_r(args, t0):
    rl = uqsl2.rep(args.l, args.q)
    rm = uqsl2.rep(args.m, args.q)
    res = uqsl2.universal_r_check(rl, rm, tol=args.tol)
    residuals = {k: v for k, v in res.items() if k not in ("max", "pass")}
    rep = _report(
        "universal-r", {"l": args.l, "m": args.m, "q": args.q}, {}, residuals, args.tol, t0
    )
    return _emit(rep)


def _params(args):
    return models.AsepParams(
        q=args.q,
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        delta=args.delta,
        L=args.L,
    )


def _cmd_asep(args, t0):
    from .tensor import stationary_distribution

    p = _params(args)
    G = models.asep_generator(p, open_boundary=args.open)
    if args.open:
        pi = stationary_distribution(G)
    else:
        # closed chain conserves particle number; report the half-filled class
        n_target = p.L // 2
        support = [
            s for s in range(2**p.L) if bin(s).count("1") == n_target
        ]
        pi = stationary_distribution(G, support=support)
    if args.csv:
        print("configuration,probability")
        for idx, val in enumerate(pi.values):
            print(f"{idx:0{p.L}b},{float(val)!r}")
        return PASS_EXIT
    rep = _report(
        "asep stationary",
        {"L": p.L, "q": p.q, "open": args.open},
        {"measure": [float(v) for v in pi.values]},
        {"normalization": abs(float(pi.values.sum()) - 1.0)},
        args.tol,
        t0,
    )
    return _emit(rep)


def _cmd_mpa(args, t0):
    from .tensor import stationary_distribution

    p = _params(args)
    mu = mpa.mpa_stationary_measure(p, M=args.truncation)
    pi = stationary_distribution(models.asep_generator(p, open_boundary=True))
    tv = 0.5 * float(np.abs(mu.values - pi.values).sum())
    if args.csv:
        print("configuration,probability")
        for idx, val in enumerate(mu.values):
            print(f"{idx:0{p.L}b},{float(val)!r}")
        return PASS_EXIT
    rep = _report(
        "mpa",
        {
            "L": p.L,
            "q": p.q,
            "alpha": p.alpha,
            "beta": p.beta,
            "gamma": p.gamma,
            "delta": p.delta,
            "truncation_start": args.truncation,
        },
        {"measure": [float(v) for v in mu.values]},
        {"oracle_tv": tv},
        max(args.tol, 1e-8),
        t0,
    )
    return _emit(rep)


def _cmd_fuse(args, t0):
    tables = {}
    if args.method in ("recurrence", "both"):
        tables["recurrence"] = sixvertex.fused_weights_recurrence(
            args.l, args.m, args.z, args.q
        )
    if args.method in ("closed", "both"):
        tables["closed"] = sixvertex.fused_weights_closed_form(
            args.l, args.m, args.z, args.q
        )
    any_table = next(iter(tables.values()))
    residuals = {
        "row_sums": max(t.row_sum_violation() for t in tables.values()),
        "conservation": max(t.conservation_violation() for t in tables.values()),
    }
    if len(tables) == 2:
        diff = float(
            np.max(np.abs(tables["recurrence"].table - tables["closed"].table))
        )
        scale = float(max(1.0, np.max(np.abs(tables["recurrence"].table))))
        residuals["cross_check"] = diff / scale
    if args.csv:
        print("j1,k1,j2,k2," + ",".join(tables))
        for j1 in range(args.l + 1):
            for k1 in range(args.m + 1):
                for j2 in range(args.l + 1):
                    for k2 in range(args.m + 1):
                        if j1 + k1 != j2 + k2:
                            continue
                        vals = ",".join(
                            repr(float(t.table[j1, k1, j2, k2].real))
                            for t in tables.values()
                        )
                        print(f"{j1},{k1},{j2},{k2},{vals}")
        return PASS_EXIT
    rep = _report(
        "fuse",
        {"l": args.l, "m": args.m, "z": args.z, "q": args.q, "method": args.method},
        {"max_entry": float(np.max(np.abs(any_table.table)))},
        residuals,
        max(args.tol, 1e-8),
        t0,
    )
    return _emit(rep)


def _cmd_sample6v(args, t0):
    w = sixvertex.six_vertex_weights(args.b1, args.b2)
    if args.boundary == "step":
        left = (1,) * args.height
        bottom = (0,) * args.width
    elif args.boundary == "empty":
        left = (0,) * args.height
        bottom = (0,) * args.width
    else:
        print(f"unknown --boundary {args.boundary}", file=sys.stderr)
        return USAGE_EXIT
    config = sixvertex.sample_lattice(
        w, args.width, args.height, boundary_left=left, boundary_bottom=bottom,
        seed=args.seed,
    )
    sys.stdout.write(config.to_csv())
    return PASS_EXIT


def _cmd_twprob(args, t0):
    y = tuple(int(v) for v in args.y)
    x = tuple(int(v) for v in args.x)
    val = models.tw_transition_probability(
        y, x, args.t, args.q, radius=args.radius, n_quad=args.nquad
    )
    results = {"probability": val}
    residuals = {}
    if args.check_oracle:
        oracle = models.ctmc_oracle_probability(y, x, args.t, args.q)
        results["oracle"] = oracle
        residuals["oracle_diff"] = abs(val - oracle)
    rep = _report(
        "twprob",
        {
            "y": list(y),
            "x": list(x),
            "t": args.t,
            "q": args.q,
            "radius": args.radius,
            "nquad": args.nquad,
        },
        results,
        residuals,
        max(args.tol, 1e-5),
        t0,
    )
    return _emit(rep)


def _cmd_oscillator(args, t0):
    if args.what == "hermite":
        val = oscillator.hermite(args.n, args.x)
        worst = 0.0
        for mdeg in range(min(args.n, 6) + 1):
            for ndeg in range(mdeg):
                worst = max(worst, abs(oscillator.hermite_overlap(mdeg, ndeg)))
        rep = _report(
            "oscillator hermite",
            {"n": args.n, "x": args.x},
            {"value": val},
            {"orthogonality": worst},
            max(args.tol, 1e-6),
            t0,
        )
        return _emit(rep)
    if args.what == "fock":
        f = oscillator.truncated_fock(args.cutoff)
        rep = _report(
            "oscillator fock",
            {"cutoff": args.cutoff},
            {},
            {"commutator": f.commutator_violation()},
            args.tol,
            t0,
        )
        return _emit(rep)
    if args.what == "js":
        e = np.array([[0.0, 1.0], [0.0, 0.0]])
        f = np.array([[0.0, 0.0], [1.0, 0.0]])
        h = np.diag([1.0, -1.0])
        worst = max(
            oscillator.js_homomorphism_violation(h, e, args.cutoff),
            oscillator.js_homomorphism_violation(h, f, args.cutoff),
            oscillator.js_homomorphism_violation(e, f, args.cutoff),
        )
        rep = _report(
            "oscillator js",
            {"cutoff": args.cutoff},
            {},
            {"sl2_commutators": worst},
            args.tol,
            t0,
        )
        return _emit(rep)
    print(f"unknown oscillator target {args.what}", file=sys.stderr)
    return USAGE_EXIT


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="integrable", allow_abbrev=False)
    top.add_argument("--tol", type=float, default=1e-10)
    top.add_argument("--timing", action="store_true",
                     help="include wall_time in the report (non-deterministic)")
    sub = top.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify")
    v.add_argument("target", choices=["ybe", "spectral", "reflection", "hecke", "markov"])
    v.add_argument("--family", default="r-alpha-beta")
    v.add_argument("--alpha", type=float, default=0.5)
    v.add_argument("--beta", type=float, default=0.5)
    v.add_argument("--gamma", type=float, default=0.1)
    v.add_argument("--delta", type=float, default=0.1)
    v.add_argument("--q", type=float, default=0.5)
    v.add_argument("--grid", type=float, nargs="*",
                   default=[0.3, 0.5, 0.7, 0.9])
    v.set_defaults(func=_cmd_verify)

    r = sub.add_parser("rep-check")
    r.add_argument("--m", type=int, required=True)
    r.add_argument("--q", type=float, required=True)
    r.set_defaults(func=_cmd_rep_check)

    u = sub.add_parser("universal-r")
    u.add_argument("--l", type=int, required=True)
    u.add_argument("--m", type=int, required=True)
    u.add_argument("--q", type=float, required=True)
    u.set_defaults(func=_cmd_universal_r)

    a = sub.add_parser("asep")
    a.add_argument("mode", choices=["stationary"])
    a.add_argument("--L", type=int, required=True)
    a.add_argument("--q", type=float, required=True)
    a.add_argument("--alpha", type=float, default=0.0)
    a.add_argument("--beta", type=float, default=0.0)
    a.add_argument("--gamma", type=float, default=0.0)
    a.add_argument("--delta", type=float, default=0.0)
    a.add_argument("--open", action="store_true")
    a.add_argument("--csv", action="store_true")
    a.set_defaults(func=_cmd_asep)

    m = sub.add_parser("mpa")
    m.add_argument("--L", type=int, required=True)
    m.add_argument("--q", type=float, required=True)
    m.add_argument("--alpha", type=float, required=True)
    m.add_argument("--beta", type=float, required=True)
    m.add_argument("--gamma", type=float, default=0.0)
    m.add_argument("--delta", type=float, default=0.0)
    m.add_argument("--truncation", type=int, default=mpa.M_START)
    m.add_argument("--csv", action="store_true")
    m.set_defaults(func=_cmd_mpa)

    f = sub.add_parser("fuse")
    f.add_argument("--l", type=int, required=True)
    f.add_argument("--m", type=int, required=True)
    f.add_argument("--z", type=float, required=True)
    f.add_argument("--q", type=float, required=True)
    f.add_argument("--method", choices=["recurrence", "closed", "both"],
                   default="both")
    f.add_argument("--csv", action="store_true")
    f.set_defaults(func=_cmd_fuse)

    s = sub.add_parser("sample6v")
    s.add_argument("--b1", type=float, required=True)
    s.add_argument("--b2", type=float, required=True)
    s.add_argument("--width", type=int, required=True)
    s.add_argument("--height", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--boundary", default="step")
    s.set_defaults(func=_cmd_sample6v)

    t = sub.add_parser("twprob")
    t.add_argument("--t", type=float, required=True)
    t.add_argument("--q", type=float, required=True)
    t.add_argument("--y", type=int, nargs="+", required=True)
    t.add_argument("--x", type=int, nargs="+", required=True)
    t.add_argument("--radius", type=float, default=0.5)
    t.add_argument("--nquad", type=int, default=256)
    t.add_argument("--check-oracle", action="store_true")
    t.set_defaults(func=_cmd_twprob)

    o = sub.add_parser("oscillator")
    o.add_argument("what", choices=["hermite", "fock", "js"])
    o.add_argument("--n", type=int, default=4)
    o.add_argument("--x", type=float, default=0.0)
    o.add_argument("--cutoff", type=int, default=8)
    o.set_defaults(func=_cmd_oscillator)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return USAGE_EXIT if exc.code not in (0,) else 0
    t0 = time.perf_counter() if args.timing else None
    try:
        return args.func(args, t0)
    except (ValueError, KeyError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except Exception as exc:  # domain errors from the library layer
        from .mpa import MpaError
        from .models import ModelsError
        from .oscillator import OscillatorError
        from .qnum import QnumError
        from .sixvertex import SixVertexError
        from .tensor import TensorError
        from .uqsl2 import Uqsl2Error
        from .ybe import YbeError

        if isinstance(
            exc,
            (QnumError, TensorError, Uqsl2Error, YbeError, ModelsError,
             SixVertexError, MpaError, OscillatorError),
        ):
            print(f"parameter error: {exc}", file=sys.stderr)
            return USAGE_EXIT
        raise


if __name__ == "__main__":
    sys.exit(main())
