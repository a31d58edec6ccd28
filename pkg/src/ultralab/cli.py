"""The `lab` command line."""

import argparse
import json
import os
import sys

from . import io as docs
from .ball_space import lift_space
from .ballmaps import (DomainNotClosedError, OutOfGridError, admissibility, beta_limits,
                       beta_scan, beta_star_profile, omega_functionals)
from .core import SpaceValidationError, hausdorff
from .maps import bl_norm, dilatation, rho_b, rho_H, rho_s, rho_u, sup_norm
from .measures import TestFunction, dudley, integrate_step, measure_norm
from .rational import fmt, rat
from .verify import (CLAIM_IDS, DEFAULT_LAMBDAS, DEFAULT_ROSTER, RunConfig, report_csv,
                     report_doc, run_verify, write_witnesses)

SCHEMA = docs.SCHEMA


class UsageError(ValueError):
    pass


def _out(doc):
    sys.stdout.write(docs.dumps(doc))


def _result(command, result, **extra):
    doc = {"schema": SCHEMA, "command": command, "result": result}
    doc.update(extra)
    return doc


def _f(x):
    if isinstance(x, (tuple, list)):
        return [_f(v) for v in x]
    return fmt(x)


def _points(space, text):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok in space.labels:
            out.append(space.index(tok))
        else:
            raise UsageError(f"{tok!r} is not a point of the space")
    if not out:
        raise UsageError("point list is empty")
    return out


def cmd_dist(args):
    X = docs.load_space(args.space)
    (a,), (b,) = _points(X, args.a), _points(X, args.b)
    return _result("dist", fmt(X.d(a, b)), inputs={"space": args.space, "a": args.a, "b": args.b})


def cmd_hausdorff(args):
    X = docs.load_space(args.space)
    A, B = _points(X, args.a), _points(X, args.b)
    return _result("hausdorff", fmt(hausdorff(X, A, B)),
                   inputs={"space": args.space, "a": args.a, "b": args.b})


def cmd_rho(args):
    f, g = docs.load_map(args.p1), docs.load_map(args.p2)
    vals = {"rho_H": rho_H(f, g), "rho_s": rho_s(f, g), "rho_b": rho_b(f, g), "rho_u": rho_u(f, g)}
    key = "rho_" + args.metric
    return _result("rho", fmt(vals[key]), metric=key,
                   all={k: fmt(v) for k, v in vals.items()},
                   inputs={"p1": args.p1, "p2": args.p2})


def cmd_beta(args):
    lam = rat(args.lam)
    P1, P2 = docs.load_ballmap(args.p1), docs.load_ballmap(args.p2)
    extra = {"lambda": fmt(lam), "inputs": {"p1": args.p1, "p2": args.p2}}
    if args.star:
        prof = beta_star_profile(lam, P1, P2)
        value = max(prof) if prof else 0
        extra["per_ball"] = _f(list(prof))
        extra["metric"] = "beta*"
    else:
        scan = beta_scan(lam, P1, P2)
        value = scan.infimum()
        extra["metric"] = "beta"
        extra["breakpoints"] = _f(list(scan.breakpoints))
        extra["worst"] = _f(list(scan.worst))
        extra["feasible"] = [piece.to_doc() for piece in scan.feasible]
    if args.limits:
        lim = beta_limits(P1, P2)
        extra["limits"] = {"beta0": fmt(lim.beta0), "beta_inf": fmt(lim.beta_inf),
                           "beta_star0": fmt(lim.beta_star0),
                           "beta_star_inf": fmt(lim.beta_star_inf),
                           "lambda_small": fmt(lim.lambda_small),
                           "lambda_large": fmt(lim.lambda_large)}
    return _result("beta", fmt(value), **extra)


def cmd_admissibility(args):
    P = docs.load_ballmap(args.p1)
    rep = admissibility(P)
    return _result("admissibility", fmt(rep.d_a), d_a=fmt(rep.d_a), C=fmt(rep.C),
                   c_eps=[{"eps_from": fmt(e), "C": fmt(c)} for e, c in rep.c_eps],
                   caveat=rep.caveat, inputs={"p1": args.p1})


def cmd_omega(args):
    P1, P2 = docs.load_ballmap(args.p1), docs.load_ballmap(args.p2)
    rep = omega_functionals(P1, P2, rat(args.eps))
    return _result("omega", fmt(rep.omega_hat), eps=args.eps,
                   omega_low=fmt(rep.omega_low), omega_up=fmt(rep.omega_up),
                   omega_hat=fmt(rep.omega_hat), omega_hat_star=fmt(rep.omega_hat_star),
                   O_eps=[piece.to_doc() for piece in rep.O_eps],
                   inputs={"p1": args.p1, "p2": args.p2})


def cmd_bl(args):
    f = docs.load_map(args.p1)
    return _result("bl", fmt(bl_norm(f)), sup_norm=fmt(sup_norm(f)),
                   dilatation=fmt(dilatation(f)), inputs={"p1": args.p1})


def _test_function(path):
    f = docs.load_map(path)
    X = f.domain
    if X.model != "pquotient" or f.codomain.__class__.__name__ != "ScalarField":
        raise UsageError("a test function is a scalar function on a p-adic quotient")
    if X.params["p"] != f.codomain.p:
        raise UsageError("test function domain and absolute value use different primes")
    return TestFunction(X.params["p"], X.params["n"], f.table)


def cmd_measure(args):
    m1 = docs.load_measure(args.m1)
    if args.action == "norm":
        return _result("measure norm", fmt(measure_norm(m1)), inputs={"m1": args.m1})
    if args.action == "integrate":
        if not args.f:
            raise UsageError("measure integrate needs --f")
        f = _test_function(args.f)
        return _result("measure integrate", fmt(integrate_step(f, m1)),
                       inputs={"m1": args.m1, "f": args.f})
    if not args.m2:
        raise UsageError("measure dudley needs --m2")
    m2 = docs.load_measure(args.m2)
    b = dudley(m1, m2, args.mode, args.mv)
    extra = {"lower": fmt(b.lower), "upper": fmt(b.upper), "mode": args.mode,
             "inputs": {"m1": args.m1, "m2": args.m2}}
    if b.exact is not None:
        extra["exact"] = fmt(b.exact)
        extra["maximizer"] = _f(list(b.maximizer))
        value = b.exact
    else:
        value = b.upper if b.lower == b.upper else None
    if b.note:
        extra["note"] = b.note
    return _result("measure dudley", None if value is None else fmt(value), **extra)


def cmd_lift(args):
    X = docs.load_space(args.space)
    L = lift_space(X, args.depth)
    doc = docs.space_doc(L)
    if args.out:
        docs.write_json(args.out, doc)
    return _result("lift", str(len(L)), points=len(L), depth=args.depth, out=args.out,
                   space=None if args.out else doc)


def _parse_trials(text):
    if text is None:
        return {}
    text = text.strip()
    if "=" not in text:
        n = int(text)
        if n < 0:
            raise UsageError("trial counts must be >= 0")
        return {c: n for c in CLAIM_IDS}
    out = {}
    for item in text.split(","):
        name, _, n = item.partition("=")
        name = name.strip()
        if name not in CLAIM_IDS:
            raise UsageError(f"unknown claim {name!r}")
        out[name] = int(n)
        if out[name] < 0:
            raise UsageError("trial counts must be >= 0")
    return out


def _config(args):
    base = {}
    if args.config:
        base = docs.read_json(args.config)
    workers = args.workers
    if workers is None:
        workers = int(os.environ.get("LAB_WORKERS", base.get("workers", 1)))
    trials = dict(base.get("trials", {}))
    bad = [c for c in trials if c not in CLAIM_IDS]
    if bad:
        raise UsageError(f"unknown claim(s) in config: {', '.join(bad)}")
    trials.update(_parse_trials(args.trials))
    seed = args.seed if args.seed is not None else int(base.get("seed", RunConfig.seed))
    return RunConfig(
        seed=seed,
        trials=trials,
        roster=tuple(base.get("roster", DEFAULT_ROSTER)),
        lambdas=tuple(str(l) for l in base.get("lambdas", DEFAULT_LAMBDAS)),
        out=args.out or base.get("out"),
        format=args.format or base.get("format", "json"),
        workers=max(1, workers),
        inject_fault="ball-formula" if args.inject_bug else None,
    )


def cmd_verify(args):
    cfg = _config(args)
    claims = None
    if args.claims:
        claims = [c.strip() for c in args.claims.split(",") if c.strip()]
        bad = [c for c in claims if c not in CLAIM_IDS]
        if bad:
            raise UsageError(f"unknown claim(s): {', '.join(bad)}")
    cfg.spaces()  # validate the roster before any work starts
    results = run_verify(cfg, claims)
    paths = {}
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        paths = write_witnesses(results, cfg.out)
    doc = report_doc(cfg, results, paths)
    text = report_csv(doc) if cfg.format == "csv" else docs.dumps(doc)
    if cfg.out:
        name = "report.csv" if cfg.format == "csv" else "report.json"
        with open(os.path.join(cfg.out, name), "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0 if doc["passed"] else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="lab", description="Exact ultrametric and p-adic metric lab.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dist", help="distance between two points")
    s.add_argument("--space", required=True)
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.set_defaults(fn=cmd_dist)

    s = sub.add_parser("hausdorff", help="Hausdorff distance of two point sets")
    s.add_argument("--space", required=True)
    s.add_argument("--a", required=True, help="comma-separated labels")
    s.add_argument("--b", required=True, help="comma-separated labels")
    s.set_defaults(fn=cmd_hausdorff)

    s = sub.add_parser("rho", help="graph, uniform, ball and uniform-delta map metrics")
    s.add_argument("--p1", required=True)
    s.add_argument("--p2", required=True)
    s.add_argument("--metric", choices=["H", "s", "b", "u"], default="s")
    s.set_defaults(fn=cmd_rho)

    s = sub.add_parser("beta", help="ball-type metrics between ball-maps")
    s.add_argument("--lambda", dest="lam", required=True)
    s.add_argument("--p1", required=True)
    s.add_argument("--p2", required=True)
    s.add_argument("--star", action="store_true")
    s.add_argument("--limits", action="store_true")
    s.set_defaults(fn=cmd_beta)

    s = sub.add_parser("admissibility", help="admissible degree of a ball-map")
    s.add_argument("--p1", required=True)
    s.set_defaults(fn=cmd_admissibility)

    s = sub.add_parser("omega", help="omega functionals of a ball-map pair")
    s.add_argument("--p1", required=True)
    s.add_argument("--p2", required=True)
    s.add_argument("--eps", required=True)
    s.set_defaults(fn=cmd_omega)

    s = sub.add_parser("bl", help="BL norm of a scalar function")
    s.add_argument("--p1", required=True)
    s.set_defaults(fn=cmd_bl)

    s = sub.add_parser("measure", help="p-adic measure operations")
    s.add_argument("action", choices=["dudley", "norm", "integrate"])
    s.add_argument("--m1", required=True)
    s.add_argument("--m2")
    s.add_argument("--f")
    s.add_argument("--mode", choices=["bounds", "exact_small"], default="bounds")
    s.add_argument("--mv", type=int, default=3)
    s.set_defaults(fn=cmd_measure)

    s = sub.add_parser("lift", help="iterate the ball-space construction")
    s.add_argument("--space", required=True)
    s.add_argument("--depth", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_lift)

    s = sub.add_parser("verify", help="run the seeded claim suites")
    s.add_argument("--seed", type=int)
    s.add_argument("--trials", help="N for every claim, or claim=N,claim=N")
    s.add_argument("--workers", type=int)
    s.add_argument("--out")
    s.add_argument("--format", choices=["json", "csv"])
    s.add_argument("--config", help="JSON run configuration")
    s.add_argument("--claims", help="comma-separated subset of claim ids")
    s.add_argument("--inject-bug", action="store_true",
                   help="negative control: corrupt the intersecting branch of the ball formula")
    s.set_defaults(fn=cmd_verify)
    return ap


def _error(exc):
    err = {"type": type(exc).__name__, "message": str(exc)}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        err["witness"] = witness
    ball = getattr(exc, "ball", None)
    if ball is not None:
        err["ball"] = ball if isinstance(ball, (int, str)) else repr(ball)
    return {"schema": SCHEMA, "error": err}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        res = args.fn(args)
    except (SpaceValidationError, docs.DocumentError, UsageError, DomainNotClosedError,
            OutOfGridError, ValueError, KeyError, TypeError) as exc:
        sys.stdout.write(json.dumps(_error(exc), indent=2, sort_keys=True, default=str) + "\n")
        return 2
    if isinstance(res, int):
        return res
    _out(res)
    return 0


if __name__ == "__main__":
    sys.exit(main())
