"""Command-line front door.

Subcommands mirror the library modules; every artifact embeds the seed
and package version, files are written atomically, and identical
invocations produce byte-identical outputs (counter-based RNG keyed by
seed, replica and stream, so the parallelism degree never matters).

Exit codes: 0 ok, 2 usage error, 3 resource cap, 4 acceptance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time

from . import __version__

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_ACCEPTANCE = 4


def _atomic_write(path: str, text: str) -> None:
    """Write via a temp file + rename so partial output is never left."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _emit(args, payload: dict, csv_text: str = None) -> None:
    """Serialize the result dict (or CSV rows) to --out or stdout."""
    payload = {"version": __version__, **payload}
    if args.format == "csv" and csv_text is not None:
        text = csv_text
    else:
        text = json.dumps(payload, indent=2, sort_keys=True,
                          default=str) + "\n"
    if args.out:
        _atomic_write(args.out, text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _dict_csv(header: str, rows) -> str:
    return "\n".join([header] + [",".join(str(c) for c in r)
                                 for r in rows]) + "\n"


# -- subcommands --------------------------------------------------------------

def cmd_enumerate(args) -> int:
    from .enumeration import tutte_table, table_to_csv
    table = tutte_table(args.nmax, args.mmax)
    payload = {"n_max": args.nmax, "m_max": args.mmax,
               "counts": {f"{N},{m}": str(c)
                          for (N, m), c in sorted(table.counts.items())}}
    _emit(args, payload, table_to_csv(table))
    return EXIT_OK


def cmd_gf(args) -> int:
    from fractions import Fraction
    from .gf_algebraic import s_series, critical_data
    beta = Fraction(args.beta).limit_denominator(10 ** 9)
    cd = critical_data(beta)
    s = s_series(beta, args.order)
    payload = {"beta": str(beta), "order": args.order,
               "x1": float(cd.x1), "radius_R": float(cd.radius_R),
               "y_at_x1": float(cd.y_at_x1),
               "coefficients": [str(c) for c in s.coefficients]}
    csv = _dict_csv("order,coefficient",
                    list(enumerate(str(c) for c in s.coefficients)))
    _emit(args, payload, csv)
    return EXIT_OK


def cmd_boundary(args) -> int:
    from .boundary_dynamics import (GrowthConfig, simulate_growth,
                                    occupation_distribution,
                                    stationary_boundary_law, tv_distance)
    cfg = GrowthConfig(args.lambda1, args.lambda2, seed=args.seed,
                       events=args.events, mode=args.mode,
                       replica=args.replica)
    stats = simulate_growth(cfg)
    emp = occupation_distribution(stats)
    law = stationary_boundary_law(args.lambda1, args.lambda2, k_max=80)
    payload = {"seed": args.seed, "events": args.events, "mode": args.mode,
               "lambda1": args.lambda1, "lambda2": args.lambda2,
               "tv_vs_product_law": tv_distance(emp, law),
               "returns_to_3": stats.returns_to_3,
               "final_m": stats.final_m,
               "occupation": {str(k): v for k, v in sorted(emp.items())}}
    if stats.closure_defects:
        payload["closures"] = len(stats.closure_defects)
        payload["defects_not_12"] = sum(1 for d in stats.closure_defects
                                        if d != 12)
    csv = _dict_csv("m,occupation", sorted(emp.items()))
    _emit(args, payload, csv)
    return EXIT_OK


def cmd_nonlinear(args) -> int:
    import numpy as np
    from .nonlinear_process import (ProcessParams, fixed_point,
                                    canonical_prediction)
    p = ProcessParams(args.r1, args.r2)
    q = fixed_point(p, n_max=args.nmax, m_max=args.mmax)
    payload = {"r1": args.r1, "r2": args.r2, "beta": p.beta,
               "total_mass": q.total(),
               "stationary_leak": q.truncated_mass,
               "q_0_2": q.get(0, 2)}
    pred = canonical_prediction(p, args.nmax, args.mmax)
    payload["max_error_vs_canonical"] = float(
        np.max(np.abs(q.values - pred)))
    rows = [(N, m, q.get(N, m)) for N in range(args.nmax + 1)
            for m in range(2, args.mmax + 1) if q.get(N, m) > 0]
    _emit(args, payload, _dict_csv("N,m,mass", rows))
    return EXIT_OK


def cmd_trees(args) -> int:
    from .tree_codec import degree_statistics
    rep = degree_statistics(args.r0, args.r1, args.r2,
                            n_samples=args.samples, seed=args.seed)
    payload = {"seed": args.seed, "samples": args.samples,
               "weights": [args.r0, args.r1, args.r2],
               "total_mass": rep.total_mass,
               "tail_rate": rep.tail_rate,
               "tail_rate_ci": list(rep.tail_rate_ci),
               "covariances": {str(d): list(cs)
                               for d, cs in rep.covariances.items()},
               "degree_law": {str(k): v
                              for k, v in sorted(rep.p_hat.items())}}
    csv = _dict_csv("degree,p_hat,se",
                    [(k, rep.p_hat[k], rep.p_hat_se[k])
                     for k in sorted(rep.p_hat)])
    _emit(args, payload, csv)
    return EXIT_OK


def cmd_internal(args) -> int:
    from .internal_dynamics import InternalConfig, simulate_internal
    rows = []
    counts: dict = {}
    for r in range(args.replicas):
        tr = simulate_internal(InternalConfig(
            args.lam, args.mu, seed=args.seed, replica=r,
            simplicial=args.klass == "simplicial",
            max_events=args.events, track_after=args.track))
        counts[tr.outcome] = counts.get(tr.outcome, 0) + 1
        rows.append((r, tr.outcome, round(tr.birth_time, 6),
                     round(tr.end_time, 6), tr.final_q, tr.max_q,
                     tr.n_events, tr.final_vertices))
    payload = {"seed": args.seed, "lambda": args.lam, "mu": args.mu,
               "class": args.klass, "replicas": args.replicas,
               "outcomes": counts,
               "traces": [dict(zip(("replica", "outcome", "birth", "end",
                                    "final_q", "max_q", "events",
                                    "vertices"), row)) for row in rows]}
    csv = _dict_csv("replica,outcome,birth,end,final_q,max_q,events,vertices",
                    rows)
    _emit(args, payload, csv)
    return EXIT_OK


def cmd_onedim(args) -> int:
    if args.model == "green":
        from .one_dim import susceptibility, green_function
        chi = susceptibility(args.d, args.mu)
        g0 = green_function(args.d, args.mu, (0,) * args.d)
        payload = {"d": args.d, "mu": args.mu,
                   "mu_cr": math.log(2 * args.d),
                   "chi": chi["value"], "chi_closed_form": chi["closed_form"],
                   "chi_tail_bound": chi["tail_bound"],
                   "green_at_origin": g0["value"]}
        csv = _dict_csv("quantity,value",
                        [(k, v) for k, v in payload.items()])
    elif args.model == "queue":
        from .one_dim import lifo_queue_sim
        rep = lifo_queue_sim(args.lam, args.nu, horizon=args.horizon,
                             seed=args.seed)
        payload = {"seed": args.seed, "lam": args.lam, "nu": args.nu,
                   "decay_rate": rep.get("decay_rate"),
                   "target_rate": math.log(args.nu / args.lam)
                   if args.nu > args.lam else None,
                   "final_length": rep["final_length"],
                   "length_law": {str(k): v
                                  for k, v in rep["length_law"].items()}}
        csv = _dict_csv("length,probability",
                        sorted(rep["length_law"].items()))
    else:  # grammar
        from .one_dim import context_free_sim
        rep = context_free_sim(args.lam, args.nu, horizon=args.horizon,
                               seed=args.seed)
        payload = {"seed": args.seed, "lam": args.lam, "nu": args.nu,
                   "decay_rate": rep.get("decay_rate"),
                   "target_rate": math.log(args.nu / args.lam)
                   if args.nu > args.lam else None,
                   "length_law": {str(k): v
                                  for k, v in rep["length_law"].items()}}
        csv = _dict_csv("length,probability",
                        sorted(rep["length_law"].items()))
    _emit(args, payload, csv)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .acceptance import run_suite
    t0 = time.time()
    rep = run_suite(args.level)
    for r in rep["results"]:
        mark = "PASS" if r["passed"] else "FAIL"
        print(f"criterion {r['criterion']:2d}: {mark}  "
              f"[{r['seconds']:7.1f}s]  {r['detail']}")
    print(f"{rep['n_passed']}/{rep['n_total']} criteria passed "
          f"({rep['level']} level, {time.time() - t0:.0f}s)")
    if args.out:
        _atomic_write(args.out, json.dumps(
            {"version": __version__, **rep}, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if rep["passed"] else EXIT_ACCEPTANCE


# -- parser -------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--threads", type=int, default=1,
                   help="parallelism degree (never affects results)")
    p.add_argument("--config", type=str, default=None,
                   help="file of key=value overrides for the flags above")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="planargrav",
        description="Enumeration, generating functions and stochastic "
                    "dynamics of planar disk triangulations")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="exact triangulation counts")
    p.add_argument("--nmax", type=int, default=20)
    p.add_argument("--mmax", type=int, default=12)
    _add_common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("gf", help="disk generating function and criticality")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--order", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=cmd_gf)

    p = sub.add_parser("boundary", help="boundary growth dynamics")
    p.add_argument("--lambda1", type=float, default=1.0)
    p.add_argument("--lambda2", type=float, default=2.0)
    p.add_argument("--events", type=int, default=100_000)
    p.add_argument("--mode", choices=("boundary-only", "full-map"),
                   default="boundary-only")
    p.add_argument("--replica", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("nonlinear", help="quadratic measure fixed point")
    p.add_argument("--r1", type=float, default=0.2)
    p.add_argument("--r2", type=float, default=0.2)
    p.add_argument("--nmax", type=int, default=30)
    p.add_argument("--mmax", type=int, default=30)
    _add_common(p)
    p.set_defaults(func=cmd_nonlinear)

    p = sub.add_parser("trees", help="tree-sampled vertex degree law")
    p.add_argument("--r0", type=float, default=0.4)
    p.add_argument("--r1", type=float, default=0.4)
    p.add_argument("--r2", type=float, default=0.4)
    p.add_argument("--samples", type=int, default=100_000)
    _add_common(p)
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("internal", help="bulk insertion/removal dynamics")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=2.0)
    p.add_argument("--class", dest="klass",
                   choices=("simplicial", "general"), default="simplicial")
    p.add_argument("--events", type=int, default=400_000)
    p.add_argument("--track", type=int, default=0,
                   help="track the first vertex born after this many events")
    _add_common(p)
    p.set_defaults(func=cmd_internal)

    p = sub.add_parser("onedim", help="1D lattice gravity models")
    p.add_argument("model", choices=("green", "queue", "grammar"))
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--mu", type=float, default=math.log(4) + 0.5)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=2.0)
    p.add_argument("--horizon", type=float, default=1e5)
    _add_common(p)
    p.set_defaults(func=cmd_onedim)

    p = sub.add_parser("reproduce", help="run the acceptance suite")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    _add_common(p)
    p.set_defaults(func=cmd_reproduce)

    return ap


def _apply_config_file(args) -> None:
    """key=value lines override flag values (unknown keys are an error)."""
    if not getattr(args, "config", None):
        return
    with open(args.config) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not hasattr(args, key):
                raise SystemExit(
                    f"planargrav: unknown config key {key!r}")
            cur = getattr(args, key)
            typ = type(cur) if cur is not None else str
            setattr(args, key, typ(value.strip()) if typ is not bool
                    else value.strip().lower() in ("1", "true", "yes"))


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        _apply_config_file(args)
        return args.func(args)
    except (MemoryError, RecursionError) as exc:
        print(f"planargrav: resource cap: {exc!r}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, RuntimeError, OSError) as exc:
        msg = str(exc)
        if "too large" in msg or "cap" in msg or "convergence" in msg:
            print(f"planargrav: resource cap: {msg}", file=sys.stderr)
            return EXIT_RESOURCE
        print(f"planargrav: invalid configuration: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
