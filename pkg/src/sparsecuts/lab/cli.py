"""Command-line front end.  Results go to stdout as JSON (or to --out);
failures print a JSON error object on stderr and exit nonzero."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .. import errors
from ..bounds import bound_report
from ..closure import sparse_closure
from ..distance import cut_depth, exact_dist, shoot
from ..exact import fmt_rat, rat
from ..extform import build_tree_extform, check_prop3
from ..instances import (gen_halfcube, gen_hyperplane_slice, gen_pip, gen_random01,
                         gen_simplex)
from ..kernel.dd import v_to_h
from ..kernel.io import hrep_to_json, load, save, save_json, vrep_to_json
from ..kernel.reps import HRep, VRep
from ..sparsify import find_sparse_separator
from .experiments import sweep, write_sweep_csv

EXIT_USAGE = 2
EXIT_FAILURE = 1


def _emit(obj, out: Optional[str]):
    if out:
        save_json(obj, out)
    else:
        json.dump(obj, sys.stdout, indent=1)
        sys.stdout.write("\n")


def _vrep(path) -> VRep:
    rep = load(path)
    if isinstance(rep, HRep):
        from ..kernel.dd import h_to_v
        rep = h_to_v(rep, vertices_only=True)
    return rep


def _box(P: VRep, spec: Optional[str]):
    if spec:
        lo, hi = (rat(x) for x in spec.split(":"))
        return (lo,) * P.dim, (hi,) * P.dim
    lo = tuple(min(v[i] for v in P.vertices) for i in range(P.dim))
    hi = tuple(max(v[i] for v in P.vertices) for i in range(P.dim))
    return lo, hi


def _k_range(spec: str) -> List[int]:
    a, _, b = spec.partition(":")
    return list(range(int(a), int(b or a) + 1))


def _require_seed(args):
    if args.seed is None:
        raise errors.SparseCutsError("--seed is required for randomized runs")


def cmd_gen(args):
    kind = args.kind
    if kind == "simplex":
        P = gen_simplex(args.n)
    elif kind == "halfcube":
        P = gen_halfcube(args.n)
    elif kind == "random01":
        _require_seed(args)
        P = gen_random01(args.n, args.t, args.seed)
    elif kind == "slice":
        _require_seed(args)
        P = gen_hyperplane_slice(args.n, args.w, args.t, args.seed)
    else:
        _require_seed(args)
        P = gen_pip(args.n, args.m, args.M, args.seed).hull
    if args.out:
        save(P, args.out)
    else:
        _emit(vrep_to_json(P), None)


def cmd_closure(args):
    P = _vrep(args.instance)
    C = sparse_closure(P, args.k, _box(P, args.box), budget=args.budget_supports)
    if args.out:
        save(C.closure, args.out)
    else:
        _emit(hrep_to_json(C.closure), None)


def cmd_dist(args):
    P = _vrep(args.instance)
    C = sparse_closure(P, args.k, _box(P, args.box), budget=args.budget_supports)
    r = exact_dist(P, C, cap=args.budget_vertices)
    _emit({"k": args.k, "dist_sq": fmt_rat(r.dist_sq), "dist_float": r.dist_float,
           "witness": [fmt_rat(x) for x in r.witness],
           "nearest": [fmt_rat(x) for x in r.nearest]}, args.out)


def cmd_shoot(args):
    _require_seed(args)
    P = _vrep(args.instance)
    C = sparse_closure(P, args.k, _box(P, args.box), budget=args.budget_supports)
    rep = shoot(P, C, num_dirs=args.dirs, seed=args.seed)
    if args.out:
        rep.write_csv(args.out)
    _emit({"k": args.k, "best_lb_sq": fmt_rat(rep.best_lb_sq), "best_lb_float": rep.best_lb_float,
           "directions_tried": rep.directions_tried,
           "best_direction": list(rep.best_direction)}, None)


def cmd_depth(args):
    P = _vrep(args.instance)
    C = sparse_closure(P, args.k, _box(P, args.box), budget=args.budget_supports)
    H = v_to_h(P)
    rows = []
    for a, b in H.inequalities:
        d = cut_depth(a, b, C)
        rows.append({"a": [fmt_rat(x) for x in a], "b": fmt_rat(b),
                     "gamma": fmt_rat(d.gamma), "normalized_sq": fmt_rat(d.normalized_sq)})
    _emit({"k": args.k, "facets": rows}, args.out)


def cmd_sweep(args):
    P = _vrep(args.instance)
    ks = _k_range(args.k_range) if args.k_range else list(range(1, P.dim + 1))
    if args.dirs:
        _require_seed(args)
    rows = sweep(P, ks, seed=args.seed or 0, dirs=args.dirs, box=_box(P, args.box),
                 budget_vertices=args.budget_vertices, budget_supports=args.budget_supports,
                 sample_supports=args.sample_supports, reduce=args.reduce, exact=not args.no_exact)
    if args.out:
        write_sweep_csv(rows, args.out)
    else:
        write_sweep_csv(rows, "/dev/stdout")


def cmd_bounds(args):
    rep = bound_report(args.n, args.t, args.k, args.max_norm, m=args.m, M=args.M)
    out = {k: v for k, v in vars(rep).items() if k != "phase"}
    out["phase"] = rep.phase.value
    _emit(out, args.out)


def cmd_sparsify(args):
    _require_seed(args)
    P = _vrep(args.instance)
    u = [rat(x) for x in args.point.split(",")]
    cut = find_sparse_separator(P, u, args.k, seed=args.seed, strict=args.strict)
    _emit({"a": list(cut.a), "b": cut.b, "support": list(cut.support), "tries": cut.tries,
           "method": cut.method, "violation": fmt_rat(cut.violation),
           "lemma_conditions": cut.lemma_conditions}, args.out)


def cmd_extform(args):
    T = build_tree_extform(args.n)
    P = gen_halfcube(args.n)
    rep = check_prop3(P, T.extended_set(), args.k)
    _emit({"n": args.n, "k": args.k, "proj_equals_P": rep.proj_equals_P,
           "contained": rep.contained, "proj_closure_equals_P": rep.proj_closure_equals_P,
           "proj_closure_equals_Pk": rep.proj_closure_equals_Pk}, args.out)


def cmd_validate(args):
    from .suite import run_suite

    results = run_suite(seed=args.seed if args.seed is not None else 0, trials=args.trials)
    _emit({"passed": all(r["ok"] for r in results), "checks": results}, args.out)
    if not all(r["ok"] for r in results):
        raise SystemExit(EXIT_FAILURE)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sparsecuts", description="Sparse cutting-plane closures and distances.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--budget-vertices", type=int, default=200_000)
    common.add_argument("--budget-supports", type=int, default=10 ** 6)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate an instance (V-rep JSON)")
    g.add_argument("kind", choices=["simplex", "halfcube", "random01", "slice", "pip"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--t", type=int, default=30)
    g.add_argument("--w", type=int, default=1)
    g.add_argument("--m", type=int, default=4)
    g.add_argument("--M", type=int, default=10)
    g.set_defaults(func=cmd_gen)

    def with_instance(name, func, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("instance")
        s.add_argument("--box", help="lo:hi applied to every coordinate; default is P's bounding box")
        s.set_defaults(func=func)
        return s

    with_instance("closure", cmd_closure, "k-sparse closure (H-rep JSON)").add_argument("--k", type=int, required=True)
    with_instance("dist", cmd_dist, "exact dist(P, P^k)").add_argument("--k", type=int, required=True)
    s = with_instance("shoot", cmd_shoot, "shooting lower bound")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--dirs", type=int, default=1000)
    with_instance("depth", cmd_depth, "cut depth of every facet of P").add_argument("--k", type=int, required=True)
    s = with_instance("sweep", cmd_sweep, "dist and bounds over a range of k (CSV)")
    s.add_argument("--k-range", help="kmin:kmax")
    s.add_argument("--dirs", type=int, default=0)
    s.add_argument("--reduce", choices=["dd", "lp", "none"], default="dd")
    s.add_argument("--no-exact", action="store_true", help="shooting bound only")
    s.add_argument("--sample-supports", type=int, help="sample this many supports past --budget-supports")
    s = with_instance("sparsify", cmd_sparsify, "k-sparse separator of a point")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--point", required=True, help="comma-separated rationals")
    s.add_argument("--strict", action="store_true")

    b = sub.add_parser("bounds", parents=[common], help="closed-form bounds and phase")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--t", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--max-norm", type=float)
    b.add_argument("--m", type=int)
    b.add_argument("--M", type=int)
    b.set_defaults(func=cmd_bounds)

    e = sub.add_parser("extform", parents=[common], help="tree formulation containment check")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--k", type=int, default=3)
    e.set_defaults(func=cmd_extform)

    v = sub.add_parser("validate", parents=[common], help="run the quick property suite")
    v.add_argument("--trials", type=int, default=20_000)
    v.set_defaults(func=cmd_validate)
    return p


def _default(o):
    if isinstance(o, Fraction):
        return fmt_rat(o)
    return str(o)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except SystemExit:
        raise
    except (errors.SparseCutsError, ValueError, OSError, KeyError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr, default=_default)
        sys.stderr.write("\n")
        return EXIT_FAILURE
    return 0


if __name__ == "__main__":
    sys.exit(main())
