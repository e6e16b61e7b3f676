"""Command-line front end.

Exit status: 0 ok, 1 negative result, 2 usage or validation error.
"""
import argparse
import csv
import io as _io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from fractions import Fraction

from . import io
from .errors import GurarijError, ValidationError
from .kernel.polytope import MAX_DIM


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    dim_cap: int = MAX_DIM
    tol: Fraction = Fraction(1, 1024)
    R: Fraction = Fraction(8)
    level: int = 1
    net_step: Fraction = Fraction(1, 4)
    out: str = None

    def __post_init__(self):
        if self.tol <= 0 or self.R <= 0 or self.net_step <= 0 or self.level < 1:
            raise ValidationError("tolerances must be positive")
        if not 0 <= self.dim_cap <= MAX_DIM:
            raise ValidationError("dim_cap must be at most %d" % MAX_DIM)


def _env_q(name, default):
    v = os.environ.get(name)
    return io.parse_q(v) if v is not None else default


def config_from(args):
    return RunConfig(
        seed=args.seed,
        dim_cap=args.dim_cap,
        tol=io.parse_q(args.tol) if args.tol else _env_q("GURARIJ_TOL", Fraction(1, 1024)),
        R=io.parse_q(args.R) if args.R else _env_q("GURARIJ_R", Fraction(8)),
        level=args.level if args.level else int(os.environ.get("GURARIJ_LEVEL", 1)),
        net_step=io.parse_q(args.net_step) if args.net_step else _env_q("GURARIJ_NET_STEP", Fraction(1, 4)),
        out=args.out,
    )


def _vec_arg(text):
    """A JSON list, or the bare form ``[1,1/2]`` with unquoted rationals."""
    t = text.strip()
    if "/" in t and '"' not in t:
        body = t.strip("[]").strip()
        return tuple(io.parse_q(x.strip()) for x in body.split(",")) if body else ()
    return io.vec_in(io.loads(t, "<argument>"))


def _mat_arg(text):
    if os.path.exists(text):
        return io.mat_in(io.load(text))
    return io.mat_in(io.loads(text, "<argument>"))


def _space(path):
    from .census import polygon_space
    from .space import l1, linf
    named = {"linf1": lambda: linf(1), "linf2": lambda: linf(2), "linf3": lambda: linf(3),
             "l1_2": lambda: l1(2), "l1_3": lambda: l1(3), "polygon64": lambda: polygon_space(32)}
    if path in named and not os.path.exists(path):
        return named[path]()
    return io.space_in(io.load(path))


def _emit(cfg, text):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def pmap(fn, items, jobs):
    """Ordered map, in worker processes when ``jobs > 1``."""
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# -- commands ---------------------------------------------------------------

def cmd_norm(args, cfg):
    from .space import norm
    s = _space(args.space)
    _emit(cfg, io.fstr(norm(s, _vec_arg(args.v))))
    return 0


def cmd_dual(args, cfg):
    from .space import dual_space
    _emit(cfg, io.dumps(io.space_out(dual_space(_space(args.space)))))
    return 0


def cmd_amalgamate(args, cfg):
    from .amalgam import amalgamate
    from .space import LinMap
    E, F0, F1 = _space(args.E), _space(args.F0), _space(args.F1)
    f0, f1 = _mat_arg(args.f0), _mat_arg(args.f1)
    out = amalgamate(E, F0, F1, LinMap(E, F0, f0), LinMap(E, F1, f1))
    cert = dict(io.amalgam_out(out), kind="amalgam", E=io.space_out(E), F0=io.space_out(F0),
                F1=io.space_out(F1), f0=io.mat_out(f0), f1=io.mat_out(f1))
    _emit(cfg, io.dumps(cert))
    return 0


def cmd_join(args, cfg):
    from .amalgam import approx_join
    E, F = _space(args.E), _space(args.F)
    a, b, eps = _mat_arg(args.a), _mat_arg(args.b), _vec_arg(args.eps)
    out = approx_join(E, F, a, b, eps)
    cert = dict(io.amalgam_out(out), kind="join", E=io.space_out(E), F=io.space_out(F),
                a=io.mat_out(a), b=io.mat_out(b), eps=io.vec_out(eps))
    _emit(cfg, io.dumps(cert))
    return 0


def cmd_tp(args, cfg):
    from .space import LinMap
    from .typespace import tp
    F = _space(args.space)
    E = _space(args.base)
    xi = tp(F, LinMap(E, F, _mat_arg(args.incl)), _mat_arg(args.a))
    _emit(cfg, io.dumps(io.type_out(xi)))
    return 0


def cmd_dist(args, cfg):
    from .typespace import type_distance
    xi = io.type_or_kfn_in(io.load(args.type1))
    zeta = io.type_or_kfn_in(io.load(args.type2))
    b = type_distance(xi, zeta, cfg.R, cfg.tol, args.method)
    if args.json:
        _emit(cfg, io.dumps(io.bracket_out(b)))
    else:
        _emit(cfg, "bracket [%s, %s]%s" % (io.fstr(b.lo), io.fstr(b.hi), ", exact" if b.exact else ""))
    return 0


def cmd_smooth(args, cfg):
    from .space import is_smooth, norming_functionals
    s = _space(args.space)
    v = _vec_arg(args.v)
    sm = is_smooth(s, v)
    if args.json:
        face = norming_functionals(s, v)
        _emit(cfg, io.dumps({"smooth": sm, "face": io.mat_out(face.generators), "affine_dim": face.affine_dim}))
    else:
        _emit(cfg, "true" if sm else "false")
    return 0 if sm else 1


def cmd_isolate(args, cfg):
    from .fenchel import is_isolated
    xi = io.type_or_kfn_in(io.load(args.type))
    v = is_isolated(xi, cfg.level)
    _emit(cfg, io.dumps({"status": v.status, "gap": io.fstr(v.gap), "report": io.report_out(v.report)}))
    return 0 if v.status == "Isolated" else 1


def _catalog(path):
    from .forge import Problem, default_catalog
    from .space import subspace
    if path in (None, "default"):
        return default_catalog()
    probs = []
    for i, d in enumerate(io.load(path)["problems"]):
        F = io.space_in(d["F"])
        E, incl = subspace(F, io.mat_in(d["basis"]), d.get("name", "p%d" % i))
        probs.append(Problem(E, F, incl, d.get("name", "p%d" % i)))
    return probs


def cmd_forge(args, cfg):
    from .fenchel import from_katetov, make_kfn
    from .forge import certify_eps_gurarij, schedule, start
    from .space import linf
    E0 = linf(1)
    if args.samples:
        samples = [io.type_or_kfn_in(d) for d in io.load(args.samples)["samples"]]
    else:
        samples = [from_katetov(make_kfn(E0, [((1,), 0), ((-1,), 0), ((0,), 1)])),
                   from_katetov(make_kfn(E0, [((1,), 1), ((-1,), 1)]))]
    avoid = []
    if args.avoid:
        for d in io.load(args.avoid)["avoid"]:
            avoid.append((io.type_or_kfn_in(d["type"]), io.parse_q(d["radius"])))
    catalog = _catalog(args.catalog)
    cs = start(E0, avoid, cfg.dim_cap)
    cs = schedule(cs, args.budget, samples, cfg.net_step, catalog)
    res = certify_eps_gurarij(cs, catalog, io.parse_q(args.eps))
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "index", "value", "detail"])
    for i, d in enumerate(cs.defect_history):
        w.writerow(["defect", i, io.fstr(d), ""])
    for r in res:
        w.writerow(["problem", r.name, "CERTIFIED" if r.certified else "UNRESOLVED",
                    "" if r.distortion is None else io.fstr(r.distortion)])
    _emit(cfg, buf.getvalue().rstrip("\n"))
    if args.bundle:
        eps = io.parse_q(args.eps)
        bundle = dict(io.chain_out(cs), kind="chain", certificates=[
            {"name": r.name, "certified": r.certified, "eps": io.fstr(eps),
             "E": io.space_out(p.E), "F": io.space_out(p.F), "incl": io.mat_out(p.incl.matrix),
             "psi": None if r.psi is None else io.mat_out(r.psi)}
            for p, r in zip(catalog, res)])
        with open(args.bundle, "w") as fh:
            fh.write(io.dumps(bundle) + "\n")
    return 0 if all(r.certified for r in res) else 1


def cmd_census(args, cfg):
    from .census import lindenstrauss_family, net_coverage, polyhedral_net, random_katetov
    s = _space(args.space)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if args.what == "lindenstrauss":
        fam = lindenstrauss_family(s, args.m)
        for row in fam.pairwise_lo:
            w.writerow([io.fstr(x) for x in row])
        _emit(cfg, buf.getvalue().rstrip("\n"))
        if args.family:
            with open(args.family, "w") as fh:
                fh.write(io.dumps({"kind": "family", "base": io.space_out(s),
                                   "anchors": io.mat_out(fam.anchors),
                                   "sign_patterns": [list(e) for e in fam.sign_patterns],
                                   "types": [io.type_out(t) for t in fam.types]}) + "\n")
        return 0
    R, eps = io.parse_q(args.R_net), io.parse_q(args.eps)
    net = polyhedral_net(s, R, eps)
    rng = random.Random(cfg.seed)
    samples = [random_katetov(s, rng) for _ in range(args.samples)]
    if args.jobs > 1:
        dists = pmap(partial(_cover_one, s, net, R, eps), samples, args.jobs)
    else:
        dists = net_coverage(s, net, samples, R, eps).distances
    w.writerow(["sample", "distance", "covered"])
    for i, d in enumerate(dists):
        w.writerow([i, io.fstr(d), d <= eps])
    _emit(cfg, buf.getvalue().rstrip("\n"))
    return 0 if all(d <= eps for d in dists) else 1


def _cover_one(E, net, R, eps, f):
    from .census import net_coverage
    return net_coverage(E, net, [f], R, eps).distances[0]


def cmd_verify(args, cfg):
    from .verify import verify_certificate
    ok, why = verify_certificate(io.load(args.cert))
    _emit(cfg, ("ok" if ok else "FAILED") + (": " + why if why else ""))
    return 0 if ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="gurarij", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim-cap", type=int, default=MAX_DIM)
    p.add_argument("--tol")
    p.add_argument("--R")
    p.add_argument("--level", type=int)
    p.add_argument("--net-step")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="also write the primary output here")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("norm")
    c.add_argument("--space", required=True)
    c.add_argument("--v", required=True)
    c.set_defaults(func=cmd_norm)

    c = sub.add_parser("dual")
    c.add_argument("--space", required=True)
    c.set_defaults(func=cmd_dual)

    c = sub.add_parser("amalgamate")
    for name in ("E", "F0", "F1", "f0", "f1"):
        c.add_argument("--" + name, required=True)
    c.set_defaults(func=cmd_amalgamate)

    c = sub.add_parser("join")
    for name in ("E", "F", "a", "b", "eps"):
        c.add_argument("--" + name, required=True)
    c.set_defaults(func=cmd_join)

    c = sub.add_parser("tp")
    for name in ("space", "base", "incl", "a"):
        c.add_argument("--" + name, required=True)
    c.set_defaults(func=cmd_tp)

    c = sub.add_parser("dist")
    c.add_argument("--type1", required=True)
    c.add_argument("--type2", required=True)
    c.add_argument("--method", choices=("conjugate", "lp"))
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_dist)

    c = sub.add_parser("smooth")
    c.add_argument("--space", required=True)
    c.add_argument("--v", required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_smooth)

    c = sub.add_parser("isolate")
    c.add_argument("--type", required=True)
    c.set_defaults(func=cmd_isolate)

    c = sub.add_parser("forge")
    c.add_argument("action", choices=("run",))
    c.add_argument("--budget", type=int, default=20)
    c.add_argument("--catalog", default="default")
    c.add_argument("--eps", default="1/4")
    c.add_argument("--avoid")
    c.add_argument("--samples")
    c.add_argument("--bundle", help="write the chain state JSON here")
    c.set_defaults(func=cmd_forge)

    c = sub.add_parser("census")
    c.add_argument("what", choices=("lindenstrauss", "net"))
    c.add_argument("--space", required=True)
    c.add_argument("--m", type=int, default=4)
    c.add_argument("--R", dest="R_net", default="2")
    c.add_argument("--eps", default="1/2")
    c.add_argument("--samples", type=int, default=50)
    c.add_argument("--family", help="write the family JSON here")
    c.set_defaults(func=cmd_census)

    c = sub.add_parser("verify")
    c.add_argument("cert")
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = config_from(args)
        return args.func(args, cfg)
    except GurarijError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if exc.data:
            err["data"] = {k: _plain(v) for k, v in exc.data.items()}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(json.dumps({"error": "ParseError", "message": str(exc)}), file=sys.stderr)
        return 2


def _plain(v):
    if isinstance(v, Fraction):
        return io.fstr(v)
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    return v if isinstance(v, (int, str, bool, type(None))) else str(v)


if __name__ == "__main__":
    sys.exit(main())
