"""JSON encoding of every public object; rationals travel as "p/q" strings."""
import json
from fractions import Fraction

from .errors import ParseError, ValidationError
from .kernel.linalg import q
from .kernel.polytope import PolyBall
from .space import LinMap, Space


def fstr(x):
    return str(Fraction(x))


def parse_q(x):
    if isinstance(x, bool):
        raise ParseError("boolean where a rational was expected")
    if isinstance(x, float):
        raise ParseError("float %r in input; write rationals as \"p/q\" strings" % x)
    try:
        return q(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError("bad rational %r: %s" % (x, exc))


def vec_out(v):
    return [fstr(x) for x in v]


def vec_in(v):
    if not isinstance(v, list):
        raise ParseError("expected a list, got %r" % (v,))
    return tuple(parse_q(x) for x in v)


def mat_out(m):
    return [vec_out(r) for r in m]


def mat_in(m):
    if not isinstance(m, list):
        raise ParseError("expected a list of rows")
    return tuple(vec_in(r) for r in m)


def loads(text, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("%s: line %d column %d: %s" % (source, exc.lineno, exc.colno, exc.msg))


def load(path):
    with open(path) as fh:
        return loads(fh.read(), path)


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True)


# -- balls and spaces ---------------------------------------------------------

def ball_out(b):
    return {"dim": b.dim,
            "facets": None if b.facets is None else mat_out(b.facets),
            "vertices": None if b.vertices is None else mat_out(b.vertices)}


def ball_in(d):
    try:
        dim = int(d["dim"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("ball needs an integer 'dim'")
    facets = d.get("facets")
    verts = d.get("vertices")
    if dim == 0:
        return PolyBall(0, (), ())
    if facets:
        b = PolyBall.from_facets(dim, mat_in(facets))
        if verts:
            given = PolyBall.from_vertices(dim, mat_in(verts))
            if given != b:
                raise ValidationError("facet and vertex descriptions disagree")
        return b
    if verts:
        return PolyBall.from_vertices(dim, mat_in(verts))
    raise ParseError("ball needs facets or vertices")


def space_out(s):
    return {"dim": s.dim, "ball": ball_out(s.ball), "label": s.label}


def space_in(d):
    if not isinstance(d, dict) or "ball" not in d:
        raise ParseError("space object needs a 'ball'")
    b = ball_in(d["ball"])
    dim = int(d.get("dim", b.dim))
    return Space(dim, b, d.get("label", ""))


def linmap_out(m):
    return {"source": m.source.label, "target": m.target.label, "matrix": mat_out(m.matrix),
            "status": m.status}


def linmap_in(d, source, target):
    return LinMap(source, target, mat_in(d["matrix"]) if isinstance(d, dict) else mat_in(d))


# -- types and functions ------------------------------------------------------

def type_out(xi):
    return {"base": space_out(xi.base), "nvars": xi.nvars,
            "ext": {"dim": xi.width, "facets": mat_out(xi.funcs), "vertices": None},
            "kernel_dims": xi.kernel_dims}


def type_in(d):
    from .typespace import make_type
    base = space_in(d["base"])
    return make_type(base, int(d["nvars"]), mat_in(d["ext"]["facets"]))


def kfn_out(f):
    return {"space": f.space.label, "space_def": space_out(f.space),
            "pieces": [vec_out(tuple(a) + (b,)) for a, b in f.pieces]}


def kfn_in(d, space=None):
    from .fenchel import make_kfn
    if space is None:
        if "space_def" in d:
            space = space_in(d["space_def"])
        elif isinstance(d.get("space"), dict):
            space = space_in(d["space"])
        else:
            raise ParseError("function file names space %r but no definition was given" % d.get("space"))
    pieces = []
    for row in d["pieces"]:
        r = vec_in(row)
        pieces.append((r[:-1], r[-1]))
    return make_kfn(space, pieces)


def type_or_kfn_in(d):
    """Accept either a type presentation or a Katetov function (read as a 1-type)."""
    from .fenchel import from_katetov
    if "pieces" in d:
        return from_katetov(kfn_in(d))
    return type_in(d)


def bracket_out(b):
    return {"lo": fstr(b.lo), "hi": fstr(b.hi), "radius_used": fstr(b.radius_used), "exact": b.exact,
            "witness": None if b.witness is None else vec_out(b.witness)}


def report_out(r):
    return {"verdict": r.verdict, "gap": fstr(r.gap), "level": r.level, "exact": r.exact,
            "witness_lambda": None if r.witness_lambda is None else vec_out(r.witness_lambda),
            "witness_g": None if r.witness_g is None else kfn_out(r.witness_g)}


def amalgam_out(o):
    return {"result": space_out(o.result), "g0": linmap_out(o.g0), "g1": linmap_out(o.g1),
            "kernel_dim": o.kernel_dim}


def chain_out(cs):
    return {
        "spaces": [space_out(s) for s in cs.spaces],
        "links": [mat_out(m.matrix) for m in cs.links],
        "ledger": [{"stage": e.stage, "basis": mat_out(e.basis), "type": type_out(e.xi),
                    "witness": mat_out(e.witness), "tag": list(e.tag) if e.tag else None}
                   for e in cs.ledger],
        "defect_history": [fstr(x) for x in cs.defect_history],
    }
