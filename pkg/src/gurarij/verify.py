"""Independent re-checks of certificates written by the command line.

Each certificate is a JSON object with a ``kind`` field; the checker
rebuilds every object from the file and re-derives the claim.
"""
from fractions import Fraction

from . import io
from .errors import ParseError
from .kernel.linalg import matmul, sub
from .space import ISOMETRIC, LinMap, check_isometry, norm


def _iso(src, dst, m):
    return check_isometry(LinMap(src, dst, m)).status == ISOMETRIC


def check_amalgam(d):
    E, F0, F1 = (io.space_in(d[k]) for k in ("E", "F0", "F1"))
    G = io.space_in(d["result"])
    f0, f1 = io.mat_in(d["f0"]), io.mat_in(d["f1"])
    g0, g1 = io.mat_in(d["g0"]["matrix"]), io.mat_in(d["g1"]["matrix"])
    if not _iso(F0, G, g0):
        return False, "g0 is not isometric"
    if not _iso(F1, G, g1):
        return False, "g1 is not isometric"
    if E.dim and matmul(g0, f0) != matmul(g1, f1):
        return False, "square does not commute"
    return True, ""


def check_join(d):
    E, F = io.space_in(d["E"]), io.space_in(d["F"])
    G = io.space_in(d["result"])
    gE, gF = io.mat_in(d["g0"]["matrix"]), io.mat_in(d["g1"]["matrix"])
    if not _iso(E, G, gE) or not _iso(F, G, gF):
        return False, "a leg is not isometric"
    a, b, eps = io.mat_in(d["a"]), io.mat_in(d["b"]), io.vec_in(d["eps"])
    for i, (x, y, e) in enumerate(zip(a, b, eps)):
        gap = norm(G, sub(LinMap(E, G, gE)(x), LinMap(F, G, gF)(y)))
        if gap > e:
            return False, "pair %d at distance %s > %s" % (i, gap, e)
    return True, ""


def check_chain(d):
    from .typespace import tp, types_equal
    spaces = [io.space_in(s) for s in d["spaces"]]
    for i, m in enumerate(d["links"]):
        if not _iso(spaces[i], spaces[i + 1], io.mat_in(m)):
            return False, "link %d is not isometric" % i
    for j, e in enumerate(d["ledger"]):
        G = spaces[e["stage"]]
        xi = io.type_in(e["type"])
        incl = LinMap(xi.base, G, tuple(zip(*io.mat_in(e["basis"]))) if xi.base.dim else ((),) * G.dim)
        if check_isometry(incl).status != ISOMETRIC:
            return False, "ledger %d: parameters not isometric" % j
        if not types_equal(tp(G, incl, io.mat_in(e["witness"])), xi):
            return False, "ledger %d: witness does not realise its type" % j
    top = spaces[-1]
    for c in d.get("certificates", []):
        if not c["certified"]:
            continue
        ok, why = _check_problem(c, top)
        if not ok:
            return ok, why
    return True, ""


def _check_problem(c, G):
    from .forge import distortion
    E, F = io.space_in(c["E"]), io.space_in(c["F"])
    incl, psi = io.mat_in(c["incl"]), io.mat_in(c["psi"])
    eps = io.parse_q(c["eps"])
    if not _iso(E, F, incl):
        return False, "%s: inclusion is not isometric" % c["name"]
    if E.dim and not _iso(E, G, matmul(psi, incl)):
        return False, "%s: psi does not extend an isometry" % c["name"]
    dist = distortion(F, G, psi) if F.dim else Fraction(0)
    if dist is None or dist > eps:
        return False, "%s: distortion %s > %s" % (c["name"], dist, eps)
    return True, ""


def check_family(d):
    from .census import anchors_ok
    E = io.space_in(d["base"])
    vs = io.mat_in(d["anchors"])
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if not anchors_ok(E, vs[i], vs[j]):
                return False, "anchors %d, %d incompatible" % (i, j)
    for k, (t, eps) in enumerate(zip(d["types"], d["sign_patterns"])):
        xi = io.type_in(t)
        for s, v in zip(eps, vs):
            r = norm(E, v) - Fraction(1, 2)
            if xi.seminorm(tuple(-s * x for x in v) + (Fraction(1),)) > r:
                return False, "type %d misses ball around anchor" % k
    return True, ""


CHECKERS = {"amalgam": check_amalgam, "join": check_join, "chain": check_chain, "family": check_family}


def verify_certificate(d):
    if not isinstance(d, dict) or d.get("kind") not in CHECKERS:
        raise ParseError("certificate needs a 'kind' in %s" % sorted(CHECKERS))
    return CHECKERS[d["kind"]](d)
