"""Convex Katetov functions, their conjugates, extension and maximality.

A piecewise-linear convex function on E is ``f(v) = max_i alpha_i . v + beta_i``.
Its conjugate lives on the dual: ``f*(lam) = min{-sum th_i beta_i :
sum th_i alpha_i = lam, th in simplex}``, one small LP per evaluation.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EmptyRegion, InfeasibleInput, NotABasis, NotKatetov, Unbounded, ValidationError, WrongArity
from .kernel.linalg import ONE, ZERO, dot, independent_subset, neg, rank, rref, sub, vec, zeros
from .kernel.lp import lp_max, lp_min
from .kernel.polytope import canonical, facets_of, vertices_of
from .space import Space, dual_norm, is_smooth, subspace


@dataclass(frozen=True)
class KFn:
    space: Space
    pieces: tuple  # ((alpha, beta), ...)
    katetov_checked: object = field(default=None, compare=False)  # None = unchecked

    def __call__(self, v):
        v = vec(v)
        return max(dot(a, v) + b for a, b in self.pieces)

    @property
    def slopes(self):
        return tuple(a for a, _ in self.pieces)


def make_kfn(space, pieces, simplify=True):
    ps = []
    for p in pieces:
        a, b = p
        a = vec(a)
        if len(a) != space.dim:
            raise ValidationError("slope of length %d on a space of dim %d" % (len(a), space.dim))
        ps.append((a, Fraction(b)))
    if not ps:
        raise ValidationError("a KFn needs at least one piece")
    if simplify:
        ps = _essential(ps)
    return KFn(space, tuple(sorted(ps)))


def _essential(ps):
    best = {}
    for a, b in ps:
        if a not in best or b > best[a]:
            best[a] = b
    ps = sorted(best.items())
    i = 0
    while i < len(ps) and len(ps) > 1:
        a, b = ps[i]
        others = ps[:i] + ps[i + 1:]
        val = _conj_lp(others, a)
        if val is not None and -val[0] >= b:
            ps = others
        else:
            i += 1
    return ps


def _conj_lp(pieces, lam):
    """``(f*(lam), v)`` for the pieces, or None when lam is outside conv(alpha)."""
    k = len(pieces)
    d = len(lam)
    obj = tuple(-b for _, b in pieces)
    cons = [(tuple(-ONE if j == i else ZERO for j in range(k)), ZERO) for i in range(k)]
    eqs = [(tuple(a[t] for a, _ in pieces), lam[t]) for t in range(d)]
    eqs.append(((ONE,) * k, ONE))
    try:
        res = lp_min(obj, cons, eqs)
    except InfeasibleInput:
        return None
    return res.value, res.eq_duals[:d]


def conj_value(f, lam):
    """``f*(lam)``; None stands for +infinity."""
    r = _conj_lp(f.pieces, vec(lam))
    return None if r is None else r[0]


@dataclass(frozen=True)
class ConjFn:
    """Conjugate presented by its values at the slopes; lower convex envelope between them."""

    space: Space  # the dual space
    points: tuple  # ((alpha, f*(alpha)), ...)

    def __call__(self, lam):
        r = _conj_lp(tuple((a, -s) for a, s in self.points), vec(lam))
        return None if r is None else r[0]

    @property
    def domain(self):
        return self.space.ball


def conjugate(f):
    from .space import dual_space
    pts = tuple((a, conj_value(f, a)) for a in f.slopes)
    return ConjFn(dual_space(f.space), pts)


def biconjugate(cf, space):
    """Restriction of ``(f*)*`` to E: the max of ``alpha . v - f*(alpha)``."""
    return make_kfn(space, [(a, -s) for a, s in cf.points])


# -- Katetov criteria ------------------------------------------------------

def is_katetov(f):
    """Dual criterion: slopes in the dual ball and f*(w) + f*(-w) <= 0.

    Returns ``(ok, certificate)``; the certificate names the failing test.
    A dual vertex outside dom f* fails the antipode test with ``sum`` None.
    """
    E = f.space
    f = make_kfn(E, f.pieces)
    for a in f.slopes:
        if dual_norm(E, a) > 1:
            return False, {"reason": "slope", "alpha": a}
    for w in E.dual_vertices():
        if conj_value(f, w) is None:
            # f*(w) = +inf, so the antipodal sum is +inf as well
            return False, {"reason": "antipode", "lambda": w, "sum": None}
    for w in E.dual_vertices():
        s = conj_value(f, w) + conj_value(f, neg(w))
        if s > 0:
            return False, {"reason": "antipode", "lambda": w, "sum": s}
    return True, {"reason": None}


def checked(f):
    ok, cert = is_katetov(f)
    if not ok:
        raise NotKatetov("not a Katetov function", **cert)
    g = make_kfn(f.space, f.pieces)
    return KFn(g.space, g.pieces, True)


def primal_katetov(f):
    """Exact check of ``|f(x)-f(y)| <= ‖x-y‖ <= f(x)+f(y)`` by LPs over E x E."""
    E = f.space
    d = E.dim
    ps = f.pieces
    if d == 0:
        return max(b for _, b in ps) >= 0
    # lower bound: min f(x)+f(y)-mu.(x-y) >= 0 for every facet mu
    cons = []
    for a, b in ps:
        cons.append((tuple(a) + zeros(d) + (-ONE, ZERO), -b))
        cons.append((zeros(d) + tuple(a) + (ZERO, -ONE), -b))
    for mu in E.facets:
        obj = tuple(-x for x in mu) + tuple(mu) + (ONE, ONE)
        try:
            res = lp_min(obj, cons)
        except Unbounded:
            return False
        if res.value < 0:
            return False
    # Lipschitz: max a_i.x + b_i - f(y) - ‖x-y‖ <= 0
    cons = []
    for a, b in ps:
        cons.append((zeros(d) + tuple(a) + (-ONE, ZERO), -b))
    for mu in E.facets:
        cons.append((tuple(mu) + neg(mu) + (ZERO, -ONE), ZERO))
    for a, b in ps:
        obj = tuple(a) + zeros(d) + (-ONE, -ONE)
        try:
            res = lp_max(obj, cons)
        except Unbounded:
            return False
        if res.value + b > 0:
            return False
    return True


# -- distances -------------------------------------------------------------

def sup_distance(f, g, with_point=False):
    """``sup |f - g|`` via conjugates: the max of ``|f* - g*|`` sits at slopes."""
    best, point = ZERO, None
    for P, Q, sign in ((f, g, 1), (g, f, -1)):
        for a in Q.slopes:
            rp = _conj_lp(P.pieces, a)
            rq = _conj_lp(Q.pieces, a)
            if rp is None or rq is None:
                raise NotKatetov("conjugate domains differ")
            val = rp[0] - rq[0]
            if val > best:
                best = val
                point = _witness_point(f, g, sign, val, rp[1])
    if with_point:
        return best, point
    return best


def _witness_point(f, g, sign, val, dual):
    # the equality duals of the conjugate LP locate a point where |f-g| = val
    for v in (dual, neg(dual)):
        if sign * (g(v) - f(v)) == val:
            return v
    return None


def sup_distance_primal(f, g):
    """Same quantity by one LP per piece over the primal space."""
    best = ZERO
    for P, Q in ((f, g), (g, f)):
        cons = [(tuple(a) + (-ONE,), -b) for a, b in Q.pieces]
        for a, b in P.pieces:
            res = lp_max(tuple(a) + (-ONE,), cons)
            best = max(best, res.value + b)
    return best


# -- types <-> functions ---------------------------------------------------

def to_katetov(xi):
    """``a -> ‖x - a‖^xi`` for a 1-type."""
    if xi.nvars != 1:
        raise WrongArity("to_katetov needs a 1-type")
    e = xi.base.dim
    pieces = [(neg(p[:e]), p[e]) for p in xi.funcs]
    return make_kfn(xi.base, pieces)


def from_katetov(f):
    from .typespace import make_type
    if f.katetov_checked is not True:
        f = checked(f)
    funcs = []
    for a, b in f.pieces:
        funcs.append(neg(a) + (b,))
    return make_type(f.space, 1, funcs)


# -- Katetov extension -----------------------------------------------------

def _affine_frame(points):
    p0 = points[0]
    diffs = [sub(p, p0) for p in points[1:]]
    idx = independent_subset(diffs, len(p0))
    return p0, [diffs[i] for i in idx]


def _coords(v, basis):
    k = len(basis)
    aug = [tuple(b[i] for b in basis) + (v[i],) for i in range(len(v))]
    red, piv = rref(aug, k + 1)
    return tuple(red[j][k] for j in range(k))


def epigraph_vertices(f, region):
    """Vertices ``(x, f(x))`` of the epigraph of ``f`` restricted to conv(region)."""
    pts = canonical(region)
    if not pts:
        raise EmptyRegion("empty region")
    p0, B = _affine_frame(pts)
    k = len(B)
    if k == 0:
        return [(p0, f(p0))]
    zs = [_coords(sub(p, p0), B) for p in pts]
    T = max(f(p) for p in pts) + 1
    A, rhs = [], []
    for a, b in facets_of(zs):
        A.append(tuple(a) + (ZERO,))
        rhs.append(b)
    for al, be in f.pieces:
        # al.(p0 + B z) + be <= t
        row = tuple(sum(al[i] * Bj[i] for i in range(len(al))) for Bj in B)
        A.append(row + (-ONE,))
        rhs.append(-be - dot(al, p0))
    A.append(zeros(k) + (ONE,))
    rhs.append(T)
    out = []
    for v in vertices_of(A, rhs):
        if v[-1] < T:
            x = tuple(p0[i] + sum(v[j] * B[j][i] for j in range(k)) for i in range(len(p0)))
            out.append((x, v[-1]))
    return out


def katetov_extend(f, region, space=None):
    """Exact ``inf_{x in X} f(x) + ‖x - y‖`` as a KFn on the whole space."""
    from .kernel.polytope import extreme_rays
    E = space or f.space
    d = E.dim
    verts = epigraph_vertices(f, region)
    if d == 0:
        return make_kfn(E, [((), min(t for _, t in verts))])
    gens = [(ONE,) + tuple(x) + (t,) for x, t in verts]
    gens += [(ZERO,) + tuple(w) + (ONE,) for w in E.vertices]
    gens.append((ZERO,) + zeros(d) + (ONE,))
    pieces = []
    for h in extreme_rays(gens, d + 2):
        hh = h[-1]
        if hh > 0:
            pieces.append((tuple(-x / hh for x in h[1:-1]), -h[0] / hh))
    return make_kfn(E, pieces)


def ball_region(space, center, radius):
    c = vec(center)
    r = Fraction(radius)
    if space.dim == 0:
        return [()]
    return [tuple(ci + r * wi for ci, wi in zip(c, w)) for w in space.vertices]


def locality_gap(f, region):
    return sup_distance_primal(katetov_extend(f, region), f)


# -- boundary maximality ---------------------------------------------------

@dataclass(frozen=True)
class MaxTestReport:
    verdict: str  # "Violated" or "NoViolationFound"
    gap: Fraction
    witness_g: object = None
    witness_lambda: tuple = None
    level: int = 1
    exact: bool = True


def _best_minorant(f, lam0):
    """max of ``l(lam0)`` over affine ``l`` with ``l(w) + f*(-w) <= 0`` on dual
    vertices and ``l(0) <= 0``; returns (value, slope v, intercept c)."""
    E = f.space
    d = E.dim
    cons = []
    for w in E.facets:
        cons.append((tuple(w) + (ONE,), -conj_value(f, neg(w))))
    cons.append((zeros(d) + (ONE,), ZERO))
    res = lp_max(tuple(lam0) + (ONE,), cons)
    return res.value, res.x[:d], res.x[d]


def boundary_max_test(f, r=0, level=1):
    """Largest ``g*(lam) - f*(lam)`` on the dual sphere over Katetov ``g <= f``.

    The optimum over g at a fixed lam is the LP of ``_best_minorant``; on
    each cell of f* restricted to the sphere the gap is convex, so the
    slopes on the sphere are the only candidates.  The result is exact.
    """
    r = Fraction(r)
    if r < 0 or level < 1:
        raise ValidationError("need r >= 0 and level >= 1")
    f = checked(f)
    E = f.space
    if E.dim == 0:
        return MaxTestReport("NoViolationFound", ZERO, None, None, level)
    best = None
    for a in f.slopes:
        if dual_norm(E, a) != 1:
            continue
        val, v, c = _best_minorant(f, a)
        gap = val - conj_value(f, a)
        if best is None or gap >= best[0]:
            best = (gap, a, v, c)
    gap, a, v, c = best
    if gap > r:
        g = _conj_with_minorant(f, v, c)
        return MaxTestReport("Violated", gap, g, a, level)
    return MaxTestReport("NoViolationFound", gap, None, a, level)


def _conj_with_minorant(f, v, c):
    """Conjugate of ``max(f*, l)`` restricted to E, where ``l = v . lam + c``."""
    E = f.space
    d = E.dim
    pts = [(a, conj_value(f, a)) for a in f.slopes]
    M = max(abs(s) for _, s in pts) + max(abs(c), ONE) + sum(abs(x) for x in v) * 2 + 1
    lifted = [tuple(a) + (s,) for a, s in pts] + [tuple(a) + (M,) for a, _ in pts]
    A, rhs = [], []
    for a, b in facets_of(lifted):
        A.append(a)
        rhs.append(b)
    A.append(tuple(v) + (-ONE,))
    rhs.append(-c)
    pieces = []
    for p in vertices_of(A, rhs):
        if p[-1] < M:
            pieces.append((p[:d], -p[-1]))
    return make_kfn(E, pieces)


@dataclass(frozen=True)
class IsolationVerdict:
    status: str  # "Isolated", "NotIsolated" or "Inconclusive"
    gap: Fraction
    report: MaxTestReport


def is_isolated(xi, level=1):
    if xi.nvars != 1:
        raise WrongArity("isolation test is for 1-types")
    rep = boundary_max_test(to_katetov(xi), 0, level)
    if rep.verdict == "Violated":
        return IsolationVerdict("NotIsolated", rep.gap, rep)
    return IsolationVerdict("Isolated", ZERO, rep)


@dataclass(frozen=True)
class CrossCheck:
    smooth: bool
    verdict: IsolationVerdict
    agree: bool


def smooth_isolation_crosscheck(E2, v, u, level=1):
    from .typespace import tp
    v, u = vec(v), vec(u)
    if E2.dim != 2 or rank([v, u], 2) < 2:
        raise NotABasis("v, u must form a basis of a 2-dimensional space")
    sub_, incl = subspace(E2, [v])
    xi = tp(E2, incl, [u])
    sm = is_smooth(E2, v)
    ver = is_isolated(xi, level)
    agree = (ver.status == "Isolated") == sm
    return CrossCheck(sm, ver, agree)
