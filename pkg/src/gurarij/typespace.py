"""Quantifier-free types over a polyhedral space.

A type in ``n`` variables over ``E`` is stored as a finite symmetric set of
linear functionals on ``E + R^n`` (E coordinates first); the seminorm is
their maximum.  The stored set is canonical: the extreme points of its
convex hull, so two presentations of the same type compare equal.
"""
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BaseMismatch, DimensionMismatch, NotExtendingIdentity, ValidationError
from .kernel.linalg import ZERO, ONE, dot, identity, nullspace, quotient_map, vec, vecmat, zeros
from .kernel.lp import lp_max
from .kernel.polytope import PolyBall, canonical, extreme_points, symmetrize
from .space import LinMap, Space, norm, require_isometric, zero_space


@dataclass(frozen=True)
class TypePres:
    base: Space
    nvars: int
    funcs: tuple

    @property
    def width(self):
        return self.base.dim + self.nvars

    @property
    def kernel_dims(self):
        return len(nullspace(list(self.funcs), self.width)) if self.funcs else self.width

    def seminorm(self, z):
        z = vec(z)
        if len(z) != self.width:
            raise DimensionMismatch("expected %d coordinates" % self.width)
        return max(dot(p, z) for p in self.funcs)

    def var_norm(self, lam, a=None):
        """``||a + sum lam_i x_i||`` in the type."""
        a = zeros(self.base.dim) if a is None else vec(a)
        return self.seminorm(tuple(a) + vec(lam))


def make_type(base, nvars, funcs, check=True):
    funcs = [vec(p) for p in funcs]
    w = base.dim + nvars
    for p in funcs:
        if len(p) != w:
            raise DimensionMismatch("functional of length %d, expected %d" % (len(p), w))
    if not funcs:
        funcs = [zeros(w)]
    ext = extreme_points(symmetrize(funcs))
    if not ext:
        ext = (zeros(w),)
    xi = TypePres(base, nvars, ext)
    if check:
        check_extends(xi)
    return xi


def check_extends(xi):
    """The E block of the seminorm must be exactly the norm of E."""
    E = xi.base
    if E.dim == 0:
        return True
    proj = extreme_points(symmetrize(p[:E.dim] for p in xi.funcs))
    if canonical(proj) != canonical(E.facets):
        raise ValidationError("seminorm does not restrict to the norm of the base")
    return True


def realized(E, v):
    """Type of a vector of E itself (zero variables count as none)."""
    return tp(E, LinMap(E, E, identity(E.dim)), [v])


def tp(F, incl, a):
    """Type of the tuple ``a`` (vectors of F) over the image of ``incl``."""
    incl = require_isometric(incl, "inclusion")
    E = incl.source
    a = [vec(x) for x in a]
    for x in a:
        if len(x) != F.dim:
            raise DimensionMismatch("tuple entry outside F")
    funcs = []
    for mu in F.dual_vertices():
        pe = vecmat(mu, incl.matrix) if F.dim else zeros(E.dim)
        funcs.append(tuple(pe) + tuple(dot(mu, x) for x in a))
    return make_type(E, len(a), funcs, check=False)


@dataclass(frozen=True)
class Generated:
    space: Space
    incl: LinMap  # E -> E[xi]
    images: tuple  # images of the variables
    quotient: tuple  # matrix of E + R^n -> E[xi]


def generated_space(xi, label=""):
    E, n = xi.base, xi.nvars
    w = xi.width
    ker = nullspace(list(xi.funcs), w)
    P, pivots = quotient_map(ker, w, keep=E.dim)
    free = [c for c in range(w) if c not in pivots]
    m = len(free)
    if m == 0:
        G = zero_space()
    else:
        facets = [tuple(p[c] for c in free) for p in xi.funcs]
        G = Space(m, PolyBall.from_facets(m, facets), label)
    incl = LinMap(E, G, tuple(r[:E.dim] for r in P))
    incl = require_isometric(incl, "generated inclusion")
    images = tuple(tuple(r[E.dim + i] for r in P) for i in range(n))
    return Generated(G, incl, images, P)


def pullback(xi, phi):
    """Change of variables along ``phi: E(m) -> E(n)`` given as a matrix."""
    E = xi.base
    phi = [vec(r) for r in phi]
    if len(phi) != xi.width:
        raise DimensionMismatch("phi must have %d rows" % xi.width)
    cols = len(phi[0]) if phi else 0
    m = cols - E.dim
    if m < 0:
        raise DimensionMismatch("phi has too few columns")
    for i in range(xi.width):
        for j in range(E.dim):
            want = ONE if i == j else ZERO
            if phi[i][j] != want:
                raise NotExtendingIdentity("phi does not restrict to the identity on E")
    funcs = [vecmat(p, phi) for p in xi.funcs]
    return make_type(E, m, funcs, check=False)


def restrict_params(xi, incl):
    """Forget parameters outside ``incl(E)``."""
    incl = require_isometric(incl, "inclusion")
    if incl.target.dim != xi.base.dim:
        raise BaseMismatch("inclusion does not land in the base")
    E, F, n = incl.source, xi.base, xi.nvars
    funcs = []
    for p in xi.funcs:
        pe = vecmat(p[:F.dim], incl.matrix) if F.dim else zeros(E.dim)
        funcs.append(tuple(pe) + tuple(p[F.dim:]))
    return make_type(E, n, funcs, check=False)


@dataclass(frozen=True)
class DistanceBracket:
    lo: Fraction
    hi: Fraction
    radius_used: Fraction
    exact: bool
    witness: tuple = None


def type_distance(xi, zeta, R=None, tol=None, method=None):
    """Sup of ``|‖z‖^xi - ‖z‖^zeta|`` over ``z = a + sum lam_i x_i``, ``sum |lam_i| = 1``.

    Both seminorms restrict to the norm of E, so the difference has
    nonpositive recession along pure-E directions and every LP below is
    bounded; the bracket is therefore exact.  ``R`` and ``tol`` are kept
    for interface compatibility and only bound the reported radius.
    """
    if xi.base != zeta.base:
        raise BaseMismatch("types over different bases")
    if xi.nvars != zeta.nvars:
        raise BaseMismatch("types in different numbers of variables")
    n = xi.nvars
    if n == 0:
        return DistanceBracket(ZERO, ZERO, ZERO, True)
    if method is None:
        method = "conjugate" if n == 1 else "lp"
    if method == "conjugate" and n == 1:
        from .fenchel import sup_distance, to_katetov
        d, v = sup_distance(to_katetov(xi), to_katetov(zeta), with_point=True)
        rad = norm(xi.base, v) if v is not None else ZERO
        wit = None if v is None else tuple(-x for x in v) + (ONE,)
        return DistanceBracket(d, d, rad, True, wit)
    best, arg = ZERO, None
    for P, Q in ((xi, zeta), (zeta, xi)):
        val, z = _one_sided(P, Q)
        if val > best:
            best, arg = val, z
    rad = norm(xi.base, arg[:xi.base.dim]) if arg is not None else ZERO
    return DistanceBracket(best, best, rad, True, arg)


def _half(funcs):
    out = []
    for p in funcs:
        nz = next((x for x in p if x), ZERO)
        if nz > 0:
            out.append(p)
    return out


def _one_sided(P, Q):
    """max over the l1-normalised slab of ``‖z‖^P - ‖z‖^Q``."""
    e, n = P.base.dim, P.nvars
    w = e + n
    nv = w + 1 + n
    cons = []
    for q_ in Q.funcs:
        cons.append((tuple(q_) + (-ONE,) + zeros(n), ZERO))
    for i in range(n):
        for s in (ONE, -ONE):
            row = [ZERO] * nv
            row[e + i] = s
            row[w + 1 + i] = -ONE
            cons.append((tuple(row), ZERO))
    cons.append((zeros(w + 1) + (ONE,) * n, ONE))
    best, arg = ZERO, None
    for p in _half(P.funcs):
        res = lp_max(tuple(p) + (-ONE,) + zeros(n), cons)
        if res.value > best:
            best, arg = res.value, res.x[:w]
    return best, arg


def types_equal(xi, zeta):
    return xi.base == zeta.base and xi.nvars == zeta.nvars and xi.funcs == zeta.funcs


# -- density of realised types ------------------------------------------------

def sparse_grid(G, radius, step, support=2, extra=()):
    """Rational points of G on the ``step`` lattice with at most ``support``
    nonzero coordinates and norm at most ``radius``.

    The set only grows when G is enlarged by zero-padding, which keeps
    defect curves monotone along a chain.
    """
    step = Fraction(step)
    d = G.dim
    if d == 0:
        return [()]
    bound = radius * max(max(abs(x) for x in v) for v in G.vertices)
    kmax = int(bound / step)
    vals = [k * step for k in range(-kmax, kmax + 1) if k]
    pts = [zeros(d)]
    for s in range(1, min(support, d) + 1):
        for idx in itertools.combinations(range(d), s):
            for combo in itertools.product(vals, repeat=s):
                v = [ZERO] * d
                for i, x in zip(idx, combo):
                    v[i] = x
                v = tuple(v)
                if norm(G, v) <= radius:
                    pts.append(v)
    for v in extra:
        pts.append(vec(v))
    return pts


def _float_type_values(xi, agrid):
    """Float values of ``a -> ‖x - a‖^xi`` on the rows of ``agrid``."""
    P = np.array([[float(x) for x in p] for p in xi.funcs])
    e = xi.base.dim
    z = np.hstack([-agrid, np.ones((agrid.shape[0], 1))])
    return (z @ P[:, :e + 1].T).max(axis=1)


def _float_point_values(G, incl, pts, agrid):
    """Float values ``‖c - incl a‖_G`` for every net point c and grid a."""
    if G.dim == 0:
        return np.zeros((len(pts), agrid.shape[0]))
    F = np.array([[float(x) for x in f] for f in G.facets])
    Q = np.array([[float(x) for x in r] for r in incl.matrix]).reshape(G.dim, incl.source.dim)
    C = np.array([[float(x) for x in c] for c in pts])
    img = agrid @ Q.T  # (M, g)
    cf = C @ F.T  # (N, k)
    af = img @ F.T  # (M, k)
    out = np.empty((len(pts), agrid.shape[0]))
    for j in range(agrid.shape[0]):
        out[:, j] = (cf - af[j]).max(axis=1)
    return out


def _agrid(E, radius, per_axis=33):
    e = E.dim
    if e == 0:
        return np.zeros((1, 0))
    span = float(radius) * 2 + 2
    scale = max(max(abs(float(x)) for x in v) for v in E.vertices)
    ticks = np.linspace(-span * scale, span * scale, per_axis)
    return np.array(list(itertools.product(ticks, repeat=e)))


@dataclass(frozen=True)
class DefectDetail:
    value: Fraction
    per_sample: tuple  # (distance, point) pairs


def density_defect_detail(G, incl, samples, net_step, support=2, extra=(), keep=8):
    """Exact defect over a sparse net; candidates are ranked in floats first."""
    incl = require_isometric(incl, "inclusion")
    if not samples:
        return DefectDetail(ZERO, ())
    per = []
    for xi in samples:
        if xi.nvars != 1:
            raise ValidationError("density samples must be 1-types")
        r = xi.var_norm((ONE,)) + 1
        pts = sparse_grid(G, r, net_step, support, extra)
        agrid = _agrid(xi.base, r)
        fx = _float_type_values(xi, agrid)
        fc = _float_point_values(G, incl, pts, agrid)
        approx = np.abs(fc - fx[None, :]).max(axis=1)
        order = list(np.argsort(approx, kind="stable")[:keep])
        # extra points (ledger witnesses) are always checked exactly
        order += [len(pts) - 1 - i for i in range(len(extra))]
        best = None
        for i in dict.fromkeys(int(i) for i in order):
            c = pts[i]
            d = type_distance(xi, tp(G, incl, [c])).hi
            if best is None or d < best[0]:
                best = (d, c)
        per.append(best)
    return DefectDetail(max(d for d, _ in per), tuple(per))


def realized_density_defect(G, incl, samples, net_step, support=2, extra=()):
    return density_defect_detail(G, incl, samples, net_step, support, extra).value
