"""Amalgamation of polyhedral spaces and the approximate join."""
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConditionViolated, DimensionMismatch, DimensionTooLarge, NotIsometric, SmallToleranceCapped, ValidationError,
)
from .kernel.linalg import ZERO, matmul, matvec, neg, q, sub, vec, zeros
from .kernel.linalg import quotient_map
from .kernel.lp import lp_max
from .kernel.polytope import MAX_DIM, PolyBall
from .space import LinMap, Space, norm, require_isometric, zero_space

MIN_EPS = Fraction(1, 2 ** 20)


@dataclass(frozen=True)
class AmalgamOut:
    result: Space
    g0: LinMap
    g1: LinMap
    kernel_dim: int


def _join_space(points, dim, label=""):
    if dim == 0:
        return zero_space()
    if dim > MAX_DIM:
        raise DimensionTooLarge("amalgam of dim %d exceeds cap %d" % (dim, MAX_DIM))
    return Space(dim, PolyBall.from_vertices(dim, points), label)


def _split(P, n0):
    left = tuple(r[:n0] for r in P)
    right = tuple(r[n0:] for r in P)
    return left, right


def amalgamate(E, F0, F1, f0, f1, label=""):
    """Pushout of ``f0: E -> F0`` and ``f1: E -> F1`` with the conv-union ball.

    Coordinates are chosen so that ``g0`` is ``[I; 0]``.
    """
    f0 = require_isometric(f0, "f0")
    f1 = require_isometric(f1, "f1")
    if f0.source.dim != E.dim or f1.source.dim != E.dim:
        raise DimensionMismatch("embeddings do not start at E")
    n0, n1, e = F0.dim, F1.dim, E.dim
    n = n0 + n1
    kernel = [tuple(c0) + neg(c1) for c0, c1 in zip(f0.columns, f1.columns)]
    P, _ = quotient_map(kernel, n, keep=n0)
    m = len(P)
    A0, A1 = _split(P, n0)
    pts = [matvec(A0, w) for w in F0.vertices] + [matvec(A1, w) for w in F1.vertices]
    G = _join_space(pts, m, label)
    g0 = require_isometric(LinMap(F0, G, A0), "g0")
    g1 = require_isometric(LinMap(F1, G, A1), "g1")
    assert matmul_safe(g0.matrix, f0.matrix, e) == matmul_safe(g1.matrix, f1.matrix, e)
    return AmalgamOut(G, g0, g1, e)


def matmul_safe(a, b, ncols):
    if not a:
        return ()
    if not b:
        return tuple((ZERO,) * ncols for _ in a)
    return matmul(a, b)


def _cap(eps):
    out = []
    for e in eps:
        e = q(e)
        if e < 0:
            raise ValueError("tolerances must be nonnegative")
        if 0 < e < MIN_EPS:
            warnings.warn("tolerance %s capped at 2^-20" % e, SmallToleranceCapped)
            e = MIN_EPS
        out.append(e)
    return out


def condition_check(E, F, a, b, eps):
    """Decide ``| ||sum r a|| - ||sum r b|| | <= sum |r_i| eps_i`` for all real r.

    Returns ``(ok, witness_r)``.  Each direction and each facet of the
    larger side gives one LP over the l1 unit ball of r.
    """
    a, b = [vec(x) for x in a], [vec(x) for x in b]
    if len(a) != len(b) or len(a) != len(eps):
        raise DimensionMismatch("tuples of unequal length")
    for x in a:
        if len(x) != E.dim:
            raise DimensionMismatch("a-vector outside E")
    for x in b:
        if len(x) != F.dim:
            raise DimensionMismatch("b-vector outside F")
    eps = [q(e) for e in eps]
    k = len(a)
    if k == 0:
        return True, None
    A = [tuple(x[i] for x in a) for i in range(E.dim)]
    B = [tuple(x[i] for x in b) for i in range(F.dim)]
    for (big, BigM, small, SmallM) in ((E, A, F, B), (F, B, E, A)):
        w = _max_excess(big, BigM, small, SmallM, eps, k)
        if w is not None:
            return False, w
    return True, None


def _max_excess(big, BigM, small, SmallM, eps, k):
    # variables: r (k), u, t (k)
    nv = 2 * k + 1
    cons = []
    for mu in small.dual_vertices():
        row = vecmat_rows(mu, SmallM, k)
        cons.append((row + (Fraction(-1),) + zeros(k), 0))
    for i in range(k):
        ri = [ZERO] * nv
        ri[i] = Fraction(1)
        ri[k + 1 + i] = Fraction(-1)
        cons.append((tuple(ri), 0))
        ri = [ZERO] * nv
        ri[i] = Fraction(-1)
        ri[k + 1 + i] = Fraction(-1)
        cons.append((tuple(ri), 0))
    cons.append((zeros(k + 1) + (Fraction(1),) * k, 1))
    for lam in big.dual_vertices():
        obj = vecmat_rows(lam, BigM, k) + (Fraction(-1),) + tuple(-e for e in eps)
        res = lp_max(obj, cons)
        if res.value > 0:
            return res.x[:k]
    return None


def vecmat_rows(lam, M, k):
    out = [ZERO] * k
    for c, row in zip(lam, M):
        if c:
            for j, x in enumerate(row):
                out[j] += c * x
    return tuple(out)


def approx_join(E, F, a, b, eps, label="", check=True):
    """Join E and F so that ``||gE a_i - gF b_i|| <= eps_i``.

    Returns an :class:`AmalgamOut` with ``g0 = gE`` and ``g1 = gF``.
    With ``check=False`` the condition is not pre-checked; a failing
    instance then surfaces as NotIsometric from the embedding checks.
    """
    a, b = [vec(x) for x in a], [vec(x) for x in b]
    eps = _cap(eps)
    if check:
        ok, w = condition_check(E, F, a, b, eps)
        if not ok:
            raise ConditionViolated("norm condition fails", witness=w)
    e, f = E.dim, F.dim
    n = e + f
    dirs = [tuple(x) + neg(y) for x, y in zip(a, b)]
    kernel = [d for d, t in zip(dirs, eps) if t == 0]
    try:
        P, _ = quotient_map(kernel, n, keep=e)
    except ValidationError:
        raise NotIsometric("identifications collapse part of E")
    m = len(P)
    AE, AF = _split(P, e)
    pts = [matvec(AE, w) for w in E.vertices] + [matvec(AF, w) for w in F.vertices]
    for d, t in zip(dirs, eps):
        if t > 0:
            pts.append(tuple(x / t for x in matvec(P, d)))
    G = _join_space(pts, m, label)
    gE = require_isometric(LinMap(E, G, AE), "gE")
    gF = require_isometric(LinMap(F, G, AF), "gF")
    for x, y, t in zip(a, b, eps):
        assert norm(G, sub(gE(x), gF(y))) <= t
    return AmalgamOut(G, gE, gF, n - m)
