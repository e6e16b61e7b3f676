"""Polytopes: double description, vertex/facet conversion, PolyBall."""
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DegenerateBall, DimensionMismatch, DimensionTooLarge, UnboundedBall
from .linalg import ONE, ZERO, dot, independent_subset, inverse, is_zero, neg, primitive, rank, transpose, vec
from .lp import lp_max

MAX_DIM = 6


def extreme_rays(rows, dim):
    """Extreme rays of the pointed cone ``{y : r . y >= 0 for r in rows}``.

    Standard incremental double description with the combinatorial
    adjacency test.  Rays come back as primitive integer vectors.
    Raises DegenerateBall if the cone has a lineality space.
    """
    rows = [vec(r) for r in rows if not is_zero(r)]
    if not rows and dim == 0:
        return []
    basis_idx = independent_subset(rows, dim)
    if len(basis_idx) < dim:
        raise DegenerateBall("cone is not pointed (rank %d < %d)" % (len(basis_idx), dim))
    S = [rows[i] for i in basis_idx]
    Sinv = inverse(S)
    cols = transpose(Sinv)
    # column j of S^-1 is tight on every basis row except j
    rays = []
    for j, col in enumerate(cols):
        tight = frozenset(basis_idx[i] for i in range(dim) if i != j)
        rays.append((primitive(vec(col)), tight))
    done = set(basis_idx)
    for idx, row in enumerate(rows):
        if idx in done:
            continue
        pos, zer, negs = [], [], []
        for ray in rays:
            s = dot(row, ray[0])
            if s > 0:
                pos.append((ray, s))
            elif s < 0:
                negs.append((ray, s))
            else:
                zer.append(ray)
        if not negs:
            rays = [(r, t | {idx}) if (r, t) in zer else (r, t) for r, t in rays]
            done.add(idx)
            continue
        new = []
        allrays = [r for r, _ in pos] + zer + [r for r, _ in negs]
        for (p, sp) in pos:
            for (m, sm) in negs:
                common = p[1] & m[1]
                if len(common) < dim - 2:
                    continue
                if any(o is not p and o is not m and common <= o[1] for o in allrays):
                    continue
                ray = tuple(sp * a - sm * b for a, b in zip(m[0], p[0]))
                new.append((primitive(ray), common | {idx}))
        rays = [r for r, _ in pos] + [(r, t | {idx}) for r, t in zer] + new
        done.add(idx)
    return [r for r, _ in rays]


def vertices_of(facets, rhs=None):
    """Vertices of the bounded polytope ``{x : a_j . x <= b_j}``.

    ``rhs`` defaults to all ones.  Raises UnboundedBall if the region is
    unbounded.
    """
    facets = [vec(a) for a in facets]
    if not facets:
        raise UnboundedBall("no constraints")
    d = len(facets[0])
    if d > MAX_DIM + 1:
        raise DimensionTooLarge("vertex enumeration limited to dim <= %d" % MAX_DIM)
    rhs = [ONE] * len(facets) if rhs is None else [Fraction(b) for b in rhs]
    if rank(facets, d) < d:
        raise UnboundedBall("constraint normals do not span")
    rows = [(b,) + neg(a) for a, b in zip(facets, rhs)]
    rows.append((ONE,) + (ZERO,) * d)
    try:
        rays = extreme_rays(rows, d + 1)
    except DegenerateBall:
        raise UnboundedBall("region is unbounded")
    verts = []
    for r in rays:
        t = r[0]
        if t == 0:
            raise UnboundedBall("region is unbounded")
        verts.append(tuple(x / t for x in r[1:]))
    return sorted(set(verts))


def facets_of(points):
    """Irredundant facets ``(a, b)`` with ``a . x <= b`` of ``conv(points)``.

    The hull must be full-dimensional.
    """
    points = [vec(p) for p in points]
    if not points:
        raise DegenerateBall("empty point set")
    d = len(points[0])
    if d > MAX_DIM + 1:
        raise DimensionTooLarge("facet enumeration limited to dim <= %d" % MAX_DIM)
    # y = (c, a) with c - a.p >= 0 for every point
    rows = [(ONE,) + neg(p) for p in points]
    rows.append((ONE,) + (ZERO,) * d)
    try:
        rays = extreme_rays(rows, d + 1)
    except DegenerateBall:
        raise DegenerateBall("points are not full-dimensional")
    out = []
    for r in rays:
        a = r[1:]
        if is_zero(a):
            continue
        out.append((a, r[0]))
    return out


def lex_key(v):
    return tuple(v)


def canonical(vectors):
    return tuple(sorted(set(vec(v) for v in vectors), key=lex_key))


def symmetrize(vectors):
    vs = [vec(v) for v in vectors]
    return canonical(vs + [neg(v) for v in vs])


def extreme_points(points):
    """Extreme points of ``conv(points)`` for arbitrary (possibly flat) sets.

    Points are reduced to their affine hull before the facet computation.
    """
    pts = canonical(points)
    if len(pts) <= 1:
        return pts
    d = len(pts[0])
    p0 = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]
    idx = independent_subset(diffs, d)
    k = len(idx)
    if k == 1:
        basis = diffs[idx[0]]
        coords = [Fraction(0)] + [_coord_along(dv, basis) for dv in diffs]
        lo = min(range(len(pts)), key=lambda i: coords[i])
        hi = max(range(len(pts)), key=lambda i: coords[i])
        return canonical([pts[lo], pts[hi]])
    B = [diffs[i] for i in idx]
    coords = [(Fraction(0),) * k] + [_coords_in(dv, B) for dv in diffs]
    fs = facets_of(coords)
    keep = []
    for p, c in zip(pts, coords):
        tight = [a for a, b in fs if dot(a, c) == b]
        if len(tight) >= k and rank(tight, k) == k:
            keep.append(p)
    return canonical(keep)


def _coord_along(v, basis):
    i = next(j for j, x in enumerate(basis) if x)
    return v[i] / basis[i]


def _coords_in(v, basis):
    """Coordinates of ``v`` in the (independent) row list ``basis``."""
    from .linalg import rref
    k = len(basis)
    d = len(v)
    aug = [tuple(basis[j][i] for j in range(k)) + (v[i],) for i in range(d)]
    red, piv = rref(aug, k + 1)
    return tuple(red[j][k] for j in range(k))


@dataclass(frozen=True)
class PolyBall:
    """Centrally symmetric polytope with 0 in its interior.

    ``facets`` are dual vectors with ball = {v : f . v <= 1}; ``vertices``
    span it as a convex hull.  Either may be None until completed.
    """

    dim: int
    facets: tuple = None
    vertices: tuple = None

    def __post_init__(self):
        for name in ("facets", "vertices"):
            rep = getattr(self, name)
            if rep is None:
                continue
            rep = canonical(rep)
            for v in rep:
                if len(v) != self.dim:
                    raise DimensionMismatch("%s entry %r has wrong length" % (name, v))
            object.__setattr__(self, name, rep)

    @classmethod
    def from_facets(cls, dim, facets):
        return complete_reps(cls(dim, facets=symmetrize(facets) if facets else ()))

    @classmethod
    def from_vertices(cls, dim, vertices):
        return complete_reps(cls(dim, vertices=symmetrize(vertices) if vertices else ()))

    @property
    def complete(self):
        return self.facets is not None and self.vertices is not None

    def gauge(self, v):
        if self.dim == 0:
            return Fraction(0)
        if self.facets is not None:
            return max(dot(f, v) for f in self.facets)
        return gauge_from_vertices(self.vertices, v)

    def contains(self, v):
        return self.gauge(v) <= 1


def gauge_from_vertices(vertices, v):
    """min t with v = sum mu_k w_k, sum mu_k = t, mu >= 0, solved by LP."""
    n = len(vertices)
    d = len(v)
    cons = [(tuple(-1 if j == k else 0 for j in range(n)), 0) for k in range(n)]
    eqs = [(tuple(w[i] for w in vertices), v[i]) for i in range(d)]
    res = lp_max(tuple(Fraction(-1) for _ in range(n)), cons, eqs)
    return -res.value


def complete_reps(ball):
    """Fill in whichever representation is missing and drop redundancy."""
    d = ball.dim
    if d == 0:
        return PolyBall(0, (), ())
    if d > MAX_DIM:
        raise DimensionTooLarge("dim %d exceeds cap %d" % (d, MAX_DIM))
    if ball.vertices is not None and len(ball.vertices):
        verts = symmetrize(ball.vertices)
        if rank(list(verts), d) < d:
            raise DegenerateBall("vertices do not span")
        fs = facets_of(verts)
        facets = []
        for a, b in fs:
            if b <= 0:
                raise DegenerateBall("origin is not interior")
            facets.append(tuple(x / b for x in a))
        facets = canonical(facets)
        verts = vertices_of(facets)
        return PolyBall(d, facets, canonical(verts))
    if ball.facets is not None and len(ball.facets):
        facets = symmetrize(ball.facets)
        verts = vertices_of(facets)
        if rank(verts, d) < d:
            raise DegenerateBall("ball is not full-dimensional")
        # keep only facets tight on a spanning vertex set
        keep = []
        for f in facets:
            tight = [v for v in verts if dot(f, v) == 1]
            if len(tight) >= d and rank(tight, d) == d:
                keep.append(f)
        return PolyBall(d, canonical(keep), canonical(verts))
    raise DegenerateBall("ball has no representation")


def polar(ball):
    """Polar ball: vertices and facets swap roles."""
    if ball.dim == 0:
        return PolyBall(0, (), ())
    if not ball.complete:
        ball = complete_reps(ball)
    return PolyBall(ball.dim, facets=ball.vertices, vertices=ball.facets)


def check_consistent(ball):
    """Cross-validate H- and V-rep; returns True or raises DegenerateBall."""
    for v in ball.vertices:
        if any(dot(f, v) > 1 for f in ball.facets):
            raise DegenerateBall("vertex %r violates a facet" % (v,))
    for f in ball.facets:
        if not any(dot(f, v) == 1 for v in ball.vertices):
            raise DegenerateBall("facet %r is not tight anywhere" % (f,))
    return True
