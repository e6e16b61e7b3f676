"""Polyhedral normed spaces, linear maps between them, norming functionals."""
from dataclasses import dataclass

from .errors import DimensionMismatch, ValidationError, ZeroVector
from .kernel.linalg import (
    ZERO, affine_dim, dot, identity, is_zero, mat, matvec, nullspace, rank, transpose, unit, vec, vecmat,
)
from .kernel.polytope import PolyBall, canonical, complete_reps, polar


@dataclass(frozen=True)
class Space:
    dim: int
    ball: PolyBall
    label: str = ""

    def __post_init__(self):
        if self.ball.dim != self.dim:
            raise DimensionMismatch("ball has dim %d, space has dim %d" % (self.ball.dim, self.dim))
        if not self.ball.complete:
            object.__setattr__(self, "ball", complete_reps(self.ball))

    @property
    def facets(self):
        """Vertices of the dual ball."""
        return self.ball.facets

    @property
    def vertices(self):
        return self.ball.vertices

    def dual_vertices(self):
        # the trivial space has the single functional ()
        return self.ball.facets if self.dim else ((),)

    def norm(self, v):
        return norm(self, v)

    def __eq__(self, other):
        return isinstance(other, Space) and self.dim == other.dim and self.ball == other.ball

    def __hash__(self):
        return hash((self.dim, self.ball))


def from_facets(dim, facets, label=""):
    return Space(dim, PolyBall.from_facets(dim, facets), label)


def from_vertices(dim, vertices, label=""):
    return Space(dim, PolyBall.from_vertices(dim, vertices), label)


def linf(n):
    if n == 0:
        return zero_space()
    return from_facets(n, identity(n), "linf%d" % n)


def l1(n):
    if n == 0:
        return zero_space()
    return from_vertices(n, identity(n), "l1%d" % n)


def zero_space():
    return Space(0, PolyBall(0, (), ()), "zero")


def norm(s, v):
    v = vec(v)
    if len(v) != s.dim:
        raise DimensionMismatch("vector of length %d in space of dim %d" % (len(v), s.dim))
    if s.dim == 0:
        return ZERO
    return max(dot(f, v) for f in s.facets)


def dual_norm(s, lam):
    """Norm of a functional: max over ball vertices."""
    lam = vec(lam)
    if len(lam) != s.dim:
        raise DimensionMismatch("functional of length %d on space of dim %d" % (len(lam), s.dim))
    if s.dim == 0:
        return ZERO
    return max(dot(lam, w) for w in s.vertices)


def dual_space(s):
    return Space(s.dim, polar(s.ball), s.label + "*" if s.label else "")


@dataclass(frozen=True)
class Face:
    generators: tuple
    affine_dim: int


def norming_functionals(s, v):
    """Face of the dual ball on which ``lambda . v = ||v||``."""
    v = vec(v)
    if len(v) != s.dim:
        raise DimensionMismatch("vector of length %d in space of dim %d" % (len(v), s.dim))
    if is_zero(v):
        raise ZeroVector("norming functionals need v != 0")
    n = norm(s, v)
    gens = canonical(f for f in s.facets if dot(f, v) == n)
    return Face(gens, affine_dim(list(gens)))


def is_smooth(s, v):
    return norming_functionals(s, v).affine_dim == 0


UNCHECKED, ISOMETRIC, NOT_ISOMETRIC = "unchecked", "isometric", "not-isometric"


@dataclass(frozen=True)
class LinMap:
    """Linear map given by a ``target.dim x source.dim`` matrix of rows."""

    source: Space
    target: Space
    matrix: tuple
    status: str = UNCHECKED
    witness: tuple = None

    def __post_init__(self):
        m = mat(self.matrix)
        if len(m) != self.target.dim or any(len(r) != self.source.dim for r in m):
            raise DimensionMismatch(
                "matrix shape does not match %d x %d" % (self.target.dim, self.source.dim))
        object.__setattr__(self, "matrix", m)

    def __call__(self, v):
        v = vec(v)
        if len(v) != self.source.dim:
            raise DimensionMismatch("vector of length %d, map source dim %d" % (len(v), self.source.dim))
        if self.target.dim == 0:
            return ()
        return matvec(self.matrix, v)

    @property
    def columns(self):
        return transpose(self.matrix, self.source.dim) if self.target.dim else tuple(() for _ in range(self.source.dim))

    @property
    def isometric(self):
        return self.status == ISOMETRIC


def from_columns(source, target, cols):
    cols = [vec(c) for c in cols]
    rows = tuple(tuple(c[i] for c in cols) for i in range(target.dim))
    return LinMap(source, target, rows)


def pullback_facets(m):
    """Functionals ``Q^T mu`` describing the preimage ball ``{v : ||Qv|| <= 1}``."""
    if m.target.dim == 0:
        return []
    return [vecmat(mu, m.matrix) for mu in m.target.facets]


def check_isometry(m):
    """Resolve ``m.status`` exactly; a failing map carries a witness vector."""
    src, tgt = m.source, m.target
    if src.dim == 0:
        return LinMap(src, tgt, m.matrix, ISOMETRIC)
    if rank(m.matrix, src.dim) < src.dim:
        w = nullspace(m.matrix, src.dim)[0] if tgt.dim else unit(src.dim, 0)
        return LinMap(src, tgt, m.matrix, NOT_ISOMETRIC, w)
    for i in range(src.dim):
        e = unit(src.dim, i)
        if norm(tgt, m(e)) != norm(src, e):
            return LinMap(src, tgt, m.matrix, NOT_ISOMETRIC, e)
    for w in src.vertices:
        if norm(tgt, m(w)) != 1:
            return LinMap(src, tgt, m.matrix, NOT_ISOMETRIC, w)
    # norm(Qv) <= norm(v) now holds; the reverse needs preimage ball inside source ball
    pre = PolyBall.from_facets(src.dim, pullback_facets(m))
    for p in pre.vertices:
        if norm(src, p) > 1:
            return LinMap(src, tgt, m.matrix, NOT_ISOMETRIC, p)
    return LinMap(src, tgt, m.matrix, ISOMETRIC)


def require_isometric(m, what="map"):
    from .errors import NotIsometric
    if m.status != ISOMETRIC:
        m = check_isometry(m)
    if m.status != ISOMETRIC:
        raise NotIsometric("%s is not isometric" % what, witness=m.witness)
    return m


def subspace(s, basis, label=""):
    """Subspace spanned by ``basis`` with the induced norm, plus its inclusion."""
    basis = [vec(b) for b in basis]
    k = len(basis)
    if rank(basis, s.dim) < k:
        raise ValidationError("subspace basis is dependent")
    if k == 0:
        sub = zero_space()
        return sub, LinMap(sub, s, tuple(() for _ in range(s.dim)), ISOMETRIC)
    rows = tuple(tuple(b[i] for b in basis) for i in range(s.dim))
    facets = [vecmat(mu, rows) for mu in s.facets]
    sub = Space(k, PolyBall.from_facets(k, facets), label)
    return sub, LinMap(sub, s, rows, ISOMETRIC)


def isometric_spaces(a, b):
    """Exact test that the identity matrix is an isometry between same-coordinate spaces."""
    return a.dim == b.dim and a.ball == b.ball
