"""Exact linear algebra over ``fractions.Fraction``.

Vectors are tuples, matrices are tuples of row tuples.  Nothing here ever
touches floating point.
"""
from fractions import Fraction
from math import gcd

from ..errors import DimensionMismatch, ValidationError

ZERO = Fraction(0)
ONE = Fraction(1)


def q(x):
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise ValidationError("floats are not accepted as exact input: %r" % x)
    return Fraction(x)


def vec(xs):
    return tuple(q(x) for x in xs)


def mat(rows):
    return tuple(vec(r) for r in rows)


def dot(u, v):
    if len(u) != len(v):
        raise DimensionMismatch("dot of lengths %d and %d" % (len(u), len(v)))
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(t, v):
    return tuple(t * a for a in v)


def neg(v):
    return tuple(-a for a in v)


def zeros(n):
    return (ZERO,) * n


def unit(n, i):
    return tuple(ONE if j == i else ZERO for j in range(n))


def identity(n):
    return tuple(unit(n, i) for i in range(n))


def is_zero(v):
    return not any(v)


def transpose(m, ncols=None):
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def matvec(m, v):
    return tuple(dot(row, v) for row in m)


def vecmat(v, m):
    """Row vector times matrix, i.e. ``m^T v``."""
    ncols = len(m[0]) if m else 0
    out = [ZERO] * ncols
    for a, row in zip(v, m):
        if a:
            for j, x in enumerate(row):
                if x:
                    out[j] += a * x
    return tuple(out)


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(dot(r, c) for c in bt) for r in a)


def hstack(a, b):
    return tuple(tuple(ra) + tuple(rb) for ra, rb in zip(a, b))


def primitive(v):
    """Positive rescaling of ``v`` to a coprime integer vector."""
    if is_zero(v):
        return v
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for i in ints:
        g = gcd(g, abs(i))
    return tuple(Fraction(i // g) for i in ints)


def rref(rows, ncols):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows, ncols=None):
    rows = list(rows)
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis (list of vectors) of ``{x : rows x = 0}``."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def independent_subset(vectors, ncols=None):
    """Indices of a greedily chosen maximal linearly independent subset."""
    chosen = []
    basis = []
    for i, v in enumerate(vectors):
        if ncols is None:
            ncols = len(v)
        if rank(basis + [v], ncols) > len(basis):
            basis.append(v)
            chosen.append(i)
            if len(basis) == ncols:
                break
    return chosen


def solve(a, b):
    """Solve the square system ``a x = b``; raises on singular ``a``."""
    n = len(a)
    aug = [tuple(row) + (bi,) for row, bi in zip(a, b)]
    red, pivots = rref(aug, n + 1)
    if pivots[:n] != list(range(n)) or len(pivots) != n:
        raise ValidationError("singular system")
    return tuple(row[n] for row in red)


def inverse(a):
    n = len(a)
    aug = [tuple(row) + unit(n, i) for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValidationError("singular matrix")
    return tuple(tuple(row[n:]) for row in red)


def affine_dim(points):
    """Dimension of the affine hull of a nonempty point list."""
    if not points:
        return -1
    p0 = points[0]
    diffs = [sub(p, p0) for p in points[1:]]
    return rank(diffs, len(p0)) if diffs else 0


def quotient_map(kernel, n, keep=0):
    """Matrix of a projection ``R^n -> R^n / span(kernel)``.

    Pivots are taken from the last coordinates first, so when the kernel
    meets ``span(e_0..e_{keep-1})`` trivially the first ``keep`` coordinates
    pass through unchanged.  Returns ``(P, pivots)``.
    """
    kernel = [vec(k) for k in kernel if not is_zero(k)]
    if not kernel:
        return identity(n), []
    order = list(range(n - 1, -1, -1))
    red, piv = rref([tuple(k[c] for c in order) for k in kernel], n)
    pivots = [order[p] for p in piv]
    rows = [tuple(r[order.index(c)] for c in range(n)) for r in red]
    if any(p < keep for p in pivots):
        raise ValidationError("kernel meets the kept coordinates")
    free = [c for c in range(n) if c not in pivots]
    # z ~ z - sum z_p k_p; keep the free coordinates of the result
    P = []
    for c in free:
        row = [ZERO] * n
        row[c] = ONE
        for r, p in zip(rows, pivots):
            if r[c]:
                row[p] -= r[c]
        P.append(tuple(row))
    return tuple(P), pivots
