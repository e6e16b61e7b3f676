"""Counting-types experiments: separated families, polyhedral nets, isolation probes."""
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, GridTooLarge, NoAnchorsFound, ValidationError
from .fenchel import is_isolated, is_katetov, make_kfn
from .kernel.linalg import ONE, ZERO, dot, neg, sub, vec
from .kernel.lp import lp_max
from .space import Space, from_vertices, norm
from .typespace import make_type


def polygon_space(k, denom=10 ** 6, label=""):
    """Regular 2k-gon inscribed in the unit circle, vertices rounded to ``1/denom``."""
    half = []
    for j in range(k):
        t = math.pi * j / k
        half.append((Fraction(round(math.cos(t) * denom), denom), Fraction(round(math.sin(t) * denom), denom)))
    return from_vertices(2, half + [neg(v) for v in half], label or "polygon%d" % (2 * k))


def default_anchors(m, radius=10, denom=1000):
    out = []
    for n in range(1, m + 1):
        t = 7 * n / 10
        out.append((Fraction(round(radius * math.cos(t) * denom), denom),
                    Fraction(round(radius * math.sin(t) * denom), denom)))
    return out


def anchors_ok(E, v, w):
    nv, nw = norm(E, v), norm(E, w)
    bound = nv + nw - 1
    return norm(E, tuple(a + b for a, b in zip(v, w))) <= bound and norm(E, sub(v, w)) <= bound


def find_anchors(E, m, candidates=None, grid_radius=10):
    """Pairwise-compatible anchors: the given candidates if they work,
    otherwise an exhaustive search over the integer grid of radius ``grid_radius``."""
    if candidates is not None:
        cand = [vec(c) for c in candidates]
        if len(cand) >= m and all(anchors_ok(E, cand[i], cand[j])
                                  for i in range(m) for j in range(i + 1, m)):
            return cand[:m]
    if E.dim < 2:
        raise NoAnchorsFound("anchors need dim >= 2")
    pts = []
    for c in itertools.product(range(-grid_radius, grid_radius + 1), repeat=E.dim):
        # v and -v give the same constraints, keep one of each pair
        if any(c) and next(x for x in c if x) > 0:
            pts.append(vec(c))
    pts.sort(key=lambda v: -norm(E, v))
    adj = {}
    for i in range(len(pts)):
        adj[i] = set()
    for i, j in itertools.combinations(range(len(pts)), 2):
        if anchors_ok(E, pts[i], pts[j]):
            adj[i].add(j)
            adj[j].add(i)

    def grow(chosen, pool):
        if len(chosen) == m:
            return chosen
        for i in sorted(pool):
            got = grow(chosen + [i], pool & adj[i] - set(range(i + 1)))
            if got:
                return got
        return None

    found = grow([], set(range(len(pts))))
    if not found:
        raise NoAnchorsFound("no %d compatible anchors on the radius-%d grid" % (m, grid_radius))
    return [pts[i] for i in found]


@dataclass(frozen=True)
class SeparatedFamily:
    base: Space
    anchors: tuple
    sign_patterns: tuple
    types: tuple
    pairwise_lo: tuple


def candidate_lo(xi, zeta, points):
    """Lower bound on the type distance from evaluations at ``x - a``."""
    best = ZERO
    for a in points:
        z = neg(a) + (ONE,)
        best = max(best, abs(xi.seminorm(z) - zeta.seminorm(z)))
    return best


def lindenstrauss_family(E, m, anchors=None, grid_radius=10):
    if E.dim < 2:
        raise DimensionMismatch("the base needs dim >= 2")
    if anchors is None and E.dim == 2:
        anchors = default_anchors(m)
    vs = find_anchors(E, m, anchors, grid_radius)
    radii = [norm(E, v) - Fraction(1, 2) for v in vs]
    # E sits in l_inf^N through its dual-ball vertices
    coords = list(E.facets)
    patterns = list(itertools.product((1, -1), repeat=m))
    types = []
    for eps in patterns:
        point = []
        for mu in coords:
            lo = max(s * dot(mu, v) - r for s, v, r in zip(eps, vs, radii))
            hi = min(s * dot(mu, v) + r for s, v, r in zip(eps, vs, radii))
            if lo > hi:
                raise ValidationError("interval family has empty intersection")
            point.append((lo + hi) / 2)
        funcs = [tuple(mu) + (p,) for mu, p in zip(coords, point)]
        xi = make_type(E, 1, funcs, check=False)
        for s, v, r in zip(eps, vs, radii):
            assert xi.seminorm(tuple(-s * x for x in v) + (ONE,)) <= r
        types.append(xi)
    cands = [tuple(s * x for x in v) for v in vs for s in (1, -1)]
    k = len(types)
    lo = [[ZERO] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            lo[i][j] = lo[j][i] = candidate_lo(types[i], types[j], cands)
    return SeparatedFamily(E, tuple(vs), tuple(patterns), tuple(types), tuple(tuple(r) for r in lo))


# -- random Katetov functions --------------------------------------------

def random_interior(E, rng, den=8):
    """A rational functional of dual norm < 1."""
    ws = E.facets
    coeffs = [Fraction(rng.randint(0, den), den) for _ in ws]
    s = sum(coeffs)
    if s == 0:
        return tuple(ZERO for _ in range(E.dim))
    shrink = Fraction(rng.randint(1, den - 1), den)
    return tuple(shrink * sum(c * w[i] for c, w in zip(coeffs, ws)) / s for i in range(E.dim))


def random_katetov(E, rng, extra=2, scale=2, den=4):
    """Random PL convex Katetov function on E.

    Conjugate values are drawn at the dual vertices with antipodal sums
    <= 0 and anywhere at a few interior slopes; the function is the
    conjugate of their lower envelope.
    """
    if E.dim == 0:
        return make_kfn(E, [((), Fraction(rng.randint(0, scale * den), den))])
    h = {}
    for w in E.facets:
        if w in h:
            continue
        a = Fraction(rng.randint(-scale * den, scale * den), den)
        b = -a - Fraction(rng.randint(0, scale * den), den)
        h[w], h[neg(w)] = a, b
    for _ in range(extra):
        lam = random_interior(E, rng)
        h.setdefault(lam, Fraction(rng.randint(-scale * den, scale * den), den))
    return make_kfn(E, [(lam, -val) for lam, val in h.items()])


def random_space(rng, dim, extra=2, span=3, label=""):
    """Random centrally symmetric polytope ball containing the cross-polytope."""
    if dim == 0:
        from .space import zero_space
        return zero_space()
    pts = [tuple(ONE if j == i else ZERO for j in range(dim)) for i in range(dim)]
    for _ in range(extra):
        v = tuple(Fraction(rng.randint(-span, span), rng.randint(1, span)) for _ in range(dim))
        if any(v):
            pts.append(v)
    return from_vertices(dim, pts, label)


# -- polyhedral nets ------------------------------------------------------

@dataclass(frozen=True)
class NetReport:
    net: tuple
    distances: tuple  # best truncated distance per sample
    covered: bool


def sup_distance_on_ball(f, g, R):
    """``sup_{‖a‖ <= R} |f(a) - g(a)|`` exactly, one LP per piece."""
    E = f.space
    d = E.dim
    best = ZERO
    ball = [(tuple(mu) + (ZERO,), R) for mu in E.facets] if d else []
    for P, Q in ((f, g), (g, f)):
        cons = ball + [(tuple(a) + (-ONE,), -b) for a, b in Q.pieces]
        for a, b in P.pieces:
            res = lp_max(tuple(a) + (-ONE,), cons)
            best = max(best, res.value + b)
    return best


def polyhedral_net(E, R, eps, vmax=None, cap=200000):
    """Convex Katetov functions on a line base with node values on the eps-grid.

    Nodes are the eps-grid points of [-R, R] (in units of the unit vector);
    outside, each function continues with slopes of norm one.
    """
    R, eps = Fraction(R), Fraction(eps)
    if E.dim != 1:
        raise GridTooLarge("net enumeration is implemented for one-dimensional bases only")
    unit_len = E.vertices[-1][0]  # positive vertex of the ball
    h = eps * unit_len
    nn = int(2 * R / eps) + 1
    nodes = [(-R + i * eps) * unit_len for i in range(nn)]
    if vmax is None:
        vmax = 2 * R + 2
    levels = int(Fraction(vmax) / eps) + 1
    # slopes between nodes are in {-1, 0, 1} in the norm of E: steps of one eps
    out = []
    count = [0]

    def dfs(vals, last_step):
        count[0] += 1
        if count[0] > cap:
            raise GridTooLarge("more than %d partial net functions" % cap)
        if len(vals) == nn:
            out.append(tuple(vals))
            return
        for step in (-1, 0, 1):
            if last_step is not None and step < last_step:
                continue
            nv = vals[-1] + step
            if 0 <= nv < levels:
                dfs(vals + [nv], step)

    for v0 in range(levels):
        dfs([v0], None)
    net = []
    slope = ONE / unit_len
    for vals in out:
        ys = [v * eps for v in vals]
        pieces = [((-slope,), ys[0] + nodes[0] * slope), ((slope,), ys[-1] - nodes[-1] * slope)]
        for i in range(nn - 1):
            s = (ys[i + 1] - ys[i]) / h
            pieces.append(((s,), ys[i] - s * nodes[i]))
        f = make_kfn(E, pieces)
        if is_katetov(f)[0]:
            net.append(f)
    return net


def _float_values(f, grid):
    A = np.array([[float(x) for x in a] for a, _ in f.pieces])
    B = np.array([float(b) for _, b in f.pieces])
    return (grid @ A.T + B).max(axis=1)


def net_coverage(E, net, samples, R, eps, keep=5):
    R, eps = Fraction(R), Fraction(eps)
    unit_len = float(E.vertices[-1][0])
    grid = np.linspace(-float(R) * unit_len, float(R) * unit_len, 401).reshape(-1, 1)
    table = np.array([_float_values(g, grid) for g in net])
    dists = []
    for f in samples:
        fv = _float_values(f, grid)
        approx = np.abs(table - fv).max(axis=1)
        best = None
        for i in np.argsort(approx, kind="stable")[:keep]:
            d = sup_distance_on_ball(f, net[int(i)], R)
            if best is None or d < best:
                best = d
        dists.append(best)
    return NetReport(tuple(net), tuple(dists), all(d <= eps for d in dists))


# -- isolation probe ------------------------------------------------------

@dataclass(frozen=True)
class ProbeReport:
    counts: dict
    verdicts: tuple
    gaps: tuple

    @property
    def isolated_fraction(self):
        n = len(self.verdicts)
        return Fraction(self.counts["Isolated"], n) if n else ZERO


def isolated_density_probe(E, samples, level=1):
    verdicts, gaps = [], []
    counts = {"Isolated": 0, "NotIsolated": 0, "Inconclusive": 0}
    for xi in samples:
        if xi.base != E:
            raise DimensionMismatch("sample over a different base")
        v = is_isolated(xi, level)
        counts[v.status] += 1
        verdicts.append(v.status)
        if v.status == "NotIsolated":
            gaps.append(v.gap)
    return ProbeReport(counts, tuple(verdicts), tuple(gaps))
