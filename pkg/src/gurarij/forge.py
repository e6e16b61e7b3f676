"""Building epsilon-Gurarij approximants by iterated realisation of types.

Each stage is a pushout of the current top space with a generated space,
laid out so the link from one stage to the next is zero-padding ``[I; 0]``.
"""
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .amalgam import amalgamate
from .errors import AvoidanceViolation, DimensionTooLarge, ValidationError
from .kernel.linalg import ONE, ZERO, inverse, matmul, matvec, neg, rank, transpose, unit, vec, zeros
from .kernel.polytope import MAX_DIM, PolyBall
from .space import ISOMETRIC, LinMap, Space, check_isometry, from_vertices, l1, linf, norm, require_isometric, subspace
from .typespace import (
    density_defect_detail, generated_space, tp, type_distance, types_equal,
)


@dataclass(frozen=True)
class LedgerEntry:
    stage: int  # index of the space the witnesses live in
    basis: tuple  # vectors of that space spanning the parameter subspace
    xi: object  # TypePres over the parameter subspace
    witness: tuple  # vectors realising xi
    tag: object = None


@dataclass(frozen=True)
class Problem:
    E: Space
    F: Space
    incl: LinMap
    name: str = ""


@dataclass
class ChainState:
    spaces: list
    links: list = field(default_factory=list)
    ledger: list = field(default_factory=list)
    defect_history: list = field(default_factory=list)
    avoid_list: list = field(default_factory=list)
    dim_cap: int = MAX_DIM
    log: list = field(default_factory=list)
    best_points: dict = field(default_factory=dict)

    @property
    def top(self):
        return self.spaces[-1]

    @property
    def k(self):
        return len(self.spaces) - 1

    def copy(self):
        return ChainState(list(self.spaces), list(self.links), list(self.ledger), list(self.defect_history),
                          list(self.avoid_list), self.dim_cap, list(self.log), dict(self.best_points))


def start(E0, avoid=(), dim_cap=MAX_DIM):
    return ChainState([E0], avoid_list=list(avoid), dim_cap=dim_cap)


def pad(v, n):
    v = vec(v)
    return v + zeros(n - len(v))


def to_top(cs, stage, v):
    return pad(v, cs.top.dim)


def base_inclusion(cs):
    """Isometric embedding of E_0 into the top space."""
    E0 = cs.spaces[0]
    rows = tuple(tuple(ONE if (i == j) else ZERO for j in range(E0.dim)) for i in range(cs.top.dim))
    return LinMap(E0, cs.top, rows, ISOMETRIC)


def _avoid_check(cs, G, witnesses):
    """Types over E_0 of the new witnesses must stay outside every forbidden ball."""
    if not cs.avoid_list:
        return
    E0 = cs.spaces[0]
    incl = LinMap(E0, G, tuple(tuple(ONE if i == j else ZERO for j in range(E0.dim)) for i in range(G.dim)))
    for w in witnesses:
        t = tp(G, incl, [w])
        for zeta, r in cs.avoid_list:
            if zeta.nvars != 1 or zeta.base != E0:
                continue
            d = type_distance(zeta, t)
            if d.lo <= r:
                raise AvoidanceViolation("realisation enters a forbidden ball", radius=r, distance=d.lo)


def _existing_realisation(cs, sub_map, xi, pool):
    """A tuple of pool vectors already realising xi over sub_map, if any (1-types only)."""
    if xi.nvars != 1:
        return None
    for c in pool:
        if types_equal(tp(cs.top, sub_map, [c]), xi):
            return (c,)
    return None


def step(cs, sub_map, xi, tag=None, reuse=True):
    """Realise ``xi`` (a type over ``sub_map.source``) in a new top space."""
    sub_map = require_isometric(sub_map, "parameter embedding")
    if sub_map.target.dim != cs.top.dim:
        raise ValidationError("parameter embedding must land in the top space")
    F = sub_map.source
    basis = sub_map.columns
    if reuse:
        found = _existing_realisation(cs, sub_map, xi, vector_pool(cs, sums=False))
        if found is not None:
            _avoid_check(cs, cs.top, found)
            out = cs.copy()
            out.ledger.append(LedgerEntry(out.k, basis, xi, found, tag))
            out.log.append(("reuse", tag))
            return out
    gen = generated_space(xi)
    new_dim = cs.top.dim + gen.space.dim - F.dim
    if new_dim > cs.dim_cap:
        raise DimensionTooLarge("step would reach dim %d > cap %d" % (new_dim, cs.dim_cap))
    am = amalgamate(F, cs.top, gen.space, sub_map, gen.incl)
    G = am.result
    witnesses = tuple(am.g1(x) for x in gen.images)
    _avoid_check(cs, G, witnesses)
    # g0 is zero-padding by construction of the amalgam coordinates
    assert am.g0.matrix == tuple(tuple(ONE if i == j else ZERO for j in range(cs.top.dim)) for i in range(G.dim))
    out = cs.copy()
    out.spaces.append(G)
    out.links.append(am.g0)
    new_basis = tuple(am.g0(b) for b in basis)
    out.ledger.append(LedgerEntry(out.k, new_basis, xi, witnesses, tag))
    out.log.append(("step", tag, G.dim))
    return out


def vector_pool(cs, sums=True):
    """Candidate vectors of the top space: basis vectors, ledger witnesses, and pairwise sums."""
    n = cs.top.dim
    base = []
    for i in range(n):
        base.append(unit(n, i))
    for e in cs.ledger:
        for w in e.witness:
            base.append(pad(w, n))
    seen = list(dict.fromkeys(base))
    out = list(seen)
    if sums:
        for a, b in itertools.combinations(seen, 2):
            out.append(tuple(x + y for x, y in zip(a, b)))
            out.append(tuple(x - y for x, y in zip(a, b)))
    out = [v for v in dict.fromkeys(out) if any(v)]
    return out + [neg(v) for v in out]


# -- density ---------------------------------------------------------------

def defect_report(cs, samples, net_step, support=2):
    """Current density defect of the top space for 1-types over E_0."""
    if not samples:
        out = cs.copy()
        out.defect_history.append(ZERO)
        return out, ZERO
    incl = base_inclusion(cs)
    extra = [pad(w, cs.top.dim) for e in cs.ledger for w in e.witness]
    extra += [pad(p, cs.top.dim) for p in cs.best_points.values()]
    det = density_defect_detail(cs.top, incl, samples, net_step, support, extra)
    out = cs.copy()
    out.defect_history.append(det.value)
    for i, (d, c) in enumerate(det.per_sample):
        out.best_points[i] = c
    return out, det.value


def _sample_task(cs, xi):
    return base_inclusion(cs), xi


def _problem_task(cs, prob):
    """Type of a complement basis of F over an embedding of E into the top space."""
    phi = find_embedding(cs, prob.E)
    if phi is None:
        return None
    comp = complement_basis(prob.incl)
    xi = tp(prob.F, prob.incl, comp)
    return phi, xi


def complement_basis(incl):
    n = incl.target.dim
    cols = list(incl.columns)
    out = []
    for i in range(n):
        e = unit(n, i)
        if rank(cols + out + [e], n) > len(cols) + len(out):
            out.append(e)
    return out


def schedule(cs, budget, samples=(), net_step=Fraction(1, 4), catalog=(), support=2):
    """Greedy realisation: worst sample first, then unresolved catalog problems."""
    if budget <= 0:
        return cs
    if not cs.defect_history:
        cs, _ = defect_report(cs, samples, net_step, support)
    blocked = set()
    for _ in range(budget):
        cur = cs.defect_history[-1]
        tasks = []
        if samples and cur > net_step:
            dists = [d for d, _ in density_defect_detail(
                cs.top, base_inclusion(cs), samples, net_step, support,
                [pad(p, cs.top.dim) for p in cs.best_points.values()]).per_sample]
            # realising sample j leaves sample i at most min(current, d(i, j)) away
            scored = []
            for j, xj in enumerate(samples):
                if ("sample", j) in blocked or dists[j] == 0:
                    continue
                after = max(min(dists[i], type_distance(samples[i], xj).hi) for i in range(len(samples)))
                scored.append((after, j))
            for after, j in sorted(scored):
                tasks.append((("sample", j), _sample_task(cs, samples[j])))
        for i, prob in enumerate(catalog):
            if ("problem", i) in blocked:
                continue
            if certify_problem(cs, prob, Fraction(0)).certified:
                continue
            t = _problem_task(cs, prob)
            if t is not None:
                tasks.append((("problem", i), t))
        if not tasks:
            cs.log.append(("idle",))
            break
        done = False
        for tag, (sub_map, xi) in tasks:
            try:
                nxt = step(cs, sub_map, xi, tag)
            except (AvoidanceViolation, DimensionTooLarge) as exc:
                blocked.add(tag)
                cs.log.append(("skip", tag, type(exc).__name__))
                continue
            cs, _ = defect_report(nxt, samples, net_step, support)
            done = True
            break
        if not done:
            cs.log.append(("exhausted",))
            break
    return cs


# -- certification -----------------------------------------------------------

@dataclass(frozen=True)
class CertResult:
    name: str
    certified: bool
    distortion: Fraction  # smallest eps found, None if nothing injective
    psi: tuple = None


def distortion(F, G, psi):
    """Smallest eps with ``(1-eps)‖x‖ <= ‖psi x‖ <= (1+eps)‖x‖``; None if psi is singular."""
    if F.dim == 0:
        return ZERO
    if rank(psi, F.dim) < F.dim:
        return None
    up = max(norm(G, matvec(psi, w)) for w in F.vertices)
    from .space import pullback_facets
    m = LinMap(F, G, psi)
    pre = PolyBall.from_facets(F.dim, pullback_facets(m))
    worst = max(norm(F, p) for p in pre.vertices)
    low = 1 / worst
    return max(up - 1, 1 - low)


def find_embedding(cs, E, pool=None):
    """An exact isometric embedding of E into the top space built from pool vectors."""
    emb = search_embeddings(cs, E, pool, limit=1)
    return emb[0] if emb else None


def search_embeddings(cs, F, pool=None, limit=1, tol=1e-9):
    """Backtracking search for isometric ``F -> top`` with basis images from the pool.

    Floats prune (norms of basis images and of pairwise sums and differences);
    every complete candidate is checked exactly.
    """
    G = cs.top
    if F.dim == 0:
        return [LinMap(F, G, tuple(() for _ in range(G.dim)), ISOMETRIC)]
    if pool is None:
        pool = vector_pool(cs)
    Ff = np.array([[float(x) for x in f] for f in G.facets])
    P = np.array([[float(x) for x in v] for v in pool])
    pnorm = (P @ Ff.T).max(axis=1)
    n = F.dim
    targets = [float(norm(F, unit(n, i))) for i in range(n)]
    pair_t = {}
    for i, j in itertools.combinations(range(n), 2):
        s = tuple(ONE if t in (i, j) else ZERO for t in range(n))
        d = tuple(ONE if t == i else (-ONE if t == j else ZERO) for t in range(n))
        pair_t[i, j] = (float(norm(F, s)), float(norm(F, d)))
    cands = [np.nonzero(np.abs(pnorm - t) < tol)[0] for t in targets]
    found = []

    def ok_pair(a, b, i, j):
        s = ((P[a] + P[b]) @ Ff.T).max()
        d = ((P[a] - P[b]) @ Ff.T).max()
        ts, td = pair_t[i, j]
        return abs(s - ts) < tol and abs(d - td) < tol

    def rec(chosen):
        if len(found) >= limit:
            return
        i = len(chosen)
        if i == n:
            cols = [pool[c] for c in chosen]
            rows = tuple(tuple(col[r] for col in cols) for r in range(G.dim))
            m = check_isometry(LinMap(F, G, rows))
            if m.status == ISOMETRIC:
                found.append(m)
            return
        for c in cands[i]:
            c = int(c)
            if all(ok_pair(chosen[j], c, j, i) for j in range(i)):
                rec(chosen + [c])

    rec([])
    return found


def certify_problem(cs, prob, eps=ZERO, pool=None):
    """Exact isometric copy of F in the top space (distortion 0)."""
    for m in search_embeddings(cs, prob.F, pool, limit=1):
        return CertResult(prob.name, True, ZERO, m.matrix)
    return CertResult(prob.name, False, None, None)


def certify_eps_gurarij(cs, catalog, eps, pool=None, phis=None):
    """Per problem: CERTIFIED when some psi extending an isometric phi has distortion <= eps.

    ``phis`` maps problem names to a fixed ``phi: E -> top`` matrix; other
    problems search over phi as well.
    """
    eps = Fraction(eps)
    phis = phis or {}
    out = []
    for prob in catalog:
        if prob.name in phis:
            res = extend_phi(cs, prob, phis[prob.name], eps, pool)
        else:
            res = certify_problem(cs, prob, eps, pool)
            if not res.certified:
                res = _approx_certify(cs, prob, eps, pool)
        out.append(res)
    return out


def extend_phi(cs, prob, phi, eps=ZERO, pool=None, width=48, keep=8):
    """Best psi on F with ``psi . incl = phi``; complement directions go to pool vectors."""
    G, F, E = cs.top, prob.F, prob.E
    phi = require_isometric(LinMap(E, G, phi), "phi")
    if pool is None:
        pool = vector_pool(cs)
    short = pool[:width]
    comp = complement_basis(prob.incl)
    B = transpose(list(prob.incl.columns) + comp, F.dim)
    Binv = inverse(B) if F.dim else ()
    fixed = list(phi.columns)

    def psi_of(combo):
        cols = fixed + [short[c] for c in combo]
        return matmul(transpose(cols, G.dim), Binv) if F.dim else tuple(() for _ in range(G.dim))

    if not comp:
        psi = psi_of(())
        d = distortion(F, G, psi)
        return CertResult(prob.name, d is not None and d <= eps, d, psi)
    Gfac = np.array([[float(x) for x in f] for f in G.facets])
    Ffac = np.array([[float(x) for x in f] for f in F.facets])
    rng = np.random.default_rng(0)
    Fv = np.vstack([np.array([[float(x) for x in v] for v in F.vertices]), rng.normal(size=(64, F.dim))])
    Bi = np.array([[float(x) for x in r] for r in Binv])
    scored = []
    for combo in itertools.product(range(len(short)), repeat=len(comp)):
        cols = [[float(x) for x in c] for c in fixed + [short[i] for i in combo]]
        psi = np.array(cols).T @ Bi
        if np.linalg.matrix_rank(psi) < F.dim:
            continue
        scored.append((_float_distortion(Fv, Ffac, Gfac, psi), combo))
    scored.sort()
    best, best_psi = None, None
    for _, combo in scored[:keep]:
        psi = psi_of(combo)
        d = distortion(F, G, psi)
        if d is not None and (best is None or d < best):
            best, best_psi = d, psi
    return CertResult(prob.name, best is not None and best <= eps, best, best_psi)


def _float_distortion(Fv, Ffac, Gfac, psi):
    """Float estimate of the distortion on a fixed sample of directions."""
    imgs = Fv @ psi.T
    up = (imgs @ Gfac.T).max(axis=1)
    base = (Fv @ Ffac.T).max(axis=1)
    r = up / base
    return max(r.max() - 1, 1 - r.min())


def _approx_certify(cs, prob, eps, pool=None, width=24, keep=6):
    """Distorted psi from pool images of the basis; floats rank, exact arithmetic decides."""
    G, F = cs.top, prob.F
    if pool is None:
        pool = vector_pool(cs)
    short = pool[:width]
    n = F.dim
    if n == 0:
        return CertResult(prob.name, True, ZERO, ())
    Gfac = np.array([[float(x) for x in f] for f in G.facets])
    Ffac = np.array([[float(x) for x in f] for f in F.facets])
    dirs = [tuple(float(x) for x in v) for v in F.vertices]
    rng = np.random.default_rng(0)
    Fv = np.vstack([np.array(dirs), rng.normal(size=(64, n))])
    scored = []
    for combo in itertools.product(range(len(short)), repeat=n):
        psi = np.array([[float(short[c][r]) for c in combo] for r in range(G.dim)])
        if np.linalg.matrix_rank(psi) < n:
            continue
        scored.append((_float_distortion(Fv, Ffac, Gfac, psi), combo))
    scored.sort()
    best, best_psi = None, None
    for _, combo in scored[:keep]:
        psi = tuple(tuple(short[c][r] for c in combo) for r in range(G.dim))
        phi = LinMap(prob.E, G, _compose(psi, prob.incl.matrix, prob.E.dim))
        if check_isometry(phi).status != ISOMETRIC:
            continue
        d = distortion(F, G, psi)
        if d is not None and (best is None or d < best):
            best, best_psi = d, psi
    return CertResult(prob.name, best is not None and best <= eps, best, best_psi)


def _compose(a, b, ncols):
    if not b:
        return tuple((ZERO,) * ncols for _ in a)
    return matmul(a, b)


def hexagon():
    return from_vertices(2, [(1, 0), (0, 1), (1, 1)], "hexagon")


def skew_polygon():
    return from_vertices(2, [(1, 0), (0, 1), (1, 1), (Fraction(2, 3), Fraction(-2, 3))], "skew")


def default_catalog():
    """Ten extension problems with dim F <= 3."""
    probs = []

    def add(F, basis, name):
        E, incl = subspace(F, basis, name + ".E")
        probs.append(Problem(E, F, incl, name))

    L2, M2, H, S, L3 = linf(2), l1(2), hexagon(), skew_polygon(), linf(3)
    add(L2, [], "0<linf2")
    add(L2, [(1, 0)], "e1<linf2")
    add(L2, [(1, 1)], "diag<linf2")
    add(M2, [(1, 0)], "e1<l1_2")
    add(M2, [(1, 1)], "diag<l1_2")
    add(H, [(1, 0)], "e1<hexagon")
    add(H, [(1, 1)], "diag<hexagon")
    add(L3, [(1, 0, 0), (0, 1, 0)], "linf2<linf3")
    add(L3, [(1, 0, 0)], "e1<linf3")
    add(S, [(1, 0)], "e1<skew")
    return probs
