from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings

from conftest import rand_q, rng_of, seeds
from gurarij.census import random_katetov, random_space
from gurarij.errors import NotKatetov, ValidationError
from gurarij.fenchel import (biconjugate, boundary_max_test, checked, conj_value, conjugate,
                             from_katetov, is_isolated, is_katetov, katetov_extend, locality_gap,
                             make_kfn, primal_katetov, smooth_isolation_crosscheck, sup_distance,
                             sup_distance_primal, to_katetov)
from gurarij.forge import hexagon
from gurarij.kernel.linalg import dot, solve, sub
from gurarij.space import l1, linf, norm
from gurarij.typespace import tp, types_equal

F = Fraction
L1 = linf(1)
SUM = make_kfn(L1, [((1,), 1), ((-1,), 1)])
MAX = make_kfn(L1, [((1,), 0), ((-1,), 0), ((0,), 1)])


def norm_fn(E, c=1):
    return make_kfn(E, [(tuple(c * x for x in w), 0) for w in E.facets])


def value(f, v):
    return max(dot(a, v) + b for a, b in f.pieces)


def breakpoints(f):
    """Points where ``dim + 1`` pieces agree."""
    d = f.space.dim
    out = []
    for idx in combinations(f.pieces, d + 1):
        (a0, b0), rest = idx[0], idx[1:]
        A = [sub(a0, a) for a, _ in rest]
        rhs = [b - b0 for _, b in rest]
        try:
            out.append(solve(A, rhs))
        except ValidationError:
            pass
    return out


def test_conjugate_examples():
    assert conj_value(norm_fn(L1), (F(1, 3),)) == 0
    assert conj_value(SUM, (F(1, 2),)) == -1
    for lam in (-1, F(-1, 2), 0, F(2, 3), 1):
        assert conj_value(MAX, (lam,)) == abs(lam) - 1
    assert conj_value(MAX, (2,)) is None


@settings(max_examples=25)
@given(seeds)
def test_conjugate_matches_breakpoints(seed):
    rng = rng_of(seed)
    E = random_space(rng, rng.randint(1, 2))
    f = random_katetov(E, rng)
    pts = breakpoints(f)
    for w in E.dual_vertices():
        t = F(rng.randint(0, 4), 4)
        lam = tuple(x * t for x in w)
        assert conj_value(f, lam) == max(dot(lam, v) - value(f, v) for v in pts)


@settings(max_examples=25)
@given(seeds)
def test_biconjugation(seed):
    rng = rng_of(seed)
    E = random_space(rng, rng.randint(1, 2))
    f = random_katetov(E, rng)
    assert biconjugate(conjugate(f), E) == f


@settings(max_examples=25)
@given(seeds)
def test_conjugation_is_an_isometry(seed):
    rng = rng_of(seed)
    E = random_space(rng, rng.randint(1, 2))
    f, g = random_katetov(E, rng), random_katetov(E, rng)
    d, v = sup_distance(f, g, with_point=True)
    assert d == sup_distance_primal(f, g)
    if v is not None:
        assert abs(value(f, v) - value(g, v)) == d


def test_katetov_examples():
    for E in (L1, linf(2), hexagon()):
        assert is_katetov(norm_fn(E))[0]
        ok, cert = is_katetov(norm_fn(E, F(1, 2)))
        assert not ok and cert["reason"] == "antipode"
        ok, cert = is_katetov(norm_fn(E, 2))
        assert not ok and cert["reason"] == "slope"
    with pytest.raises(NotKatetov):
        checked(norm_fn(L1, 2))


def random_pl(rng, E):
    kind = rng.randrange(4)
    f = random_katetov(E, rng)
    if kind == 0:
        return f
    if kind == 1:  # antipode failures
        return make_kfn(E, [(a, b - rand_q(rng, 0, 4)) for a, b in f.pieces])
    if kind == 2:  # steep slopes
        return make_kfn(E, [(tuple(x * rand_q(rng, 1, 3) for x in a), b) for a, b in f.pieces])
    pieces = [(tuple(rand_q(rng, -2, 2) for _ in range(E.dim)), rand_q(rng, -1, 4)) for _ in range(4)]
    return make_kfn(E, pieces)


@given(seeds)
def test_dual_criterion_matches_primal(seed):
    rng = rng_of(seed)
    E = random_space(rng, rng.randint(1, 2))
    f = random_pl(rng, E)
    assert is_katetov(f)[0] == primal_katetov(f)


def test_extension_examples():
    E2 = linf(2)
    ext = katetov_extend(make_kfn(E2, [((0, 0), 3)]), [(0, 0)])
    for v in [(1, 2), (-3, 0), (0, 0)]:
        assert value(ext, v) == 3 + norm(E2, v)
    ext = katetov_extend(make_kfn(L1, [((0,), 1)]), [(-1,), (1,)])
    assert ext == MAX
    u = (F(1, 2), -1)
    dist_u = make_kfn(E2, [(w, -dot(w, u)) for w in E2.facets])
    assert katetov_extend(dist_u, [(2, 2), (2, -2), (-2, 2), (-2, -2)]) == dist_u


def test_locality_gap():
    assert locality_gap(MAX, [(0,)]) == 1
    assert locality_gap(MAX, [(-2,), (2,)]) == 0


@settings(max_examples=20)
@given(seeds)
def test_extension_agrees_on_region(seed):
    rng = rng_of(seed)
    E = random_space(rng, 2)
    f = random_katetov(E, rng)
    box = [(F(x), F(y)) for x in (-1, 1) for y in (-1, 1)]
    ext = katetov_extend(f, box)
    assert is_katetov(ext)[0]
    for _ in range(5):
        p = (rand_q(rng, -3, 3, 3) / 3, rand_q(rng, -3, 3, 3) / 3)
        assert value(ext, p) == value(f, p)
    # extension of a restriction dominates the function
    for _ in range(5):
        p = (rand_q(rng, -9, 9), rand_q(rng, -9, 9))
        assert value(ext, p) >= value(f, p)


def test_boundary_max_examples():
    rep = boundary_max_test(SUM)
    assert rep.verdict == "Violated" and rep.gap == 2
    g = rep.witness_g
    assert is_katetov(g)[0]
    assert all(value(g, (F(x, 2),)) <= value(SUM, (F(x, 2),)) for x in range(-8, 9))
    rep = boundary_max_test(MAX)
    assert rep.verdict == "NoViolationFound" and rep.gap == 0


def test_isolation_of_realized_types():
    E2 = linf(2)
    incl = __import__("gurarij.space", fromlist=["LinMap"]).LinMap(L1, E2, ((1,), (0,)))
    xi = tp(E2, incl, [(0, 1)])
    assert types_equal(xi, from_katetov(MAX))
    assert is_isolated(xi).status == "Isolated"
    assert is_isolated(from_katetov(SUM)).status == "NotIsolated"
    assert to_katetov(from_katetov(SUM)) == SUM


def test_l1_gap_is_two():
    cc = smooth_isolation_crosscheck(l1(2), (1, 0), (0, 1))
    assert not cc.smooth and cc.verdict.status == "NotIsolated" and cc.verdict.gap == 2 and cc.agree


def test_crosscheck_on_standard_spaces():
    for E in (linf(2), l1(2), hexagon()):
        for v, u in [((1, 0), (0, 1)), ((1, 1), (1, -1)), ((2, 1), (0, 1))]:
            assert smooth_isolation_crosscheck(E, v, u).agree
