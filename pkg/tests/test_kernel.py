from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import brute_vertices, rng_of, seeds, small_q
from gurarij.errors import DegenerateBall, InfeasibleInput, Unbounded, UnboundedBall, ValidationError
from gurarij.kernel import linalg as la
from gurarij.kernel.lp import feasible, lp_max, lp_min
from gurarij.kernel.polytope import PolyBall, facets_of, polar, vertices_of

F = Fraction


def test_q_rejects_floats():
    with pytest.raises((ValidationError, TypeError)):
        la.q(0.5)
    assert la.q("3/4") == F(3, 4)


@given(st.lists(st.lists(small_q, min_size=3, max_size=3), min_size=1, max_size=4))
def test_nullspace_is_annihilated(rows):
    ns = la.nullspace(rows, 3)
    assert len(ns) + la.rank(rows, 3) == 3
    for v in ns:
        assert all(la.dot(r, v) == 0 for r in rows)


@given(st.lists(st.lists(small_q, min_size=2, max_size=2), min_size=2, max_size=2))
def test_inverse(rows):
    if la.rank(rows, 2) < 2:
        return
    inv = la.inverse(rows)
    assert la.matmul(rows, inv) == la.identity(2)


def test_lp_examples():
    box = [((1, 0), 1), ((0, 1), 1), ((-1, 0), 0), ((0, -1), 0)]
    res = lp_max((1, 1), box)
    assert res.value == 2 and res.x == (1, 1)
    assert lp_min((1, 0), box).value == 0
    with pytest.raises(Unbounded):
        lp_max((1, 0), [((-1, 0), 0)])
    with pytest.raises(InfeasibleInput):
        lp_max((1,), [((1,), 0), ((-1,), -1)])
    assert lp_max((1,), [((1,), 1)], equalities=[((1,), 1)]).value == 1
    assert feasible([((1,), 1)]) and not feasible([((1,), 0), ((-1,), -1)])


def _random_polytope(rng, d, m):
    rows = [tuple(F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(d)) for _ in range(m)]
    rows += [la.unit(d, i) for i in range(d)] + [la.neg(la.unit(d, i)) for i in range(d)]
    rhs = [F(rng.randint(1, 5)) for _ in rows]
    return rows, rhs


@given(seeds, st.integers(1, 3))
def test_lp_matches_vertex_brute_force(seed, d):
    rng = rng_of(seed)
    rows, rhs = _random_polytope(rng, d, 3)
    c = tuple(F(rng.randint(-5, 5)) for _ in range(d))
    res = lp_max(c, list(zip(rows, rhs)))
    best = max(la.dot(c, v) for v in brute_vertices(rows, rhs))
    assert res.value == best
    # strong duality certificate
    assert sum(y * b for y, b in zip(res.duals, rhs)) == res.value
    assert all(y >= 0 for y in res.duals)


@given(seeds, st.integers(1, 3))
def test_vertices_match_brute_force(seed, d):
    rows, rhs = _random_polytope(rng_of(seed), d, 3)
    assert vertices_of(rows, rhs) == brute_vertices(rows, rhs)


@given(seeds, st.integers(2, 3))
def test_facets_then_vertices_round_trip(seed, d):
    rows, rhs = _random_polytope(rng_of(seed), d, 4)
    verts = vertices_of(rows, rhs)
    fac = facets_of(verts)
    assert vertices_of([a for a, _ in fac], [b for _, b in fac]) == verts


def test_unbounded_and_degenerate():
    with pytest.raises(UnboundedBall):
        vertices_of([(1, 0), (-1, 0)])
    with pytest.raises(DegenerateBall):
        facets_of([(0, 0), (1, 1), (2, 2)])


def test_polar_of_cross_polytope_is_cube():
    cross = PolyBall.from_vertices(2, [(1, 0), (0, 1)])
    cube = polar(cross)
    assert sorted(cube.vertices) == sorted([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    assert polar(cube) == cross


def test_redundant_facet_dropped():
    b = PolyBall.from_facets(2, [(1, 0), (0, 1), (F(1, 2), F(1, 2))])
    assert len(b.facets) == 4


@given(seeds)
def test_gauge_is_a_norm(seed):
    rng = rng_of(seed)
    from gurarij.census import random_space
    s = random_space(rng, 2)
    u = (F(rng.randint(-5, 5)), F(rng.randint(-5, 5)))
    v = (F(rng.randint(-5, 5)), F(rng.randint(-5, 5)))
    g = s.ball.gauge
    assert g(la.add(u, v)) <= g(u) + g(v)
    assert g(la.scale(F(-3), u)) == 3 * g(u)
    assert (g(u) == 0) == la.is_zero(u)


def test_quotient_map_keeps_leading_coordinates():
    P, _ = la.quotient_map([(1, 0, -1)], 3, keep=2)
    assert [row[:2] for row in P] == [(1, 0), (0, 1)]
    assert la.matvec(P, (1, 0, -1)) == (0, 0)


@given(seeds)
def test_lp_matches_sympy(seed):
    sympy_simplex = pytest.importorskip("sympy.solvers.simplex")
    from sympy import Matrix, Rational
    rng = rng_of(seed)
    rows, rhs = _random_polytope(rng, 3, 6)
    c = tuple(F(rng.randint(-5, 5)) for _ in range(3))
    r = lambda x: Rational(x.numerator, x.denominator)
    # sympy wants x >= 0, so split each free variable as p - q
    A = Matrix([[r(x) for x in row] + [-r(x) for x in row] for row in rows])
    val, _ = sympy_simplex.linprog(Matrix([-r(x) for x in c] + [r(x) for x in c]), A, Matrix([r(b) for b in rhs]))
    assert lp_max(c, list(zip(rows, rhs))).value == F(str(-val))
