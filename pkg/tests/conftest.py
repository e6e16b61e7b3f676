import random
from fractions import Fraction
from itertools import combinations

from hypothesis import settings, strategies as st

from gurarij.census import random_space
from gurarij.errors import ValidationError
from gurarij.kernel.linalg import dot, matvec, rank, scale, solve
from gurarij.space import from_vertices, norm, zero_space

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

small_q = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
seeds = st.integers(0, 2 ** 32 - 1)


def rng_of(seed):
    return random.Random(seed)


def brute_vertices(facets, rhs):
    """Vertices of {a.x <= b} by solving every square subsystem."""
    d = len(facets[0])
    out = set()
    for idx in combinations(range(len(facets)), d):
        A = [facets[i] for i in idx]
        try:
            x = solve(A, [rhs[i] for i in idx])
        except ValidationError:
            continue
        if all(dot(a, x) <= b for a, b in zip(facets, rhs)):
            out.add(tuple(x))
    return sorted(out)


def rand_q(rng, lo=-4, hi=4, den=3):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_invertible(rng, n):
    while True:
        m = tuple(tuple(Fraction(rng.randint(-2, 2)) for _ in range(n)) for _ in range(n))
        if rank(m, n) == n:
            return m


def random_extension(rng, E, extra):
    """A space F with an isometric embedding of E; returns (F, matrix of the embedding)."""
    n = E.dim + extra
    if n == 0:
        return zero_space(), ()
    pts = []
    while not pts or rank(pts, n) < n:
        pts = [tuple(v) + (Fraction(0),) * extra for v in E.vertices] if E.dim else []
        pts += _extra_points(rng, E, extra)
    T = random_invertible(rng, n)
    verts = [matvec(T, p) for p in pts]
    emb = tuple(tuple(T[i][k] for k in range(E.dim)) for i in range(n))
    return from_vertices(n, verts), emb


def _extra_points(rng, E, extra):
    pts = []
    for j in range(extra):
        for _ in range(rng.randint(1, 2)):
            u = tuple(rand_q(rng) for _ in range(E.dim))
            nu = norm(E, u) if E.dim else Fraction(0)
            if nu > 1:
                u = scale(1 / nu, u)
            w = [rand_q(rng, 0, 3) for _ in range(extra)]
            w[j] = Fraction(rng.randint(1, 3), rng.randint(1, 2))
            pts.append(u + tuple(w))
    return pts


def random_triple(rng, max_dim=3):
    dE = rng.randint(0, 2)
    E = random_space(rng, dE, extra=rng.randint(0, 2)) if dE else zero_space()
    F0, f0 = random_extension(rng, E, rng.randint(0, max_dim - dE))
    F1, f1 = random_extension(rng, E, rng.randint(0, max_dim - dE))
    return E, F0, F1, f0, f1


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
