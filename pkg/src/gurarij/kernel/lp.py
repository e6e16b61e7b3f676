"""Exact two-phase simplex over the rationals.

The solver works on a CLRS-style dictionary ``x_B = b - T x_N`` with
Bland's rule throughout, so it terminates on degenerate inputs.  Free
variables are pivoted into the basis up front and never leave it.
"""
from dataclasses import dataclass
from fractions import Fraction

from ..errors import InfeasibleInput, Unbounded
from .linalg import ZERO, dot, q, vec


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple
    active: tuple  # indices into the inequality list with zero slack
    duals: tuple  # y >= 0 for inequalities, free for equalities
    eq_duals: tuple = ()


class _Dictionary:
    def __init__(self, T, b, basic, nonbasic, c, v, free):
        self.T = T
        self.b = b
        self.B = basic
        self.N = nonbasic
        self.c = c
        self.v = v
        self.free = free  # var ids that are unconstrained in sign
        self.frozen = set()  # nonbasic var ids never allowed to enter

    def pivot(self, r, k):
        T, b, c = self.T, self.b, self.c
        row = T[r]
        p = row[k]
        inv = 1 / p
        newrow = [x * inv for x in row]
        newrow[k] = inv
        br = b[r] * inv
        T[r] = newrow
        b[r] = br
        nz = [j for j, x in enumerate(newrow) if x]
        for i in range(len(T)):
            if i == r:
                continue
            ti = T[i]
            a = ti[k]
            if not a:
                continue
            for j in nz:
                if j != k:
                    ti[j] -= a * newrow[j]
            ti[k] = -a * inv
            b[i] -= a * br
        ce = c[k]
        if ce:
            self.v += ce * br
            for j in nz:
                if j != k:
                    c[j] -= ce * newrow[j]
            c[k] = -ce * inv
        self.B[r], self.N[k] = self.N[k], self.B[r]

    def optimize(self):
        while True:
            k = None
            best = None
            for j, cj in enumerate(self.c):
                if cj > 0 and self.N[j] not in self.frozen:
                    if best is None or self.N[j] < best:
                        k, best = j, self.N[j]
            if k is None:
                return
            r = None
            ratio = None
            for i, row in enumerate(self.T):
                a = row[k]
                if a > 0 and self.B[i] not in self.free:
                    t = self.b[i] / a
                    if ratio is None or t < ratio or (t == ratio and self.B[i] < self.B[r]):
                        r, ratio = i, t
            if r is None:
                raise Unbounded("objective unbounded", column=self.N[k])
            self.pivot(r, k)


def lp_solve(objective, constraints=(), equalities=(), maximize=True):
    """Optimize ``objective . x`` subject to ``a . x <= b`` for each ``(a, b)``.

    ``equalities`` holds ``(a, b)`` pairs with ``a . x == b``.  All variables
    are free.  Returns an :class:`LPResult` whose dual vector certifies the
    optimum exactly; raises :class:`Unbounded` or :class:`InfeasibleInput`.
    """
    c0 = vec(objective)
    if not maximize:
        c0 = tuple(-x for x in c0)
    n = len(c0)
    rows = [(vec(a), q(b)) for a, b in constraints]
    n_ineq = len(rows)
    for a, b in equalities:
        a, b = vec(a), q(b)
        rows.append((a, b))
        rows.append((tuple(-x for x in a), -b))
    m = len(rows)
    # var ids: x_j -> j, slack of row i -> n + i, artificial -> n + m
    T = [list(a) for a, _ in rows]
    b = [bb for _, bb in rows]
    D = _Dictionary(T, b, [n + i for i in range(m)], list(range(n)), list(c0), ZERO, set(range(n)))

    for j in range(n):
        k = D.N.index(j)
        r = next((i for i in range(m) if D.B[i] not in D.free and D.T[i][k]), None)
        if r is None:
            if D.c[k]:
                raise Unbounded("free variable with no constraint", column=j)
            D.frozen.add(j)
            continue
        D.pivot(r, k)

    if any(D.b[i] < 0 for i in range(m) if D.B[i] not in D.free):
        _phase_one(D, n + m)

    D.optimize()

    x = [ZERO] * n
    slack = [ZERO] * m
    for i, var in enumerate(D.B):
        if var < n:
            x[var] = D.b[i]
        else:
            slack[var - n] = D.b[i]
    y = [ZERO] * m
    for k, var in enumerate(D.N):
        if var >= n:
            y[var - n] = -D.c[k]
    value = D.v if maximize else -D.v
    x = tuple(x)
    # certificate check: A^T y = c and b . y = optimum
    assert dot(c0, x) == D.v
    duals = tuple(y[:n_ineq])
    eq_duals = tuple(y[n_ineq + 2 * t] - y[n_ineq + 2 * t + 1] for t in range(len(equalities)))
    if not maximize:
        eq_duals = tuple(-e for e in eq_duals)
    active = tuple(i for i in range(n_ineq) if slack[i] == 0)
    return LPResult(value, x, active, duals, eq_duals)


def _phase_one(D, art):
    saved_c = {var: cj for var, cj in zip(D.N, D.c) if cj}
    saved_v = D.v
    for i, row in enumerate(D.T):
        row.append(ZERO if D.B[i] in D.free else Fraction(-1))
    D.N.append(art)
    D.c = [ZERO] * (len(D.N) - 1) + [Fraction(-1)]
    D.v = ZERO
    k = len(D.N) - 1
    r = min((i for i in range(len(D.B)) if D.B[i] not in D.free), key=lambda i: D.b[i])
    D.pivot(r, k)
    D.optimize()
    if D.v < 0:
        raise InfeasibleInput("empty feasible region")
    if art in D.B:
        r = D.B.index(art)
        k = next(j for j, a in enumerate(D.T[r]) if a and D.N[j] not in D.frozen)
        D.pivot(r, k)
    k = D.N.index(art)
    for row in D.T:
        del row[k]
    del D.N[k]
    # re-express the saved objective over the current nonbasic variables
    c = [saved_c.get(var, ZERO) for var in D.N]
    v = saved_v
    for i, var in enumerate(D.B):
        coef = saved_c.get(var)
        if coef:
            v += coef * D.b[i]
            row = D.T[i]
            for j in range(len(c)):
                if row[j]:
                    c[j] -= coef * row[j]
    D.c = c
    D.v = v


def lp_max(objective, constraints=(), equalities=()):
    return lp_solve(objective, constraints, equalities, maximize=True)


def lp_min(objective, constraints=(), equalities=()):
    return lp_solve(objective, constraints, equalities, maximize=False)


def feasible(constraints=(), equalities=(), nvars=None):
    """True iff the system has a solution."""
    if nvars is None:
        nvars = len((list(constraints) + list(equalities))[0][0])
    try:
        lp_solve((0,) * nvars, constraints, equalities)
    except InfeasibleInput:
        return False
    return True
