from fractions import Fraction

import pytest
from hypothesis import given

from conftest import rand_q, random_triple, rng_of, seeds
from gurarij.amalgam import MIN_EPS, amalgamate, approx_join, condition_check
from gurarij.census import random_space
from gurarij.errors import ConditionViolated, NotIsometric, SmallToleranceCapped
from gurarij.kernel.linalg import matmul, sub
from gurarij.space import ISOMETRIC, LinMap, check_isometry, isometric_spaces, l1, linf, norm, zero_space

F = Fraction


def test_amalgam_over_zero_is_l1():
    Z, L = zero_space(), linf(1)
    out = amalgamate(Z, L, L, LinMap(Z, L, ((),)), LinMap(Z, L, ((),)))
    assert out.result.dim == 2
    assert isometric_spaces(out.result, l1(2))


def test_identity_amalgam():
    E = linf(2)
    I = LinMap(E, E, ((1, 0), (0, 1)))
    out = amalgamate(E, E, E, I, I)
    assert out.result.dim == 2 and out.kernel_dim == 2
    assert isometric_spaces(out.result, E)


def test_two_copies_of_e2_at_distance_two():
    E, G = linf(1), linf(2)
    f = LinMap(E, G, ((1,), (0,)))
    out = amalgamate(E, G, G, f, f)
    assert out.result.dim == 3
    assert norm(out.result, sub(out.g0((0, 1)), out.g1((0, 1)))) == 2


@given(seeds)
def test_amalgam_soundness(seed):
    E, F0, F1, f0, f1 = random_triple(rng_of(seed))
    out = amalgamate(E, F0, F1, LinMap(E, F0, f0), LinMap(E, F1, f1))
    assert check_isometry(out.g0).status == ISOMETRIC
    assert check_isometry(out.g1).status == ISOMETRIC
    if E.dim:
        assert matmul(out.g0.matrix, f0) == matmul(out.g1.matrix, f1)
    assert out.result.dim == F0.dim + F1.dim - E.dim


def test_join_examples():
    L = linf(1)
    out = approx_join(L, L, [], [], [])
    assert out.result.dim == 2
    out = approx_join(L, L, [(1,)], [(1,)], [0])
    assert out.result.dim == 1
    assert out.g0((1,)) == out.g1((1,))
    out = approx_join(L, L, [(1,)], [(1,)], [F(1, 2)])
    assert norm(out.result, sub(out.g0((1,)), out.g1((1,)))) == F(1, 2)


def test_condition_examples():
    L = linf(1)
    assert condition_check(L, L, [(1,)], [(1,)], [0])[0]
    ok, r = condition_check(L, L, [(1,)], [(F(1, 4),)], [F(1, 2)])
    assert not ok and abs(r[0]) > 0
    with pytest.raises(ConditionViolated):
        approx_join(L, L, [(1,)], [(F(1, 4),)], [F(1, 2)])


def test_small_tolerance_is_capped():
    L = linf(1)
    with pytest.warns(SmallToleranceCapped):
        out = approx_join(L, L, [(1,)], [(1,)], [MIN_EPS / 2])
    assert norm(out.result, sub(out.g0((1,)), out.g1((1,)))) <= MIN_EPS


def random_join_instance(rng):
    E = random_space(rng, rng.randint(1, 2))
    Fs = E if rng.random() < 0.5 else random_space(rng, rng.randint(1, 2))
    k = rng.randint(1, 2)
    a = [tuple(rand_q(rng) for _ in range(E.dim)) for _ in range(k)]
    if Fs is E:
        b = [tuple(x + rand_q(rng, -1, 1, 4) for x in v) for v in a]
    else:
        b = [tuple(rand_q(rng) for _ in range(Fs.dim)) for _ in range(k)]
    eps = [rng.choice([F(0), F(1, 4), F(1, 2), F(1), F(2)]) for _ in range(k)]
    return E, Fs, a, b, eps


def join_succeeds(E, Fs, a, b, eps):
    try:
        out = approx_join(E, Fs, a, b, eps, check=False)
    except NotIsometric:
        return False
    ok_legs = check_isometry(out.g0).status == ISOMETRIC and check_isometry(out.g1).status == ISOMETRIC
    close = all(norm(out.result, sub(out.g0(x), out.g1(y))) <= t for x, y, t in zip(a, b, eps))
    return ok_legs and close


@given(seeds)
def test_condition_iff_join(seed):
    inst = random_join_instance(rng_of(seed))
    assert condition_check(*inst)[0] == join_succeeds(*inst)


@given(seeds)
def test_single_pair_distance_is_attained(seed):
    rng = rng_of(seed)
    E, Fs = random_space(rng, 2), random_space(rng, 2)
    a = (rand_q(rng, 1, 4), rand_q(rng))
    b = (rand_q(rng), rand_q(rng, 1, 4))
    t = abs(norm(E, a) - norm(Fs, b))
    if t == 0:
        return
    out = approx_join(E, Fs, [a], [b], [t])
    assert norm(out.result, sub(out.g0(a), out.g1(b))) == t
