import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import rng_of, seeds
from gurarij.census import (anchors_ok, find_anchors, isolated_density_probe, lindenstrauss_family,
                            net_coverage, polygon_space, polyhedral_net, random_katetov)
from gurarij.errors import DimensionMismatch, GridTooLarge, NoAnchorsFound
from gurarij.fenchel import from_katetov, is_isolated, is_katetov, make_kfn
from gurarij.space import l1, linf, norm, subspace
from gurarij.typespace import realized, tp, type_distance

F = Fraction
L1 = linf(1)
MAX = make_kfn(L1, [((1,), 0), ((-1,), 0), ((0,), 1)])


def test_polygon_is_symmetric_and_inscribed():
    P = polygon_space(8)
    assert len(P.vertices) == 16
    for v in P.vertices:
        assert norm(P, v) == 1
        assert abs(float(v[0]) ** 2 + float(v[1]) ** 2 - 1) < 1e-5


def test_single_anchor_family():
    E = polygon_space(16)
    fam = lindenstrauss_family(E, 1)
    assert len(fam.types) == 2
    assert fam.pairwise_lo[0][1] >= F(9, 10)
    exact = type_distance(fam.types[0], fam.types[1])
    assert fam.pairwise_lo[0][1] <= exact.lo


def test_family_structure():
    E = polygon_space(16)
    fam = lindenstrauss_family(E, 2)
    k = len(fam.types)
    assert k == 4
    for i in range(k):
        assert fam.pairwise_lo[i][i] == 0
        for j in range(k):
            assert fam.pairwise_lo[i][j] == fam.pairwise_lo[j][i]
    v, w = fam.anchors
    assert anchors_ok(E, v, w)
    for i, j in [(1, 3)]:
        assert fam.pairwise_lo[i][j] <= type_distance(fam.types[i], fam.types[j]).lo


def test_linf_anchors():
    vs = find_anchors(linf(2), 2)
    assert anchors_ok(linf(2), *vs)
    with pytest.raises(NoAnchorsFound):
        find_anchors(linf(2), 3)
    with pytest.raises(DimensionMismatch):
        lindenstrauss_family(L1, 2)


def test_net_examples():
    net = polyhedral_net(L1, 2, F(1, 2))
    assert all(is_katetov(f)[0] for f in net)
    rep = net_coverage(L1, net, [MAX], 2, F(1, 2))
    assert rep.covered and rep.distances[0] <= F(1, 2)
    rep = net_coverage(L1, net, [net[3]], 2, F(1, 2))
    assert rep.distances[0] == 0
    assert net_coverage(L1, net, [MAX], 2, F(100)).covered
    with pytest.raises(GridTooLarge):
        polyhedral_net(linf(2), 1, F(1, 2))
    with pytest.raises(GridTooLarge):
        polyhedral_net(L1, 2, F(1, 2), cap=10)


@settings(max_examples=10)
@given(seeds)
def test_random_samples_are_katetov(seed):
    rng = rng_of(seed)
    assert is_katetov(random_katetov(L1, rng))[0]
    assert is_katetov(random_katetov(linf(2), rng))[0]


def test_isolation_probe():
    reals = [realized(L1, (F(k, 2),)) for k in range(-3, 4)]
    rep = isolated_density_probe(L1, reals)
    assert rep.counts["Isolated"] == len(reals) and rep.isolated_fraction == 1

    E, incl = subspace(l1(2), [(1, 0)])
    xi = tp(l1(2), incl, [(0, 1)])
    rep = isolated_density_probe(E, [xi])
    assert rep.verdicts == ("NotIsolated",) and rep.gaps == (2,)

    rng = random.Random(5)
    mixed = [from_katetov(random_katetov(L1, rng)) for _ in range(8)]
    rep = isolated_density_probe(L1, mixed)
    assert rep.verdicts == tuple(is_isolated(x).status for x in mixed)
    assert rep.isolated_fraction == F(rep.verdicts.count("Isolated"), 8)
