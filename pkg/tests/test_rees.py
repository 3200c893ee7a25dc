import itertools
from fractions import Fraction

import pytest
from hypothesis import given

from reesalg.poly import Stratum
from reesalg.rees import (ExcludedPointError, HorizonExceeded, Horizons, Ideal, NotInSingularLocus,
                          ReesAlg, WeightedGen, almost_rees_normalize, degree_slice, format_algebra,
                          join, order_at_point, parse_algebra, parse_algebra_auto, sing_ideal,
                          sing_membership, veronese, weighted_solutions, zero_set_membership)

from conftest import CHARS, algebras, ring_of


def alg(text, char=0, vars=("z", "x")):
    return parse_algebra_auto(text, char, vars)


def slice_gens(I):
    return {str(g) for g in I.gens}


def brute_slice(G, n):
    """All products of generators with weights summing to n, by recursion."""
    out = set()

    def rec(i, remaining, acc):
        if remaining == 0:
            out.add(acc.monic())
            return
        for j in range(i, len(G.gens)):
            g = G.gens[j]
            if g.weight <= remaining:
                rec(j, remaining - g.weight, acc * g.poly)

    rec(0, n, G.ring.one())
    return out


# -- slices and Veronese ------------------------------------------------------------

def test_degree_slice_examples():
    G = alg("[x @ 2, y @ 3]", vars=("x", "y"))
    assert slice_gens(degree_slice(G, 6)) == {"x^3", "y^2"}
    assert degree_slice(G, 1).is_zero()
    assert slice_gens(degree_slice(alg("[z @ 1]"), 3)) == {"z^3"}


def test_degree_slice_matches_recursion():
    G = alg("[z @ 1, x^3 @ 2, z*x @ 3]")
    for n in range(1, 7):
        J = degree_slice(G, n)
        assert all(J.contains_poly(f) for f in brute_slice(G, n))
        assert all(Ideal(G.ring, tuple(brute_slice(G, n))).contains_poly(f) for f in J.gens)


def test_weighted_solutions_count():
    sols = list(weighted_solutions([2, 3], 12))
    assert sorted(sols) == [(0, 4), (3, 2), (6, 0)]


def test_veronese_examples():
    G = alg("[x @ 2, y @ 3]", vars=("x", "y"))
    V = veronese(G, 6)
    assert V.canonical() == ((6, "x^3"), (6, "y^2"))
    assert V.horizon_verified
    assert degree_slice(G, 12).equals(degree_slice(V, 6).power(2))
    K = alg("[z @ 1, x^3 @ 2]")
    assert veronese(K, 2).canonical() == ((2, "x^3"), (2, "z^2"))
    F = alg("[z^2 + x^3 @ 2]")
    assert veronese(F, 2).canonical() == F.canonical()


def test_veronese_horizon_flag():
    G = alg("[x @ 2, y @ 3]", vars=("x", "y"))
    assert not veronese(G, 6, Horizons(a_max=2)).horizon_verified


def test_almost_rees_examples():
    G = alg("[x @ 2, y @ 3]", vars=("x", "y"))
    res = almost_rees_normalize(G)
    assert res.N == 6 and slice_gens(res.ideal) == {"x^3", "y^2"}
    assert res.checked_up_to >= 4
    F = alg("[z^2 + x^3 @ 2]")
    res = almost_rees_normalize(F)
    assert res.N == 2 and slice_gens(res.ideal) == {"x^3 + z^2"}
    K = alg("[z @ 1, x^3 @ 2]")
    res = almost_rees_normalize(K)
    assert res.N == 2 and slice_gens(res.ideal) == {"z^2", "x^3"}
    for k in (2, 3):
        assert degree_slice(K, 2 * k).equals(res.ideal.power(k))


def test_almost_rees_horizon():
    # weights 2 and 3 need N = 6; an lcm-only search with a_max = 0 cannot succeed
    G = alg("[x @ 2, y @ 3]", vars=("x", "y"))
    with pytest.raises(HorizonExceeded):
        almost_rees_normalize(G, Horizons(a_max=0))
    with pytest.raises(ValueError):
        almost_rees_normalize(ReesAlg(G.ring, ()))


def test_join():
    G = alg("[z1^2 + x^3 @ 2]", vars=("z1", "x"))
    K = alg("[z1 @ 1]", vars=("z1", "x"))
    assert join(G, K).canonical() == ((1, "z1"), (2, "x^3 + z1^2"))
    with pytest.raises(ValueError):
        join(G, alg("[z @ 1]"))


# -- pointwise --------------------------------------------------------------------

def test_sing_membership_examples():
    G = alg("[z^2 + x^3 @ 2]")
    assert sing_membership(G, (0, 0))
    assert not sing_membership(G, (1, 0))
    G6 = alg("[z5^2 + t5^2*x5*s^2 @ 2]", 2, ("z5", "x5", "t5", "s"))
    H6 = alg("[z5 @ 1, t5 @ 1]", 2, ("z5", "x5", "t5", "s"))
    p = (0, 1, 1, 0)
    assert sing_membership(G6, p) and not sing_membership(H6, p)


def test_order_at_point_examples():
    assert order_at_point(alg("[z^2 + x^3 @ 2]"), (0, 0)) == 1
    assert order_at_point(alg("[x^3 @ 2]"), (0, 0)) == Fraction(3, 2)
    assert order_at_point(alg("[z @ 1, x^3 @ 2]"), (0, 0)) == 1
    with pytest.raises(NotInSingularLocus):
        order_at_point(alg("[z^2 + x^3 @ 2]"), (1, 0))


def test_zero_set_examples():
    assert zero_set_membership(alg("[z^2 + x^3 @ 2]"), (1, -1))
    assert not zero_set_membership(alg("[z @ 1, x^3 @ 2]"), (0, 1))


def test_excluded_point():
    G = alg("[z @ 1]")
    R = G.with_gens(G.gens, exclusions=(G.ring.parse("x + 1"),))
    with pytest.raises(ExcludedPointError):
        sing_membership(R, (0, -1))


def test_generic_point_membership():
    G = alg("[z^2 + x^3 @ 2]")
    assert not sing_membership(G, Stratum(["z"]))
    assert sing_membership(G, Stratum(["z", "x"]))


@pytest.mark.parametrize("char", CHARS)
def test_sing_subset_zero_set(char):
    R = ring_of(char)

    @given(algebras(R))
    def check(G):
        for p in itertools.product(range(-1, 2), repeat=2):
            p = R.point(p)
            if sing_membership(G, p):
                assert zero_set_membership(G, p)

    check()


# -- singular-locus ideal ---------------------------------------------------------

def test_sing_ideal_examples():
    assert slice_gens(sing_ideal(alg("[z^2 + x^3 @ 2]"))) == {"z", "x^2"}
    assert slice_gens(sing_ideal(alg("[z @ 1]"))) == {"z"}
    I2 = sing_ideal(alg("[z^2 + x^3 @ 2]", 2))
    assert slice_gens(I2) == {"z^2", "x^2"}


@pytest.mark.parametrize("char", (2, 3, 5))
def test_sing_ideal_zero_set_matches_pointwise_scan(char):
    """Oracle: V(sing_ideal) on the full F_p^2 grid equals the set of points
    where every generator has order at least its weight."""
    R = ring_of(char)

    @given(algebras(R))
    def check(G):
        I = sing_ideal(G)
        for p in itertools.product(range(char), repeat=2):
            assert I.vanishes_at(p) == sing_membership(G, p)

    check()


def test_sing_ideal_char0_scan():
    R = ring_of(0)

    @given(algebras(R))
    def check(G):
        I = sing_ideal(G)
        for p in itertools.product(range(-2, 3), repeat=2):
            p = R.point(p)
            assert I.vanishes_at(p) == sing_membership(G, p)

    check()


# -- text format -------------------------------------------------------------------

def test_parse_algebra_round_trip():
    R = ring_of(0)
    G = parse_algebra("[z^2 + x^3 @ 2, z @ 1, x]", R)
    assert G.weights == [2, 1, 1]
    assert parse_algebra(format_algebra(G), R) == G
    with pytest.raises(ValueError):
        parse_algebra("z @ 1", R)


def test_weighted_gen_validation():
    R = ring_of(0)
    with pytest.raises(ValueError):
        WeightedGen(R.zero(), 1)
    with pytest.raises(ValueError):
        WeightedGen(R.one(), 0)
