import itertools

import pytest
from hypothesis import given

from reesalg.diff import NotSaturatedError, derivative_generators, diff_saturate, restrict_to_hypersurface
from reesalg.invariants import random_rational_points
from reesalg.poly import hasse_derivative
from reesalg.rees import join, order_at_point, parse_algebra_auto, sing_membership

from conftest import CHARS, algebras, ring_of


def alg(text, char=0, vars=("z", "x")):
    return parse_algebra_auto(text, char, vars)


def test_saturation_char0_cusp():
    S = diff_saturate(alg("[z^2 + x^3 @ 2]"))
    assert S.saturated
    assert S.canonical() == ((1, "x^2"), (1, "z"), (2, "x^3"))


def test_saturation_char0_higher_cusp():
    S = diff_saturate(alg("[z^2 + x^5 @ 2]"))
    assert S.canonical() == ((1, "x^4"), (1, "z"), (2, "x^5"))


def test_saturation_char2():
    G = alg("[z^2 + x^3 @ 2]", 2)
    S = diff_saturate(G)
    assert S.canonical() == ((1, "x^2"), (2, "x^3 + z^2"))
    # oracle: every Delta^alpha with |alpha| < 2, computed directly
    f = G.gens[0].poly
    direct = {(2 - sum(a), str(hasse_derivative(f, a).monic()))
              for a in [(0, 0), (1, 0), (0, 1)] if hasse_derivative(f, a)}
    assert direct == {(2, "x^3 + z^2"), (1, "x^2")}
    assert {(g.weight, str(g.poly.monic())) for g in derivative_generators(G)} == direct


def test_restriction_examples():
    S = diff_saturate(alg("[z^2 + x^3 @ 2]"))
    R = restrict_to_hypersurface(S, "z")
    assert R.ring.vars == ("x",)
    assert R.canonical() == ((1, "x^2"), (2, "x^3"))
    E = restrict_to_hypersurface(diff_saturate(alg("[z @ 1]")), "z")
    assert E.gens == ()
    assert sing_membership(E, (5,))


def test_restriction_refuses_raw():
    with pytest.raises(NotSaturatedError):
        restrict_to_hypersurface(alg("[z^2 + x^3 @ 2]"), "z")


@pytest.mark.parametrize("char", (0, 7))
def test_restriction_pointwise(char):
    G = alg("[z^2 + x^3 @ 2]", char)
    K = join(G, alg("[z @ 1]", char))
    R = restrict_to_hypersurface(diff_saturate(G), "z")
    pts = [(x,) for x in range(char)] if char else []
    pts += [(p[1],) for p in random_rational_points(G.ring, 50, seed=1)]
    for (x,) in pts:
        assert sing_membership(K, (0, x)) == sing_membership(R, (x,))


@pytest.mark.parametrize("char", CHARS)
def test_saturation_idempotent(char):
    R = ring_of(char)

    @given(algebras(R))
    def check(G):
        S = diff_saturate(G)
        S2 = diff_saturate(S.with_gens(S.gens, saturated=False))
        assert S2.canonical() == S.canonical()

    check()


@pytest.mark.parametrize("char", CHARS)
def test_saturation_preserves_sing_and_order(char):
    R = ring_of(char)
    box = range(char) if char else range(-2, 3)

    @given(algebras(R))
    def check(G):
        S = diff_saturate(G)
        for p in itertools.product(box, repeat=2):
            p = R.point(p)
            s = sing_membership(G, p)
            assert s == sing_membership(S, p)
            if s and G.gens:
                assert order_at_point(G, p) == order_at_point(S, p)

    check()
