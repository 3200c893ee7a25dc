import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from reesalg.closure import (UndecidedError, Verdict, almost_rees_containment, canonical_compare,
                             feasible_point, hypersurface_criterion, ic_membership_certificate,
                             ic_power_witness, ic_reduce, monomial_ic_membership)
from reesalg.poly import Field, Poly, Ring
from reesalg.rees import Ideal, parse_algebra_auto

R = Ring(Field(0), ("x", "y"))


def ideal(*texts, ring=R):
    return Ideal(ring, tuple(ring.parse(t) for t in texts))


def mono(e):
    return Poly(R, {tuple(e): 1})


exps2 = st.tuples(st.integers(0, 4), st.integers(0, 4))


# -- linear programming ---------------------------------------------------------------

def test_feasible_point_simple():
    x = feasible_point([[1, 1]], [2])
    assert x is not None and sum(x) == 2 and all(v >= 0 for v in x)
    assert feasible_point([[1, 1]], [-1]) is None
    x = feasible_point([[1, 2, 0], [0, 1, 1]], [Fraction(5, 2), 1])
    assert x[0] + 2 * x[1] == Fraction(5, 2) and x[1] + x[2] == 1


# -- monomial closure ---------------------------------------------------------------

def test_monomial_ic_examples():
    assert monomial_ic_membership(R.parse("x*y"), ideal("x^2", "y^2"))
    assert not monomial_ic_membership(R.parse("x"), ideal("x^2"))
    assert monomial_ic_membership(R.parse("x^2*y"), ideal("x^2", "y^2"))
    # oracles from the same examples
    assert ic_power_witness(R.parse("x*y"), ideal("x^2", "y^2"), 2) == 2
    assert ic_power_witness(R.parse("x"), ideal("x^2"), 10) is None


def test_certificate_text():
    ok, cert = ic_membership_certificate((1, 1), ideal("x^2", "y^2"))
    assert ok and "1/2" in cert
    ok, cert = ic_membership_certificate((1, 0), ideal("x^2"))
    assert not ok and "outside" in cert


def test_power_witness_examples():
    assert ic_power_witness(R.parse("x^2*y"), ideal("x^2", "y^2"), 1) == 1
    assert ic_power_witness(R.parse("x^2*y + y^3"), ideal("x^2", "y^2"), 3) == 1
    # sound but incomplete off monomials: (x^2 + xy)^k always carries k x^(2k-1) y
    assert ic_power_witness(R.parse("x*y + x^2"), ideal("x^2", "y^2"), 6) is None
    with pytest.raises(UndecidedError):
        ic_power_witness(R.parse("x*y"), ideal("x^2 + y^3"), 3)
    with pytest.raises(ValueError):
        ic_power_witness(R.parse("x"), ideal("x"), 0)


@given(st.lists(exps2, min_size=1, max_size=3), st.tuples(st.integers(0, 8), st.integers(0, 8)))
def test_newton_vs_power_witness(gens, m):
    I = Ideal(R, tuple(mono(g) for g in gens))
    assert monomial_ic_membership(m, I) == (ic_power_witness(m, I, 12) is not None)


def test_ic_reduce():
    S = Ring(Field(0), ("x", "y", "z"))
    I = ideal("x^2", "x*y + z", "y^2", ring=S)
    assert {str(g) for g in ic_reduce(I).gens} == {"x^2", "y^2", "z"}
    J = ideal("x^2 + y^3")
    assert ic_reduce(J).gens == J.reduced().gens


# -- almost-Rees containment ------------------------------------------------------------

def test_containment_examples():
    assert almost_rees_containment(ideal("x"), 1, ideal("x^2"), 2).value == "yes"
    v = almost_rees_containment(ideal("x^3"), 2, ideal("x^2"), 1)
    assert v.value == "no" and v.certificate
    assert almost_rees_containment(ideal("x^2", "y^2"), 1, ideal("x", "y"), 2).value == "yes"


def test_containment_weight_scaling():
    J = ideal("x^2", "x*y^3")
    for k in (2, 3):
        Jk = J.power(k)
        assert almost_rees_containment(J, 2, Jk, 2 * k).value == "yes"
        assert almost_rees_containment(Jk, 2 * k, J, 2).value == "yes"


@given(st.lists(exps2, min_size=1, max_size=2), st.integers(1, 3),
       st.lists(exps2, min_size=1, max_size=2), st.integers(1, 3))
def test_containment_matches_power_oracle(jg, b, ig, c):
    J = Ideal(R, tuple(mono(g) for g in jg))
    I = Ideal(R, tuple(mono(g) for g in ig))
    v = almost_rees_containment(J, b, I, c)
    Ib = I.power(b)
    expect = all(ic_power_witness(f, Ib, 12) is not None for f in J.power(c).gens)
    assert v.value == ("yes" if expect else "no")


def test_divisorial_containment():
    # x^3 (x+1)^2 is x^3 times a unit near the origin
    H = ideal("x^3*(x + 1)^2")
    v = almost_rees_containment(ideal("x^3"), 2, H, 2)
    assert v.value == "yes" and v.details.get("local")
    assert almost_rees_containment(ideal("x^2"), 2, H, 2).value == "no"


def test_undecided_containment():
    v = almost_rees_containment(ideal("x + y^2"), 1, ideal("x + y^3"), 1)
    assert v.value == "undecided"


def test_verdict_contract():
    with pytest.raises(ValueError):
        Verdict("yes", "")
    with pytest.raises(ValueError):
        Verdict("maybe", "x")


def test_hypersurface_criterion():
    assert hypersurface_criterion(3, 2, 2, 1)
    assert hypersurface_criterion(5, 3, 5, 3)
    assert not hypersurface_criterion(3, 1, 2, 1)
    with pytest.raises(ValueError):
        hypersurface_criterion(1, 0, 1, 1)


@given(st.integers(1, 9), st.integers(1, 5), st.integers(1, 9), st.integers(1, 5))
def test_hypersurface_criterion_matches_monomial_closure(N, n, Q, q):
    S = Ring(Field(0), ("v",))
    v = almost_rees_containment(Ideal(S, (S.parse(f"v^{Q}"),)), q, Ideal(S, (S.parse(f"v^{N}"),)), n)
    assert (v.value == "yes") == hypersurface_criterion(N, n, Q, q)


# -- canonical comparison ----------------------------------------------------------------

def alg(text, char=0, vars=("z", "x")):
    return parse_algebra_auto(text, char, vars)


def test_compare_trivially_equivalent():
    c = canonical_compare(alg("[x @ 1]"), alg("[x^2 @ 2]"))
    assert c.verdict.value == "equivalent"


def test_compare_cusps():
    G, K = alg("[z^2 + x^3 @ 2]"), alg("[z^2 + x^5 @ 2]")
    c = canonical_compare(G, K)
    assert c.verdict.value == "not_equivalent"
    assert c.right_in_left.value == "yes"
    assert c.left_in_right.value == "no"


def test_compare_undecided():
    c = canonical_compare(alg("[z + x^2 @ 1]"), alg("[z + x^3 @ 1]"))
    assert c.verdict.value == "undecided"


def test_compare_saturation_equivalent_to_original():
    G = alg("[z^2 + x^3 @ 2]")
    K = alg("[z @ 1, x^2 @ 1, x^3 @ 2]")
    assert canonical_compare(G, K).verdict.value == "equivalent"


def test_compare_chart_mismatch():
    with pytest.raises(ValueError):
        canonical_compare(alg("[z @ 1]"), alg("[z @ 1]", vars=("z", "y")))


def test_compare_symmetric_on_monomials():
    cases = ["[x @ 1]", "[x^2 @ 1]", "[x^3 @ 2]", "[x @ 2, z @ 3]", "[z*x @ 2]"]
    for a, b in itertools.product(cases, repeat=2):
        c1 = canonical_compare(alg(a), alg(b))
        c2 = canonical_compare(alg(b), alg(a))
        assert c1.verdict.value == c2.verdict.value
        assert c1.left_in_right.value == c2.right_in_left.value
