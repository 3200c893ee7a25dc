import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from reesalg.poly import Field, Poly, Ring
from reesalg.rees import ReesAlg, WeightedGen

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CHARS = (0, 2, 3, 5)


def ring_of(char, names=("z", "x")):
    return Ring(Field(char), tuple(names))


@st.composite
def polys(draw, ring, max_deg=4, max_terms=4, nonzero=False):
    n = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in ring.vars)
        if ring.field.char:
            c = draw(st.integers(1, ring.field.char - 1))
        else:
            c = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3)))
        terms[e] = terms.get(e, 0) + c
    f = Poly(ring, terms)
    if nonzero and not f:
        f = ring.one()
    return f


@st.composite
def algebras(draw, ring, max_gens=2, max_weight=3, max_deg=4):
    k = draw(st.integers(1, max_gens))
    gens = []
    for _ in range(k):
        f = draw(polys(ring, max_deg=max_deg, max_terms=3, nonzero=True))
        gens.append(WeightedGen(f, draw(st.integers(1, max_weight))))
    return ReesAlg(ring, tuple(gens))


def random_poly(rng: random.Random, ring, max_deg=4, max_terms=4):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = tuple(rng.randint(0, max_deg) for _ in ring.vars)
        c = rng.randint(1, ring.field.char - 1) if ring.field.char else Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        terms[e] = terms.get(e, 0) + c
    f = Poly(ring, terms)
    return f if f else ring.one()


def random_algebra(rng: random.Random, ring, max_gens=2, max_weight=3, max_deg=4):
    gens = tuple(WeightedGen(random_poly(rng, ring, max_deg, 3), rng.randint(1, max_weight))
                 for _ in range(rng.randint(1, max_gens)))
    return ReesAlg(ring, gens)


def random_point(rng: random.Random, ring):
    if ring.field.char:
        return tuple(rng.randrange(ring.field.char) for _ in ring.vars)
    return tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in ring.vars)


@pytest.fixture(params=CHARS, ids=lambda c: f"char{c}")
def char(request):
    return request.param
