"""Satellite functions along traces and the tau lower bound.

Each algebra in a trace is read as the pair (I_N, N), with N fixed when the
scenario is loaded. Maxima are taken over finite sample sets (grid or random
points plus generic points of coordinate strata), never over the full
variety.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .blowup import BasicObject, linear_rank
from .diff import diff_saturate
from .poly import Poly, Stratum, initial_form, order_at, strip_variable, divisor_order
from .rees import Ideal, NotInSingularLocus, ReesAlg, degree_slice


class UndefinedInvariant(ValueError):
    pass


@dataclass(frozen=True)
class SampleConfig:
    """Which points stand in for the whole chart."""

    grid_limit: int = 4096
    box: int = 1
    random: int = 20
    seed: int = 0
    strata: bool = True
    max_strata_vars: int = 6


def sample_points(ring, exclusions: Sequence[Poly] = (), cfg: SampleConfig = SampleConfig()) -> list:
    """Prime-field points (full grid when small) plus generic points of all
    coordinate strata, skipping excluded points."""
    d = ring.ngens
    F = ring.field
    rng = random.Random(f"{cfg.seed}:{','.join(ring.vars)}:{F.char}")
    pts = []
    if F.char:
        if F.char**d <= cfg.grid_limit:
            pts = list(itertools.product(range(F.char), repeat=d))
        else:
            pts = [(0,) * d] + [tuple(rng.randrange(F.char) for _ in range(d)) for _ in range(cfg.random)]
    else:
        if (2 * cfg.box + 1) ** d <= cfg.grid_limit:
            pts = [tuple(Fraction(v) for v in p) for p in itertools.product(range(-cfg.box, cfg.box + 1), repeat=d)]
        pts += [tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(d)) for _ in range(cfg.random)]
    pts = list(dict.fromkeys(tuple(F(c) for c in p) for p in pts))
    if cfg.strata and d <= cfg.max_strata_vars:
        for k in range(d + 1):
            for S in itertools.combinations(ring.vars, k):
                pts.append(Stratum(S))
    return [p for p in pts if not any(h.vanishes_at(p) for h in exclusions)]


def random_rational_points(ring, count: int, seed: int = 0) -> list:
    """Random rationals; in characteristic p they are reduced mod p, so
    denominators divisible by p are skipped."""
    rng = random.Random(seed)
    char = ring.field.char
    dens = [d for d in range(1, 12) if not char or d % char]

    def one():
        return ring.field(Fraction(rng.randint(-20, 20), rng.choice(dens)))

    return [tuple(one() for _ in ring.vars) for _ in range(count)]


# -- pair-level orders ------------------------------------------------------------

def pair_ideal(bo: BasicObject, name: str) -> tuple:
    N = bo.weight(name)
    return degree_slice(bo[name], N), N


def pair_order(J: Ideal, N: int, p) -> Fraction:
    o = J.order_at(p)
    return Fraction(o, N) if o != math.inf else math.inf


def in_pair_sing(J: Ideal, N: int, p) -> bool:
    return J.order_at(p) >= N


def residual_ideal(bo: BasicObject, name: str) -> Ideal:
    """I_N with every visible exceptional factor stripped."""
    J, _ = pair_ideal(bo, name)
    gens = list(J.gens)
    for tag in bo.chart.visible():
        if not gens:
            break
        k = min(divisor_order(f, tag.var) for f in gens)
        if k:
            gens = [strip_variable(f, tag.var, k) for f in gens]
    return Ideal(J.ring, tuple(gens))


def _frame(trace, i: int) -> BasicObject:
    return trace.frames[i].bo


def _memo(trace, key, compute):
    """Per-trace cache for frame-level data; traces without one recompute."""
    cache = getattr(trace, "cache", None)
    if cache is None:
        return compute()
    if key not in cache:
        cache[key] = compute()
    return cache[key]


def _pair(trace, i: int, name: str) -> tuple:
    return _memo(trace, ("pair", i, name), lambda: pair_ideal(_frame(trace, i), name))


def _residual(trace, i: int, name: str) -> Ideal:
    return _memo(trace, ("residual", i, name), lambda: residual_ideal(_frame(trace, i), name))


def _check(bo: BasicObject, p):
    return bo[bo.names()[0]].check_point(p) if bo.algebras else p


def ord_at(trace, i: int, p, name: str) -> Fraction:
    p = _check(_frame(trace, i), p)
    J, N = _pair(trace, i, name)
    if not in_pair_sing(J, N, p):
        raise NotInSingularLocus(f"{p} not in Sing of {name} at step {i}")
    return pair_order(J, N, p)


def word_at(trace, i: int, p, name: str) -> Fraction:
    """w-ord: order of the residual factor of I_N divided by N."""
    p = _check(_frame(trace, i), p)
    J, N = _pair(trace, i, name)
    if not in_pair_sing(J, N, p):
        raise NotInSingularLocus(f"{p} not in Sing of {name} at step {i}")
    return pair_order(_residual(trace, i, name), N, p)


def exp_sum(trace, i: int, p, name: str) -> Fraction:
    """Sum of b_j/N over visible divisors through p, with b_j as recorded at
    blow-up time from the order along the center."""
    bo = _frame(trace, i)
    N = bo.weight(name)
    total = Fraction(0)
    for tag in bo.chart.visible():
        if bo.ring.gen(tag.var).vanishes_at(p):
            total += Fraction(tag.exponent(name), N)
    return total


def word_via_exponents(trace, i: int, p, name: str) -> Fraction:
    return ord_at(trace, i, p, name) - exp_sum(trace, i, p, name)


def singular_samples(trace, i: int, name: str) -> list:
    def compute():
        J, N = _pair(trace, i, name)
        return [p for p in trace.samples(i) if in_pair_sing(J, N, p)]

    return _memo(trace, ("singular", i, name), compute)


def max_word(trace, i: int, name: str):
    """Max of w-ord over the sample set, or None when no sample is singular."""
    def compute():
        vals = [word_at(trace, i, p, name) for p in singular_samples(trace, i, name)]
        return max(vals) if vals else None

    return _memo(trace, ("max_word", i, name), compute)


def split_index(trace, i: int, name: str) -> int:
    """l such that max w-ord is constant on frames l..i and larger at l-1."""
    def compute():
        cur = max_word(trace, i, name)
        l = i
        while l > 0 and max_word(trace, l - 1, name) == cur:
            l -= 1
        return l

    return _memo(trace, ("split", i, name), compute)


def t_at(trace, i: int, p, name: str) -> tuple:
    """(w-ord, number of divisors of E^- through p), E^- = divisors born at or
    before the split index."""
    mw = max_word(trace, i, name)
    if mw is None or mw <= 0:
        raise UndefinedInvariant(f"t undefined at step {i}: max w-ord is {mw}")
    w = word_at(trace, i, p, name)
    l = split_index(trace, i, name)
    bo = _frame(trace, i)
    count = sum(1 for tag in bo.chart.visible()
                if tag.born_at <= l and bo.ring.gen(tag.var).vanishes_at(p))
    return (w, count)


def max_t(trace, i: int, name: str):
    def compute():
        mw = max_word(trace, i, name)
        if mw is None or mw <= 0:
            return None
        return max(t_at(trace, i, p, name) for p in singular_samples(trace, i, name))

    return _memo(trace, ("max_t", i, name), compute)


# -- tau -------------------------------------------------------------------------

@dataclass(frozen=True)
class TangentData:
    point: object
    linear_forms: tuple
    tau_lower: int
    exact: bool
    note: str = ""


def tau_lower_bound(G: ReesAlg, p) -> TangentData:
    """Rank of the linear initial forms of weight-one generators of order one
    in the saturation. Exact in characteristic zero, a lower bound otherwise."""
    from .rees import sing_membership

    if not sing_membership(G, p):
        raise NotInSingularLocus(f"{p} is not in Sing {G}")
    S = diff_saturate(G)
    forms = []
    for g in S.gens:
        if g.weight == 1 and order_at(g.poly, p) == 1:
            forms.append(initial_form(g.poly, p))
    basis = []
    for f in forms:
        if linear_rank(basis + [f]) > len(basis):
            basis.append(f)
    exact = G.field.char == 0
    note = "" if exact else "char-p additive forms not analyzed; value is a lower bound"
    return TangentData(p, tuple(basis), len(basis), exact, note)
