"""Integral-closure tests on decidable fragments.

Monomial ideals are decided through their Newton polyhedra with an exact
rational simplex. Everything else either reduces to that case or is reported
as undecided.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .diff import diff_saturate
from .poly import Poly, divisor_order
from .rees import (DEFAULT_HORIZONS, HorizonExceeded, Horizons, Ideal, ReesAlg,
                   _divides, almost_rees_normalize, minimal_exponents, power_product,
                   weighted_solutions)

YES, NO, UNDECIDED = "yes", "no", "undecided"


class UndecidedError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    value: str
    certificate: str
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.value not in (YES, NO, UNDECIDED, "equivalent", "not_equivalent"):
            raise ValueError(f"bad verdict {self.value!r}")
        if not self.certificate:
            raise ValueError("verdicts carry a certificate")

    def __bool__(self):
        return self.value in (YES, "equivalent")

    def __str__(self):
        return f"{self.value}: {self.certificate}"


# -- exact simplex -------------------------------------------------------------

def feasible_point(A: Sequence[Sequence], b: Sequence):
    """A nonnegative x with A x = b, or None. Phase I simplex over Fractions
    with Bland's rule, so it terminates and never rounds."""
    m, n = len(A), len(A[0]) if A else 0
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row, rhs = [-v for v in row], -rhs
        art = [Fraction(int(i == k)) for k in range(m)]
        rows.append(row + art + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimize the sum of artificials, written as reduced costs
    cost = [Fraction(0)] * (width + 1)
    for r in rows:
        for j in range(width + 1):
            cost[j] -= r[j]
    for i in range(m):
        cost[n + i] += 1
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                ratio = r[-1] / r[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            break  # unbounded is impossible in phase I; kept as a guard
        piv = rows[leave][enter]
        rows[leave] = [v / piv for v in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][enter]:
                f = rows[i][enter]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[leave])]
        if cost[enter]:
            f = cost[enter]
            cost = [v - f * w for v, w in zip(cost, rows[leave])]
        basis[leave] = enter
    if -cost[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][-1]
    return x


def newton_certificate(a: Sequence[int], gens: Sequence[Sequence[int]]):
    """Convex weights lambda with sum lambda_j g_j <= a, or None."""
    n = len(a)
    k = len(gens)
    A = [[g[i] for g in gens] + [int(i == j) for j in range(n)] for i in range(n)]
    A.append([1] * k + [0] * n)
    x = feasible_point(A, list(a) + [1])
    return None if x is None else x[:k]


def _exponent(m) -> tuple:
    if isinstance(m, Poly):
        if not m.is_monomial():
            raise ValueError(f"{m} is not a monomial")
        return next(iter(m.terms))
    return tuple(m)


def _monomial_exps(I: Ideal) -> list:
    red = I.reduced()
    if not red.is_monomial():
        raise ValueError(f"{I} is not a monomial ideal")
    if red.is_zero():
        raise ValueError("zero ideal")
    return red.monomial_exponents()


def monomial_ic_membership(m, I: Ideal) -> bool:
    """m in IC(I) for a monomial ideal I, via the Newton polyhedron."""
    a = _exponent(m)
    exps = _monomial_exps(I)
    if any(_divides(g, a) for g in exps):
        return True
    if sum(a) < min(sum(g) for g in exps):
        return False
    return newton_certificate(a, exps) is not None


def ic_membership_certificate(m, I: Ideal):
    """(member, certificate text) for monomial m and monomial I."""
    a = _exponent(m)
    exps = _monomial_exps(I)
    for g in exps:
        if _divides(g, a):
            return True, f"divisible by generator {g}"
    lam = newton_certificate(a, exps)
    if lam is None:
        return False, f"exponent {a} lies outside the Newton polyhedron of {exps}"
    combo = " + ".join(f"{c}*{g}" for c, g in zip(lam, exps) if c)
    return True, f"{a} >= {combo}"


# -- independent oracle ----------------------------------------------------------

@lru_cache(maxsize=4096)
def _power_minimal(exps: tuple, k: int) -> tuple:
    if k == 0:
        return (tuple(0 for _ in exps[0]),)
    prev = _power_minimal(exps, k - 1)
    return tuple(minimal_exponents(tuple(x + y for x, y in zip(p, g)) for p in prev for g in exps))


def ic_power_witness(f, I: Ideal, K: int):
    """Smallest k <= K with f^k in I^k, or None. Only for monomial I."""
    if K < 1:
        raise ValueError("K must be positive")
    red = I.reduced()
    if not red.is_monomial():
        raise UndecidedError(f"{I} is not monomial; power membership needs ideal arithmetic")
    exps = tuple(sorted(red.monomial_exponents()))
    if isinstance(f, Poly) and not f.is_monomial():
        fk = f.ring.one()
        for k in range(1, K + 1):
            fk = fk * f
            S = _power_minimal(exps, k)
            if all(any(_divides(s, e) for s in S) for e in fk.terms):
                return k
        return None
    a = _exponent(f)
    for k in range(1, K + 1):
        ka = tuple(k * x for x in a)
        if any(_divides(s, ka) for s in _power_minimal(exps, k)):
            return k
    return None


# -- ideals and algebras ---------------------------------------------------------

def ic_reduce(I: Ideal) -> Ideal:
    """An ideal with the same integral closure: monomial reduction, then
    removal of terms that lie in the closure of the monomial part."""
    red = I.reduced()
    while True:
        monos = [next(iter(g.terms)) for g in red.gens if g.is_monomial()]
        if not monos or red.is_monomial():
            return red
        mono_ideal = Ideal(red.ring, tuple(Poly(red.ring, {e: 1}) for e in monos))
        out = [g for g in red.gens if g.is_monomial()]
        changed = False
        for g in red.gens:
            if g.is_monomial():
                continue
            keep = {e: c for e, c in g.terms.items() if not monomial_ic_membership(e, mono_ideal)}
            changed |= len(keep) != len(g.terms)
            if keep:
                out.append(Poly(red.ring, keep))
        if not changed:
            return red
        red = Ideal(red.ring, tuple(out)).reduced()


def hypersurface_criterion(N: int, n: int, Q: int, q: int) -> bool:
    """[v^Q K W^q] lies in the closure of [v^N W^n] iff Q/q >= N/n."""
    if n < 1 or q < 1:
        raise ValueError("weights must be positive")
    return Q * n >= N * q


def _ideal_power_gens(J: Ideal, c: int) -> list:
    return [power_product(J.gens, a, J.ring) for a in weighted_solutions([1] * len(J.gens), c)]


def _divisorial_form(I: Ideal):
    """(v, k) when every generator is v^k_i times a unit at the origin."""
    ring = I.ring
    for v in ring.vars:
        ks = []
        for g in I.gens:
            k = divisor_order(g, v)
            i = ring.index(v)
            u = Poly(ring, {e[:i] + (e[i] - k,) + e[i + 1:]: c for e, c in g.terms.items()})
            if u.constant_term() == 0:
                break
            ks.append(k)
        else:
            if ks and min(ks) > 0:
                return v, min(ks)
    return None


def almost_rees_containment(J: Ideal, b: int, I: Ideal, c: int) -> Verdict:
    """Is B[J W^b] inside the closure of B[I W^c], i.e. J^c in IC(I^b)?"""
    if b < 1 or c < 1:
        raise ValueError("weights must be positive")
    g = math.gcd(b, c)
    b, c = b // g, c // g
    if J.reduced().is_zero():
        return Verdict(YES, "left ideal is zero")
    if I.reduced().is_zero():
        return Verdict(NO, "right ideal is zero but left is not")
    target = ic_reduce(I.power(b))
    Jc = _ideal_power_gens(J.reduced(), c)
    if target.is_monomial():
        for f in Jc:
            for e in sorted(f.terms):
                ok, cert = ic_membership_certificate(e, target)
                if not ok:
                    return Verdict(NO, f"term {Poly(J.ring, {e: 1})} of {f} not in closure: {cert}",
                                   {"witness": e})
        return Verdict(YES, f"every term of J^{c} lies in the Newton polyhedron of I^{b} = {target}")
    div = _divisorial_form(I)
    if div is not None:
        v, N = div
        Q = min(divisor_order(f, v) for f in J.reduced().gens)
        ok = hypersurface_criterion(N, c, Q, b)
        cert = (f"divisorial along {v} near the origin: J has order {Q} in weight {b}, "
                f"I has order {N} in weight {c}")
        return Verdict(YES if ok else NO, cert, {"local": True})
    return Verdict(UNDECIDED, f"closure of {target} is not monomial and not divisorial")


@dataclass(frozen=True)
class Comparison:
    verdict: Verdict
    left_in_right: Verdict
    right_in_left: Verdict
    weight: int = 0

    def __str__(self):
        return (f"{self.verdict}\n  right in closure(left): {self.right_in_left}\n"
                f"  left in closure(right): {self.left_in_right}")


def canonical_compare(G: ReesAlg, K: ReesAlg, horizons: Horizons = DEFAULT_HORIZONS) -> Comparison:
    """Compare closures of the differential saturations of G and K."""
    if G.ring != K.ring:
        raise ValueError(f"chart mismatch: {G.ring.vars} vs {K.ring.vars}")
    SG, SK = diff_saturate(G), diff_saturate(K)
    if not SG.gens or not SK.gens:
        if not SG.gens and not SK.gens:
            v = Verdict(YES, "both algebras are trivial")
            return Comparison(Verdict("equivalent", "both trivial"), v, v)
        yes = Verdict(YES, "trivial algebra is contained in every algebra")
        no = Verdict(NO, "a nontrivial generator is not in the closure of the trivial algebra")
        lr, rl = (yes, no) if not SG.gens else (no, yes)
        return Comparison(Verdict("not_equivalent", "exactly one side is trivial"), lr, rl)
    try:
        nG = almost_rees_normalize(SG, horizons)
        nK = almost_rees_normalize(SK, horizons)
    except HorizonExceeded as exc:
        u = Verdict(UNDECIDED, str(exc))
        return Comparison(Verdict(UNDECIDED, str(exc)), u, u)
    L = math.lcm(nG.N, nK.N)
    IG, IK = nG.ideal.power(L // nG.N), nK.ideal.power(L // nK.N)
    rl = almost_rees_containment(IK, L, IG, L)
    lr = almost_rees_containment(IG, L, IK, L)
    if rl.value == YES and lr.value == YES:
        verdict = Verdict("equivalent", f"closures agree in weight {L}")
    elif NO in (rl.value, lr.value):
        which = lr if lr.value == NO else rl
        verdict = Verdict("not_equivalent", which.certificate)
    else:
        verdict = Verdict(UNDECIDED, "containment undecided in at least one direction")
    return Comparison(verdict, lr, rl, L)
