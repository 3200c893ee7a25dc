"""Rees algebras given by weighted generators f_i W^{n_i}.

The slices I_n are never stored; they are produced on demand by enumerating
the weighted power products of the generators.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import reduce
from typing import NamedTuple, Sequence

from .poly import Field, Poly, Ring, Stratum, infer_vars, order_at, parse_poly


class ExcludedPointError(ValueError):
    """The point lies on the complement of an open restriction."""


class NotInSingularLocus(ValueError):
    pass


class HorizonExceeded(RuntimeError):
    """No almost-Rees weight was certified below the search horizon."""

    def __init__(self, msg: str, best=None):
        super().__init__(msg)
        self.best = best


@dataclass(frozen=True)
class Horizons:
    """Search limits for Veronese and almost-Rees computations."""

    a_max: int = 8
    k_check: int = 4


DEFAULT_HORIZONS = Horizons()


@dataclass(frozen=True)
class WeightedGen:
    poly: Poly
    weight: int

    def __post_init__(self):
        if not self.poly:
            raise ValueError("generator polynomial must be nonzero")
        if self.weight < 1:
            raise ValueError(f"weight must be >= 1, got {self.weight}")

    def __str__(self):
        return f"{self.poly} @ {self.weight}"


def weighted_solutions(weights: Sequence[int], n: int):
    """All a in N^s with sum a_i * weights[i] == n."""
    if not weights:
        if n == 0:
            yield ()
        return
    w, rest = weights[0], weights[1:]
    for a in range(n // w + 1):
        for tail in weighted_solutions(rest, n - a * w):
            yield (a,) + tail


def power_product(polys: Sequence[Poly], exps: Sequence[int], ring: Ring) -> Poly:
    out = ring.one()
    for f, a in zip(polys, exps):
        if a:
            out = out * f**a
    return out


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimal_exponents(exps) -> list:
    """Minimal elements of a set of exponent vectors under divisibility."""
    exps = sorted(set(exps), key=lambda e: (sum(e), e))
    out = []
    for e in exps:
        if not any(_divides(m, e) for m in out):
            out.append(e)
    return out


@dataclass(frozen=True)
class Ideal:
    """A finitely generated ideal, kept as a tuple of nonzero generators."""

    ring: Ring
    gens: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(g for g in self.gens if g))
        for g in self.gens:
            if g.ring != self.ring:
                raise ValueError("generator from a different ring")

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.gens) + ">"

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.gens)

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.gens)

    def monomial_exponents(self) -> list:
        """Minimal exponent vectors; only meaningful for monomial ideals."""
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial ideal")
        return minimal_exponents(next(iter(g.terms)) for g in self.gens)

    def reduced(self) -> "Ideal":
        """Same ideal with monic generators and monomially redundant terms removed.

        Terms of a generator that are divisible by a monomial generator are
        deleted, which does not change the ideal.
        """
        if self.is_monomial():
            monos = minimal_exponents(next(iter(g.terms)) for g in self.gens)
            monos.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
            return Ideal(self.ring, tuple(Poly(self.ring, {m: 1}) for m in monos))
        gens = list(dict.fromkeys(g.monic() for g in self.gens if g))
        while True:
            monos = minimal_exponents(next(iter(g.terms)) for g in gens if g.is_monomial())
            if any(not any(m) for m in monos):
                return Ideal(self.ring, (self.ring.one(),))
            out = [Poly(self.ring, {m: 1}) for m in monos]
            for g in gens:
                if g.is_monomial():
                    continue
                h = Poly(self.ring, {e: c for e, c in g.terms.items() if not any(_divides(m, e) for m in monos)})
                if h:
                    out.append(h.monic())
            out = list(dict.fromkeys(out))
            if set(out) == set(gens):
                return Ideal(self.ring, tuple(sorted(out, key=_gen_sort_key)))
            gens = out

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, tuple(f * g for f in self.gens for g in other.gens)).reduced()

    def power(self, k: int) -> "Ideal":
        if k == 0:
            return Ideal(self.ring, (self.ring.one(),))
        if self.is_monomial():
            exps = self.monomial_exponents()
            cur = [tuple(0 for _ in self.ring.vars)]
            for _ in range(k):
                cur = minimal_exponents(tuple(a + b for a, b in zip(c, e)) for c in cur for e in exps)
            return Ideal(self.ring, tuple(Poly(self.ring, {e: 1}) for e in cur))
        out = Ideal(self.ring, (self.ring.one(),))
        for _ in range(k):
            out = out * self
        return out

    def contains_poly(self, f: Poly):
        """Membership: True/False for monomial ideals, None when undecided."""
        if not f:
            return True
        red = self.reduced()
        if red.is_monomial():
            exps = red.monomial_exponents()
            return all(any(_divides(m, e) for m in exps) for e in f.terms)
        if f.monic() in red.gens:
            return True
        return None

    def equals(self, other: "Ideal"):
        """Ideal equality: exact for monomial ideals, None when undecided."""
        a, b = self.reduced(), other.reduced()
        if set(a.gens) == set(b.gens):
            return True
        if a.is_monomial() and b.is_monomial():
            return False
        return None

    def vanishes_at(self, p) -> bool:
        return all(g.vanishes_at(p) for g in self.gens)

    def order_at(self, p) -> float:
        return min((order_at(g, p) for g in self.gens), default=math.inf)


def _gen_sort_key(g: Poly):
    e, _ = g.leading()
    return (g.degree(), len(g.terms), tuple(-x for x in e), str(g))


@dataclass(frozen=True)
class ReesAlg:
    """B[f_1 W^{n_1}, ..., f_s W^{n_s}] on a chart ring.

    ``exclusions`` are polynomials whose zero sets are removed (open
    restriction); ``saturated`` records that the generator set is closed under
    Hasse derivatives with weight drop; ``horizon_verified`` is False when a
    Veronese generating set may be incomplete.
    """

    ring: Ring
    gens: tuple = ()
    exclusions: tuple = ()
    saturated: bool = False
    horizon_verified: bool = True

    def __post_init__(self):
        gens = []
        for g in self.gens:
            if not isinstance(g, WeightedGen):
                g = WeightedGen(*g)
            if g.poly.ring != self.ring:
                raise ValueError(f"generator {g} is not on ring {self.ring.vars}")
            gens.append(g)
        object.__setattr__(self, "gens", tuple(dict.fromkeys(gens)))
        object.__setattr__(self, "exclusions", tuple(h for h in self.exclusions if not h.is_constant()))

    @classmethod
    def of(cls, ring: Ring, pairs, **kw) -> "ReesAlg":
        """Build from (poly or text, weight) pairs."""
        gens = []
        for f, n in pairs:
            if isinstance(f, str):
                f = parse_poly(f, ring)
            gens.append(WeightedGen(f, int(n)))
        return cls(ring, tuple(gens), **kw)

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def weights(self) -> list:
        return [g.weight for g in self.gens]

    @property
    def polys(self) -> list:
        return [g.poly for g in self.gens]

    def with_gens(self, gens, **kw) -> "ReesAlg":
        kw.setdefault("saturated", False)
        return replace(self, gens=tuple(gens), **kw)

    def __str__(self):
        return format_algebra(self)

    def canonical(self) -> tuple:
        """Order-independent description used for equality of generator sets."""
        return tuple(sorted((g.weight, str(g.poly.monic())) for g in self.gens))

    def check_point(self, p):
        p = p.check(self.ring) if isinstance(p, Stratum) else self.ring.point(p)
        for h in self.exclusions:
            if h.vanishes_at(p):
                raise ExcludedPointError(f"point {p} lies on excluded locus {h} = 0")
        return p


# -- slices and Veronese ---------------------------------------------------------

def degree_slice(G: ReesAlg, n: int) -> Ideal:
    """Generators of I_n: all power products of total weight exactly n."""
    if n < 1:
        raise ValueError("slice index must be positive")
    polys, weights = G.polys, G.weights
    gens = [power_product(polys, a, G.ring) for a in weighted_solutions(weights, n)]
    return Ideal(G.ring, tuple(gens)).reduced()


def _monoid_irreducibles(weights: Sequence[int], M: int, max_weight: int) -> list:
    """Irreducible nonzero a with sum a_i w_i divisible by M and at most max_weight."""
    sols = []
    for total in range(M, max_weight + 1, M):
        sols.extend(weighted_solutions(weights, total))
    sols = [a for a in sols if any(a)]
    sols.sort(key=lambda a: sum(x * w for x, w in zip(a, weights)))
    irreducible = []
    for a in sols:
        if not any(_divides(b, a) and b != a for b in irreducible):
            irreducible.append(a)
    return irreducible


def veronese(G: ReesAlg, M: int, horizons: Horizons = DEFAULT_HORIZONS) -> ReesAlg:
    """Generators of V_M(G): power products whose weight is a multiple of M.

    Irreducible exponent vectors of the monoid {a : M | sum a_i n_i} have
    sum a_i <= M, so a horizon of ``a_max >= max n_i`` is complete.
    """
    if M < 1:
        raise ValueError("M must be positive")
    if not G.gens:
        return G.with_gens(())
    weights = G.weights
    irr = _monoid_irreducibles(weights, M, M * horizons.a_max)
    gens = [WeightedGen(power_product(G.polys, a, G.ring), sum(x * w for x, w in zip(a, weights))) for a in irr]
    gens = [g for g in gens if g.poly]
    return G.with_gens(minimalize(gens), horizon_verified=horizons.a_max >= max(weights))


class Normalized(NamedTuple):
    N: int
    ideal: Ideal
    checked_up_to: int
    method: str


def _structurally_multiplicative(weights, N: int, k: int) -> bool:
    """Every weight-kN exponent vector splits into k weight-N vectors."""
    base = list(weighted_solutions(weights, N))
    reachable = {tuple(0 for _ in weights)}
    for _ in range(k):
        reachable = {tuple(x + y for x, y in zip(r, b)) for r in reachable for b in base}
    return all(a in reachable for a in weighted_solutions(weights, k * N))


def almost_rees_normalize(G: ReesAlg, horizons: Horizons = DEFAULT_HORIZONS) -> Normalized:
    """Find N with V_N(G) = B[I_N W^N], checking I_{kN} = I_N^k for k <= k_check."""
    if not G.gens:
        raise ValueError("cannot normalize the empty algebra")
    weights = G.weights
    M = reduce(math.lcm, weights)
    best = None
    for A in range(1, horizons.a_max + 1):
        N = A * M
        I_N = degree_slice(G, N)
        method, ok = "structural", True
        for k in range(2, horizons.k_check + 1):
            if _structurally_multiplicative(weights, N, k):
                continue
            verdict = degree_slice(G, k * N).equals(I_N.power(k))
            if verdict is None:
                method, ok = "undecided", False
                break
            if not verdict:
                ok = False
                break
            method = "monomial"
        if ok:
            return Normalized(N, I_N, horizons.k_check, method)
        best = best or Normalized(N, I_N, 0, method)
    raise HorizonExceeded(f"no almost-Rees weight found with A <= {horizons.a_max}", best)


# -- minimalization ------------------------------------------------------------

def _monomial_products(monos, target: int, at_least: bool, cap: int):
    """Exponents of power products of weighted monomials with weight == target
    (or in [target, target + cap) when ``at_least``)."""
    hi = target + cap - 1 if at_least else target
    out = []
    weights = [w for _, w in monos]
    for tot in range(target, hi + 1):
        for a in weighted_solutions(weights, tot):
            if not any(a):
                continue
            e = tuple(sum(k * m[0][j] for k, m in zip(a, monos)) for j in range(len(monos[0][0])))
            out.append(e)
    return minimal_exponents(out)


def minimalize(gens: Sequence[WeightedGen], differential: bool = False) -> list:
    """Make generators monic, drop unit-multiple duplicates, and strip terms
    that already lie in the slice generated by the other monomial generators.

    With ``differential`` the slices are assumed decreasing (I_{n+1} in I_n),
    so products of weight >= n also count toward I_n.
    """
    gens = [WeightedGen(g.poly.monic(), g.weight) for g in gens if g.poly]
    gens = list(dict.fromkeys(gens))
    if differential:
        # g W^n with n maximal for each g
        best = {}
        for g in gens:
            best[g.poly] = max(best.get(g.poly, 0), g.weight)
        gens = [g for g in gens if best[g.poly] == g.weight]
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(gens):
            others = [(next(iter(h.poly.terms)), h.weight) for j, h in enumerate(gens)
                      if j != i and h.poly.is_monomial()]
            if not others:
                continue
            cap = max(w for _, w in others)
            reducers = _monomial_products(others, g.weight, differential, cap)
            keep = {e: c for e, c in g.poly.terms.items() if not any(_divides(r, e) for r in reducers)}
            if len(keep) != len(g.poly.terms):
                rest = gens[:i] + gens[i + 1:]
                if keep:
                    ng = WeightedGen(Poly(g.poly.ring, keep).monic(), g.weight)
                    if ng not in rest:
                        rest.insert(i, ng)
                gens = rest
                changed = True
                break
    return sorted(gens, key=lambda g: (g.weight, _gen_sort_key(g.poly)))


def join(G: ReesAlg, K: ReesAlg) -> ReesAlg:
    """Smallest algebra containing both: concatenate generator lists."""
    if G.ring != K.ring:
        raise ValueError(f"chart mismatch: {G.ring.vars} vs {K.ring.vars}")
    excl = tuple(dict.fromkeys(G.exclusions + K.exclusions))
    return ReesAlg(G.ring, G.gens + K.gens, excl, saturated=False)


# -- pointwise notions ---------------------------------------------------------

def sing_membership(G: ReesAlg, p) -> bool:
    """x in Sing G iff nu_x(f_i) >= n_i for every generator."""
    p = G.check_point(p)
    return all(order_at(g.poly, p) >= g.weight for g in G.gens)


def order_at_point(G: ReesAlg, p) -> Fraction:
    """Hironaka order min nu_x(f_i)/n_i at a point of the singular locus."""
    p = G.check_point(p)
    if not G.gens:
        raise ValueError("order of the empty algebra is undefined")
    orders = [order_at(g.poly, p) for g in G.gens]
    if any(o < g.weight for o, g in zip(orders, G.gens)):
        raise NotInSingularLocus(f"{p} is not in Sing of {G}")
    return min(Fraction(o, g.weight) for o, g in zip(orders, G.gens))


def zero_set_membership(G: ReesAlg, p) -> bool:
    p = G.check_point(p)
    return all(g.poly.vanishes_at(p) for g in G.gens)


def sing_ideal(G: ReesAlg) -> Ideal:
    """An ideal whose zero set is Sing G: the weight-one slice of the
    differential saturation, where every derivative of order < n_i of a
    weight-n_i generator sits in weight one."""
    from .diff import diff_saturate
    from .poly import hasse_derivative, multi_indices

    S = G if G.saturated else diff_saturate(G)
    gens = []
    for g in S.gens:
        for alpha in multi_indices(G.ring.ngens, g.weight - 1):
            d = hasse_derivative(g.poly, alpha)
            if d:
                gens.append(d)
    return Ideal(G.ring, tuple(gens)).reduced()


# -- text format ---------------------------------------------------------------

_GEN = re.compile(r"^(.*?)(?:@\s*(\d+))?$", re.S)


def _split_items(body: str) -> list:
    body = body.strip()
    return [s.strip() for s in body.split(",")] if body else []


def algebra_vars(text: str) -> tuple:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"algebra must be enclosed in brackets: {text!r}")
    polys = [_GEN.match(item).group(1) for item in _split_items(body[1:-1])]
    return infer_vars(*polys)


def parse_algebra(text: str, ring: Ring) -> ReesAlg:
    """Parse ``[ z^2 + x^3 @ 2, z @ 1 ]``; a missing weight means 1."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"algebra must be enclosed in brackets: {text!r}")
    gens = []
    for item in _split_items(body[1:-1]):
        m = _GEN.match(item)
        f = parse_poly(m.group(1), ring)
        gens.append(WeightedGen(f, int(m.group(2) or 1)))
    return ReesAlg(ring, tuple(gens))


def format_algebra(G: ReesAlg) -> str:
    return "[" + ", ".join(str(g) for g in G.gens) + "]"


def make_ring(char: int, names) -> Ring:
    return Ring(Field(char), tuple(names))


def parse_algebra_auto(text: str, char: int = 0, vars: Sequence[str] | None = None) -> ReesAlg:
    """Parse an algebra, inferring the variable list when not given."""
    names = tuple(vars) if vars else algebra_vars(text)
    return parse_algebra(text, make_ring(char, names))
