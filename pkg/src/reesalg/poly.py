"""Exact multivariate polynomials over Q and F_p.

Coefficients are ``Fraction`` in characteristic zero and plain ``int``
residues in ``range(p)`` otherwise. Polynomials are immutable; terms are kept
in a dict keyed by exponent tuples and printed in descending graded-lex order.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class DimensionError(ValueError):
    """Exponent vector or point does not match the number of variables."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class Field:
    """Q when ``char == 0``, otherwise the prime field F_p."""

    char: int = 0

    def __post_init__(self):
        if self.char != 0 and not _is_prime(self.char):
            raise ValueError(f"characteristic must be 0 or prime, got {self.char}")

    def __call__(self, x) -> "Fraction | int":
        """Coerce an int, Fraction or numeric string into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.char == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.char}")
            return x.numerator * pow(x.denominator, -1, self.char) % self.char
        return int(x) % self.char

    def reduce(self, c):
        return c % self.char if self.char else c

    def inv(self, c):
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(c, -1, self.char) if self.char else 1 / Fraction(c)

    def binom(self, n: int, k: int):
        return self.reduce(math.comb(n, k)) if self.char else math.comb(n, k)

    def elements(self) -> list:
        """All elements of a finite field (raises for Q)."""
        if not self.char:
            raise ValueError("Q is infinite")
        return list(range(self.char))

    def frobenius_root(self, c):
        """The p-th root of ``c``; on the prime field this is ``c`` itself."""
        return self(c)

    def __str__(self):
        return "QQ" if self.char == 0 else f"GF({self.char})"


@dataclass(frozen=True)
class Ring:
    """Polynomial ring k[vars] with an ordered tuple of variable names."""

    field: Field
    vars: tuple

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate variable names in {self.vars}")
        for v in self.vars:
            if not _IDENT.fullmatch(v):
                raise ValueError(f"bad variable name {v!r}")

    @property
    def ngens(self) -> int:
        return len(self.vars)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a variable of {self.vars}") from None

    def gen(self, name: str) -> "Poly":
        e = [0] * self.ngens
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): self.field(1)})

    def gens(self) -> list:
        return [self.gen(v) for v in self.vars]

    def const(self, c) -> "Poly":
        c = self.field(c)
        return Poly(self, {(0,) * self.ngens: c} if c else {})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def with_vars(self, names: Sequence[str]) -> "Ring":
        return Ring(self.field, tuple(names))

    def point(self, coords) -> tuple:
        """Coerce coordinates (sequence or name->value mapping) to a point."""
        if isinstance(coords, Mapping):
            missing = set(self.vars) - set(coords)
            extra = set(coords) - set(self.vars)
            if missing or extra:
                raise DimensionError(f"point keys {sorted(coords)} do not match {self.vars}")
            coords = [coords[v] for v in self.vars]
        coords = tuple(self.field(c) for c in coords)
        if len(coords) != self.ngens:
            raise DimensionError(f"point has {len(coords)} coordinates, ring has {self.ngens}")
        return coords

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)


def _grlex_key(e):
    return (sum(e), e)


class Poly:
    """Immutable polynomial: ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping = ()):
        red = ring.field.reduce
        clean = {}
        for e, c in dict(terms).items():
            c = red(c)
            if c:
                if len(e) != ring.ngens:
                    raise DimensionError(f"exponent {e} for ring with {ring.ngens} vars")
                clean[tuple(e)] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    # -- basic protocol -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)

    @property
    def field(self) -> Field:
        return self.ring.field

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def leading(self):
        """Leading (exponent, coefficient) in descending grlex order."""
        return max(self.terms.items(), key=lambda kv: _grlex_key(kv[0]))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> float:
        return min((sum(e) for e in self.terms), default=math.inf)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        if len(self.terms) == 1 and next(iter(self.terms.values())) == 1:
            return self
        return self.scale(self.field.inv(self.leading()[1]))

    def constant_term(self):
        return self.terms.get((0,) * self.ring.ngens, self.field(0))

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring.vars} vs {other.ring.vars}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = self.field(c) if not isinstance(c, (int, Fraction)) else c
        return Poly(self.ring, {e: c * v for e, v in self.terms.items()})

    def divmod(self, h: "Poly"):
        """Division by a single polynomial under grlex; exact iff remainder is 0."""
        h = self._coerce(h)
        if not h:
            raise ZeroDivisionError("division by zero polynomial")
        lt_e, lt_c = h.leading()
        inv = self.field.inv(lt_c)
        q, r, f = {}, {}, dict(self.terms)
        while f:
            e = max(f, key=_grlex_key)
            c = f[e]
            if all(a >= b for a, b in zip(e, lt_e)):
                de = tuple(a - b for a, b in zip(e, lt_e))
                qc = self.field.reduce(c * inv)
                q[de] = qc
                for he, hc in h.terms.items():
                    te = tuple(a + b for a, b in zip(de, he))
                    v = self.field.reduce(f.get(te, 0) - qc * hc)
                    if v:
                        f[te] = v
                    else:
                        f.pop(te, None)
            else:
                r[e] = c
                del f[e]
        return Poly(self.ring, q), Poly(self.ring, r)

    def exact_div(self, h: "Poly") -> "Poly":
        q, r = self.divmod(h)
        if r:
            raise ArithmeticError(f"{h} does not divide {self}")
        return q

    # -- evaluation and substitution -------------------------------------
    def __call__(self, point) -> "Fraction | int":
        return self.evaluate(point)

    def vanishes_at(self, point) -> bool:
        if isinstance(point, Stratum):
            return point.check(self.ring).vanishes(self)
        return self.evaluate(point) == 0

    def evaluate(self, point):
        point = self.ring.point(point)
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total += term
        return self.field.reduce(total)

    def substitute(self, images: Mapping, ring: Ring | None = None) -> "Poly":
        """Replace each variable by a polynomial of ``ring`` (default: same ring).

        ``images`` maps variable names of ``self.ring`` to ``Poly`` objects;
        variables missing from ``images`` must exist in the target ring and are
        kept as they are.
        """
        ring = ring or self.ring
        imgs = []
        for v in self.ring.vars:
            if v in images:
                img = images[v]
                imgs.append(img if isinstance(img, Poly) else ring.const(img))
            else:
                imgs.append(ring.gen(v))
        cache = {}
        out = ring.zero()
        for e, c in self.terms.items():
            term = ring.const(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = imgs[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def coefficient_in(self, var: str, k: int) -> "Poly":
        """Coefficient of ``var**k`` as a polynomial in the remaining variables."""
        i = self.ring.index(var)
        return Poly(self.ring, {e[:i] + (0,) + e[i + 1:]: c for e, c in self.terms.items() if e[i] == k})

    def vars_used(self) -> set:
        used = set()
        for e in self.terms:
            used.update(v for v, k in zip(self.ring.vars, e) if k)
        return used


# -- the operations consumed by the rest of the package -----------------------

def hasse_derivative(f: Poly, alpha: Sequence[int]) -> Poly:
    """Coefficient of T^alpha in f(z + T), with binomials reduced mod p."""
    alpha = tuple(alpha)
    if len(alpha) != f.ring.ngens:
        raise DimensionError(f"alpha {alpha} for ring with {f.ring.ngens} vars")
    if any(a < 0 for a in alpha):
        raise ValueError("negative multi-index")
    out = {}
    binom = f.field.binom
    for e, c in f.terms.items():
        if any(k < a for k, a in zip(e, alpha)):
            continue
        coeff = c
        for k, a in zip(e, alpha):
            if a:
                coeff = coeff * binom(k, a)
        if coeff:
            ne = tuple(k - a for k, a in zip(e, alpha))
            out[ne] = out.get(ne, 0) + coeff
    return Poly(f.ring, out)


def multi_indices(nvars: int, max_total: int):
    """All alpha in N^nvars with |alpha| <= max_total, by increasing |alpha|."""
    for total in range(max_total + 1):
        for cut in itertools.combinations(range(total + nvars - 1), nvars - 1):
            prev, alpha = -1, []
            for c in cut + (total + nvars - 1,):
                alpha.append(c - prev - 1)
                prev = c
            yield tuple(alpha)


def translate(f: Poly, p) -> Poly:
    """f(z + p)."""
    p = f.ring.point(p)
    field = f.field
    out = {}
    for e, c in f.terms.items():
        parts = []
        for k, x in zip(e, p):
            if x == 0:
                parts.append(((k, 1),))
            else:
                parts.append(tuple((j, math.comb(k, j) * x ** (k - j)) for j in range(k + 1)))
        for combo in itertools.product(*parts):
            coeff = c
            for _, w in combo:
                coeff = coeff * w
            ne = tuple(j for j, _ in combo)
            out[ne] = out.get(ne, 0) + coeff
    return Poly(f.ring, {e: field.reduce(c) for e, c in out.items()})


@dataclass(frozen=True)
class Stratum:
    """The generic point of the coordinate subvariety V(vars)."""

    vars: frozenset

    def __init__(self, names):
        object.__setattr__(self, "vars", frozenset(names))

    def __str__(self):
        return "generic(" + ",".join(sorted(self.vars)) + ")"

    def check(self, ring: Ring) -> "Stratum":
        for v in self.vars:
            ring.index(v)
        return self

    def vanishes(self, f: Poly) -> bool:
        """Whether f vanishes identically on V(vars)."""
        return order_along(f, self.vars) >= 1


def order_at(f: Poly, p) -> float:
    """nu_p(f): least degree of a term of f(z + p); ``math.inf`` for f = 0.

    For a ``Stratum`` this is the order at the generic point of V(vars).
    """
    if isinstance(p, Stratum):
        return order_along(f, p.check(f.ring).vars)
    p = f.ring.point(p)
    if not any(p):
        return f.min_degree()
    return translate(f, p).min_degree()


def order_along(f: Poly, names: Iterable[str]) -> float:
    """Order of f at the generic point of the coordinate subvariety V(names)."""
    idx = [f.ring.index(v) for v in names]
    return min((sum(e[i] for i in idx) for e in f.terms), default=math.inf)


def divisor_order(f: Poly, var: str) -> int:
    """Largest k with var**k dividing f."""
    if not f:
        raise ValueError("divisor order of the zero polynomial is undefined")
    i = f.ring.index(var)
    return min(e[i] for e in f.terms)


def poly_divisor_order(f: Poly, h: Poly) -> int:
    """Largest k with h**k dividing f, for a nonconstant h."""
    if not f:
        raise ValueError("divisor order of the zero polynomial is undefined")
    if h.is_constant():
        raise ValueError("divisor must be nonconstant")
    if h.is_monomial() and sum(next(iter(h.terms))) == 1:
        return divisor_order(f, h.ring.vars[next(iter(h.terms)).index(1)])
    k = 0
    while True:
        q, r = f.divmod(h)
        if r:
            return k
        f, k = q, k + 1


def strip_variable(f: Poly, var: str, k: int | None = None) -> Poly:
    """Divide f by var**k (default: the full divisor order)."""
    i = f.ring.index(var)
    if k is None:
        k = divisor_order(f, var)
    if any(e[i] < k for e in f.terms):
        raise ArithmeticError(f"{var}^{k} does not divide {f}")
    return Poly(f.ring, {e[:i] + (e[i] - k,) + e[i + 1:]: c for e, c in f.terms.items()})


def initial_form(f: Poly, p) -> Poly:
    """Lowest-degree homogeneous part of f(z + p), in the same variable names."""
    if not f:
        raise ValueError("initial form of the zero polynomial is undefined")
    g = translate(f, p)
    d = g.min_degree()
    return Poly(g.ring, {e: c for e, c in g.terms.items() if sum(e) == d})


def format_point(p) -> str:
    if isinstance(p, Stratum):
        return str(p)
    return "(" + ", ".join(str(c) for c in p) + ")"


def monomial(ring: Ring, exps: Sequence[int], coeff=1) -> Poly:
    return Poly(ring, {tuple(exps): ring.field(coeff)})


# -- text format ----------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    pass


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            out.append(("var", ident))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind} in {self.text!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.toks:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term().scale(sign)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            f = self.factor()
            if op == "*":
                acc = acc * f
            else:
                if not f.is_constant() or not f:
                    raise ParseError("can only divide by nonzero constants")
                acc = acc.scale(self.ring.field.inv(f.constant_term()))
        return acc

    def factor(self) -> Poly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exp = self.take("num")[1]
            return base**exp
        return base

    def atom(self) -> Poly:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return self.ring.const(val)
        if kind == "var":
            self.take()
            return self.ring.gen(val)
        if (kind, val) == ("op", "("):
            self.take()
            p = self.expr()
            self.take("op", ")")
            return p
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.factor()
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse e.g. ``"z^2 + x^3"`` or ``"t^2*x2^3 - 1/2*x"`` in ``ring``."""
    return _Parser(text, ring).parse()


def infer_vars(*texts: str) -> tuple:
    """Variable names in order of first appearance across ``texts``."""
    seen = []
    for t in texts:
        for kind, val in _tokenize(t):
            if kind == "var" and val not in seen:
                seen.append(val)
    return tuple(seen)


def _format_coeff(c, field: Field) -> str:
    if field.char:
        return str(c)
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    parts = []
    for e, c in f.sorted_terms():
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(f.ring.vars, e) if k)
        neg = (not f.field.char) and c < 0
        mag = -c if neg else c
        cs = _format_coeff(mag, f.field)
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        parts.append(("-" if neg else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
