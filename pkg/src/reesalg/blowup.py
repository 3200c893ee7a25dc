"""Charts, exceptional divisors and local sequences.

A local sequence is run one chart at a time: blow-ups at coordinate centers,
products with affine lines, open restrictions, affine changes of coordinates,
and replacements of an algebra by one with the same closure.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .closure import canonical_compare
from .poly import Poly, Ring, order_along, parse_poly, poly_divisor_order, strip_variable
from .rees import (DEFAULT_HORIZONS, HorizonExceeded, Horizons, ReesAlg, WeightedGen,
                   almost_rees_normalize, degree_slice)


class ImpermissibleError(ValueError):
    pass


@dataclass(frozen=True)
class DivisorTag:
    """An exceptional hypersurface. ``var`` is its defining chart variable, or
    None when its strict transform misses this chart. ``exponents`` holds the
    exponent b_j recorded for each algebra when the divisor was created."""

    id: int
    born_at: int
    var: str | None
    exponents: tuple = ()

    @property
    def visible(self) -> bool:
        return self.var is not None

    def exponent(self, name: str) -> int:
        return dict(self.exponents).get(name, 0)


@dataclass(frozen=True)
class Chart:
    ring: Ring
    exceptionals: tuple = ()
    exclusions: tuple = ()
    lineage: tuple = ()

    @property
    def vars(self) -> tuple:
        return self.ring.vars

    @property
    def field(self):
        return self.ring.field

    def visible(self) -> list:
        return [e for e in self.exceptionals if e.visible]


@dataclass(frozen=True)
class BasicObject:
    """A chart with named algebras sharing it, and the exceptional list E.

    ``pair_weights`` fixes the weight N used to read each algebra as the pair
    (I_N, N) for the satellite functions.
    """

    chart: Chart
    algebras: tuple = ()
    pair_weights: tuple = ()

    def __post_init__(self):
        for name, alg in self.algebras:
            if alg.ring != self.chart.ring:
                raise ValueError(f"algebra {name} is not on the chart ring")

    @property
    def ring(self) -> Ring:
        return self.chart.ring

    @property
    def e_list(self) -> tuple:
        return self.chart.exceptionals

    def names(self) -> list:
        return [n for n, _ in self.algebras]

    def __getitem__(self, name: str) -> ReesAlg:
        for n, a in self.algebras:
            if n == name:
                return a
        raise KeyError(f"no algebra named {name!r}")

    def weight(self, name: str) -> int:
        return dict(self.pair_weights)[name]

    def with_algebras(self, algs: Mapping, chart: Chart | None = None) -> "BasicObject":
        chart = chart or self.chart
        out = tuple((n, replace(a, exclusions=chart.exclusions)) for n, a in algs.items())
        return BasicObject(chart, out, self.pair_weights)


def pair_weight(G: ReesAlg, horizons: Horizons = DEFAULT_HORIZONS) -> int:
    """N with V_N(G) almost-Rees; falls back to the lcm of the weights."""
    if not G.gens:
        return 1
    try:
        return almost_rees_normalize(G, horizons).N
    except HorizonExceeded:
        return math.lcm(*G.weights)


def make_basic_object(ring: Ring, algebras: Mapping, horizons: Horizons = DEFAULT_HORIZONS) -> BasicObject:
    chart = Chart(ring)
    algs = tuple((n, a) for n, a in algebras.items())
    weights = tuple((n, pair_weight(a, horizons)) for n, a in algs)
    return BasicObject(chart, algs, weights)


# -- permissibility ----------------------------------------------------------------

def center_defect(G: ReesAlg, center: Sequence[str]):
    """First generator whose order along V(center) is below its weight."""
    for g in G.gens:
        if order_along(g.poly, center) < g.weight:
            return g
    return None


def check_permissible(bo, center: Sequence[str], names: Sequence[str] | None = None) -> bool:
    """V(center) lies in Sing of every algebra and has normal crossings with E."""
    algs = [bo] if isinstance(bo, ReesAlg) else [bo[n] for n in (names or bo.names())]
    ring = algs[0].ring
    if not center or any(v not in ring.vars for v in center):
        return False
    if not isinstance(bo, ReesAlg) and any(e.var not in ring.vars for e in bo.chart.visible()):
        return False
    return all(center_defect(a, center) is None for a in algs)


def _bump(name: str) -> str:
    m = re.fullmatch(r"(.*?)(\d+)", name)
    return f"{m.group(1)}{int(m.group(2)) + 1}" if m else f"{name}1"


def blow_up(bo: BasicObject, center: Sequence[str], chart_var: str, rename: Mapping | None = None,
            index: int = 0, names: Sequence[str] | None = None) -> tuple:
    """Blow up V(center) and follow the chart where ``chart_var`` generates the
    exceptional ideal. Returns (new object, recorded exponents)."""
    center = list(center)
    ring = bo.ring
    if chart_var not in center:
        raise ValueError(f"chart variable {chart_var} is not in the center {center}")
    for v in center:
        ring.index(v)
    names = list(names or bo.names())
    for n in names:
        bad = center_defect(bo[n], center)
        if bad is not None:
            raise ImpermissibleError(f"center V({','.join(center)}) is not in Sing {n}: generator {bad}")
    rename = dict(rename or {})
    newnames = {}
    for v in ring.vars:
        if v in center and v != chart_var:
            newnames[v] = rename.get(v, _bump(v))
        else:
            newnames[v] = rename.get(v, v)
    if len(set(newnames.values())) != len(newnames):
        raise ValueError(f"renaming produces duplicate variables: {newnames}")
    new_ring = ring.with_vars([newnames[v] for v in ring.vars])
    c = new_ring.gen(newnames[chart_var])
    images = {v: (c * new_ring.gen(newnames[v]) if v in center and v != chart_var else new_ring.gen(newnames[v]))
              for v in ring.vars}
    cname = newnames[chart_var]

    exps = {}
    for n in names:
        N = bo.weight(n)
        J = degree_slice(bo[n], N)
        ordY = min((order_along(f, center) for f in J.gens), default=N)
        exps[n] = int(ordY - N) if ordY != math.inf else 0

    algs = {}
    for n, G in bo.algebras:
        if n not in names:
            continue
        gens = []
        for g in G.gens:
            f = g.poly.substitute(images, new_ring)
            gens.append(WeightedGen(strip_variable(f, cname, g.weight), g.weight))
        algs[n] = ReesAlg(new_ring, tuple(gens))

    tags = []
    for e in bo.chart.exceptionals:
        if not e.visible:
            tags.append(e)
            continue
        img = images[e.var]
        k = order_along(img, [cname])
        strict = strip_variable(img, cname, k)
        tags.append(replace(e, var=None if strict.is_constant() else next(iter(strict.vars_used()))))
    new_id = 1 + max((e.id for e in bo.chart.exceptionals), default=0)
    tags.append(DivisorTag(new_id, index, cname, tuple(sorted(exps.items()))))
    excl = tuple(h.substitute(images, new_ring) for h in bo.chart.exclusions)
    chart = Chart(new_ring, tuple(tags), excl,
                  bo.chart.lineage + (f"blow up V({','.join(center)}), chart {chart_var}",))
    weights = tuple(p for p in bo.pair_weights if p[0] in names)
    out = BasicObject(chart, (), weights).with_algebras(algs)
    return out, exps


def count_permissible_repeats(bo: BasicObject, center: Sequence[str], name: str, limit: int = 1000) -> int:
    """How many times V(center) can be blown up in a row while staying
    permissible for algebra ``name`` (codimension-one centers re-blow the
    newest divisor)."""
    if len(center) != 1:
        raise ValueError("repeated blow-ups are counted for hypersurface centers")
    count = 0
    cur = bo
    while count < limit and check_permissible(cur, center, [name]):
        cur, _ = blow_up(cur, center, center[0], names=[name])
        count += 1
    return count


def product_with_lines(bo: BasicObject, new_vars: Sequence[str]) -> BasicObject:
    """V x A^k: append variables; everything else pulls back unchanged."""
    new_vars = list(new_vars)
    if not new_vars:
        return bo
    ring = bo.ring.with_vars(bo.ring.vars + tuple(new_vars))
    algs = {n: ReesAlg(ring, tuple(WeightedGen(g.poly.substitute({}, ring), g.weight) for g in a.gens))
            for n, a in bo.algebras}
    excl = tuple(h.substitute({}, ring) for h in bo.chart.exclusions)
    chart = Chart(ring, bo.chart.exceptionals, excl, bo.chart.lineage + (f"product with A^{len(new_vars)}",))
    return bo.with_algebras(algs, chart)


def restrict_open(bo: BasicObject, h: Poly) -> BasicObject:
    """Restrict to {h != 0}; powers of h dividing a generator are units there
    and are divided out."""
    if not h:
        raise ValueError("cannot restrict to the complement of the whole space")
    if h.is_constant():
        return bo
    notes = []
    algs = {}
    for n, a in bo.algebras:
        gens = []
        for g in a.gens:
            f = g.poly
            k = poly_divisor_order(f, h)
            if k:
                f = f.exact_div(h**k)
                notes.append(f"{n}: divided {g.poly} by ({h})^{k}")
            gens.append(WeightedGen(f, g.weight))
        algs[n] = ReesAlg(bo.ring, tuple(gens))
    chart = replace(bo.chart, exclusions=bo.chart.exclusions + (h,),
                    lineage=bo.chart.lineage + (f"restrict to {h} != 0",) + tuple(notes))
    return bo.with_algebras(algs, chart)


def _rank(rows, field) -> int:
    rows = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.reduce(v * inv) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [field.reduce(a - f * b) for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def linear_rank(forms: Sequence[Poly]) -> int:
    """Rank of the linear parts of degree-one polynomials."""
    if not forms:
        return 0
    ring = forms[0].ring
    rows = []
    for f in forms:
        row = [0] * ring.ngens
        for e, c in f.terms.items():
            if sum(e) == 1:
                row[e.index(1)] = c
        rows.append(row)
    return _rank(rows, ring.field)


def change_coordinates(bo: BasicObject, subs: Mapping, rename: Mapping | None = None) -> BasicObject:
    """Rewrite through old_var = subs[old_var] (polynomials in the new names).

    The map must be affine and invertible; exceptional divisors must stay
    coordinate hyperplanes.
    """
    rename = dict(rename or {})
    ring = bo.ring
    new_ring = ring.with_vars([rename.get(v, v) for v in ring.vars])
    images = {}
    for v in ring.vars:
        img = subs.get(v)
        if img is None:
            img = new_ring.gen(rename.get(v, v))
        elif isinstance(img, str):
            img = parse_poly(img, new_ring)
        if img.degree() > 1:
            raise ValueError(f"substitution for {v} is not affine: {img}")
        images[v] = img
    if linear_rank(list(images.values())) != ring.ngens:
        raise ValueError("coordinate change is not invertible")
    tags = []
    for e in bo.chart.exceptionals:
        if not e.visible:
            tags.append(e)
            continue
        img = images[e.var]
        if not (img.is_monomial() and img.degree() == 1):
            raise ValueError(f"divisor {e.var} = 0 would not stay a coordinate hyperplane")
        tags.append(replace(e, var=next(iter(img.vars_used()))))
    algs = {n: ReesAlg(new_ring, tuple(WeightedGen(g.poly.substitute(images, new_ring), g.weight) for g in a.gens))
            for n, a in bo.algebras}
    excl = tuple(h.substitute(images, new_ring) for h in bo.chart.exclusions)
    desc = ", ".join(f"{v} = {images[v]}" for v in ring.vars if v in subs)
    chart = Chart(new_ring, tuple(tags), excl, bo.chart.lineage + (f"change {desc}",))
    return bo.with_algebras(algs, chart)


def inverse_substitution(subs: Mapping, old_ring: Ring, new_ring: Ring) -> dict:
    """Invert an affine substitution old = A(new) + c; returns new = ... in old names."""
    field = old_ring.field
    n = old_ring.ngens
    imgs = []
    for v in old_ring.vars:
        img = subs.get(v, new_ring.gen(new_ring.vars[old_ring.index(v)]))
        if isinstance(img, str):
            img = parse_poly(img, new_ring)
        imgs.append(img)
    # augmented system: A * new = old - c
    rows = []
    for i, img in enumerate(imgs):
        row = [0] * n
        for e, c in img.terms.items():
            if sum(e) == 1:
                row[e.index(1)] = c
        rows.append(row)
    consts = [img.constant_term() for img in imgs]
    m = [r + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(i for i in range(col, n) if m[i][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = field.inv(m[col][col])
        m[col] = [field.reduce(x * inv) for x in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [field.reduce(a - f * b) for a, b in zip(m[i], m[col])]
    out = {}
    olds = [old_ring.gen(v) for v in old_ring.vars]
    for j, w in enumerate(new_ring.vars):
        expr = old_ring.zero()
        for i in range(n):
            coef = m[j][n + i]
            if coef:
                expr = expr + (olds[i] - consts[i]).scale(coef)
        out[w] = expr
    return out


def replace_algebra(bo: BasicObject, name: str, new: ReesAlg, horizons: Horizons = DEFAULT_HORIZONS):
    """Swap an algebra for one certified to have the same closure."""
    old = bo[name]
    cmp = canonical_compare(old, new, horizons)
    if cmp.verdict.value != "equivalent":
        raise ValueError(f"replacement for {name} not certified: {cmp.verdict}")
    algs = {n: (new if n == name else a) for n, a in bo.algebras}
    chart = replace(bo.chart, lineage=bo.chart.lineage + (f"replace {name} by {new} ({cmp.verdict.certificate})",))
    return bo.with_algebras(algs, chart), cmp
