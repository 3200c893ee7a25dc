"""Scenario documents: load, run as a trace, evaluate assertions."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import invariants as inv
from .blowup import (BasicObject, ImpermissibleError, blow_up, change_coordinates,
                     count_permissible_repeats, make_basic_object, product_with_lines,
                     replace_algebra, restrict_open)
from .closure import canonical_compare
from .diff import diff_saturate, restrict_to_hypersurface
from .poly import Field, Ring, Stratum, format_point, parse_poly
from .rees import (DEFAULT_HORIZONS, Horizons, ReesAlg, WeightedGen, almost_rees_normalize,
                   degree_slice, join, order_at_point, parse_algebra, sing_membership, veronese)


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    name: str
    char: int
    vars: tuple
    algebras: dict
    steps: list = field(default_factory=list)
    assertions: list = field(default_factory=list)
    sample: inv.SampleConfig = field(default_factory=inv.SampleConfig)
    horizons: Horizons = DEFAULT_HORIZONS
    description: str = ""

    @classmethod
    def from_dict(cls, doc: dict, horizons: Horizons | None = None) -> "Scenario":
        for key in ("vars", "algebras"):
            if key not in doc:
                raise ScenarioError(f"scenario is missing {key!r}")
        sample = inv.SampleConfig(**doc.get("sample", {}))
        h = horizons or Horizons(**doc.get("horizons", {}))
        return cls(doc.get("name", "scenario"), int(doc.get("char", 0)), tuple(doc["vars"]),
                   dict(doc["algebras"]), list(doc.get("steps", [])), list(doc.get("assertions", [])),
                   sample, h, doc.get("description", ""))

    @classmethod
    def from_json(cls, text: str, horizons: Horizons | None = None) -> "Scenario":
        return cls.from_dict(json.loads(text), horizons)

    def ring(self) -> Ring:
        return Ring(Field(self.char), self.vars)


@dataclass
class Frame:
    index: int
    label: str
    description: str
    bo: BasicObject
    meta: dict = field(default_factory=dict)


@dataclass
class AssertionResult:
    kind: str
    description: str
    passed: bool
    detail: str = ""


@dataclass
class Trace:
    scenario: Scenario
    frames: list
    results: list = field(default_factory=list)
    _samples: dict = field(default_factory=dict, repr=False)
    cache: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.frames)

    def frame_index(self, sel) -> int:
        if sel is None or sel == "final":
            return len(self.frames) - 1
        if sel == "initial":
            return 0
        if isinstance(sel, int):
            return sel if sel >= 0 else len(self.frames) + sel
        for f in self.frames:
            if f.label == sel:
                return f.index
        raise ScenarioError(f"no frame labelled {sel!r}")

    def samples(self, i: int) -> list:
        if i not in self._samples:
            bo = self.frames[i].bo
            self._samples[i] = inv.sample_points(bo.ring, bo.chart.exclusions, self.scenario.sample)
        return self._samples[i]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


# -- loading --------------------------------------------------------------------

def build_algebras(ring: Ring, entries: dict, horizons: Horizons) -> dict:
    """Text algebras, or derived ones: {"saturate": name}, {"join": [a, b]},
    {"veronese": [name, M]}."""
    out = {}
    for name, entry in entries.items():
        if isinstance(entry, str):
            out[name] = parse_algebra(entry, ring)
        elif "saturate" in entry:
            out[name] = diff_saturate(out[entry["saturate"]])
        elif "join" in entry:
            a, b = entry["join"]
            out[name] = join(out[a], out[b] if b in out else parse_algebra(b, ring))
        elif "veronese" in entry:
            a, M = entry["veronese"]
            out[name] = veronese(out[a], int(M), horizons)
        else:
            raise ScenarioError(f"unknown algebra entry for {name}: {entry}")
    return out


def _point(ring: Ring, entry):
    if isinstance(entry, dict) and "generic" in entry:
        return Stratum(entry["generic"]).check(ring)
    if isinstance(entry, dict):
        return ring.point({k: ring.field(v) for k, v in entry.items()})
    return ring.point([ring.field(v) for v in entry])


def apply_step(bo: BasicObject, step: dict, index: int, horizons: Horizons):
    kind = step.get("kind")
    meta = {"kind": kind}
    if kind == "blowup":
        new, exps = blow_up(bo, step["center"], step["chart"], step.get("rename"), index)
        meta.update(center=list(step["center"]), chart=step["chart"], exponents=exps)
        desc = f"blow up V({','.join(step['center'])}) in chart {step['chart']}"
    elif kind == "product":
        names = step.get("vars") or [f"u{index}"]
        new = product_with_lines(bo, names)
        desc = f"product with A^{len(names)} ({','.join(names)})"
    elif kind == "restrict":
        h = parse_poly(str(step["h"]), bo.ring)
        new = restrict_open(bo, h)
        desc = f"restrict to {h} != 0"
    elif kind == "change":
        new = change_coordinates(bo, step["subs"], step.get("rename"))
        desc = "change " + ", ".join(f"{k} = {v}" for k, v in step["subs"].items())
    elif kind == "replace":
        alg = parse_algebra(step["with"], bo.ring)
        new, cmp = replace_algebra(bo, step["algebra"], alg, horizons)
        meta["certificate"] = str(cmp.verdict)
        desc = f"replace {step['algebra']} by {alg}"
    else:
        raise ScenarioError(f"unknown step kind {kind!r}")
    return new, desc, meta


def run_scenario(s: Scenario, evaluate: bool = True) -> Trace:
    ring = s.ring()
    algs = build_algebras(ring, s.algebras, s.horizons)
    bo = make_basic_object(ring, algs, s.horizons)
    frames = [Frame(0, "initial", "start", bo)]
    for i, step in enumerate(s.steps, start=1):
        try:
            bo, desc, meta = apply_step(bo, step, i, s.horizons)
        except ImpermissibleError as exc:
            raise ScenarioError(f"step {i} ({step.get('label', step.get('kind'))}): {exc}") from exc
        frames.append(Frame(i, step.get("label", f"step{i}"), desc, bo, meta))
    trace = Trace(s, frames)
    if evaluate:
        trace.results = [evaluate_assertion(trace, a) for a in s.assertions]
    return trace


# -- assertions -------------------------------------------------------------------

def _frac(v):
    return Fraction(str(v))


def _sweep_points(ring: Ring, base: dict, sweep: list) -> list:
    if not sweep:
        return [base]
    F = ring.field
    if not F.char:
        raise ScenarioError("sweeps need a finite field")
    pts = []
    for vals in itertools.product(range(1, F.char), repeat=len(sweep)):
        p = dict(base)
        p.update(zip(sweep, vals))
        pts.append(p)
    return pts


def evaluate_assertion(trace: Trace, a: dict) -> AssertionResult:
    kind = a.get("kind")
    try:
        passed, desc, detail = _ASSERTIONS[kind](trace, a)
    except KeyError as exc:
        if kind not in _ASSERTIONS:
            return AssertionResult(str(kind), "unknown assertion kind", False, str(kind))
        return AssertionResult(kind, str(a), False, f"error: {exc!r}")
    except Exception as exc:  # an assertion that cannot be evaluated fails
        return AssertionResult(kind, a.get("note", str(a)), False, f"error: {exc}")
    return AssertionResult(kind, a.get("note", desc), bool(passed), detail)


def _a_sing(trace, a):
    i = trace.frame_index(a.get("at"))
    bo = trace.frames[i].bo
    G = bo[a["algebra"]]
    expect = bool(a.get("expect", True))
    if isinstance(a["point"], dict) and "generic" in a["point"]:
        pts = [_point(bo.ring, a["point"])]
    else:
        pts = [_point(bo.ring, p) for p in _sweep_points(bo.ring, a["point"], a.get("sweep", []))]
    got = [sing_membership(G, p) for p in pts]
    ok = all(g == expect for g in got)
    desc = f"Sing {a['algebra']} at step {i} contains {a['point']}" + (" (swept)" if a.get("sweep") else "")
    return ok, desc, f"expected {expect}, got {got} over {len(pts)} point(s)"


def _a_order(trace, a):
    i = trace.frame_index(a.get("at"))
    bo = trace.frames[i].bo
    p = _point(bo.ring, a["point"])
    got = order_at_point(bo[a["algebra"]], p)
    return got == _frac(a["expect"]), f"ord {a['algebra']} at {a['point']} = {a['expect']}", f"got {got}"


def _a_generators(trace, a):
    i = trace.frame_index(a.get("at"))
    bo = trace.frames[i].bo
    G = bo[a["algebra"]]
    want = parse_algebra(a["expect"], bo.ring)
    ok = set(G.canonical()) == set(want.canonical())
    return ok, f"{a['algebra']} at step {i} is {a['expect']}", f"got {G}"


def _a_exponents(trace, a):
    bo = trace.frames[trace.frame_index(a.get("at"))].bo
    got = [t.exponent(a["algebra"]) for t in bo.chart.exceptionals]
    return got == list(a["expect"]), f"exceptional exponents of {a['algebra']} = {a['expect']}", f"got {got}"


def _a_max_blowups(trace, a):
    bo = trace.frames[trace.frame_index(a.get("at"))].bo
    got = count_permissible_repeats(bo, a["center"], a["algebra"])
    return got == int(a["expect"]), f"{a['algebra']} admits {a['expect']} blow-ups of V({','.join(a['center'])})", f"got {got}"


def _a_sing_equal(trace, a):
    names = a["algebras"]
    frames = [trace.frame_index(a.get("at"))] if "at" in a else range(len(trace.frames))
    checked, bad = 0, []
    for i in frames:
        bo = trace.frames[i].bo
        pts = trace.samples(i) + [tuple(bo.ring.field(c) for c in p)
                                  for p in inv.random_rational_points(bo.ring, int(a.get("random", 0)), i)]
        for p in pts:
            vals = [sing_membership(bo[n], p) for n in names]
            checked += 1
            if len(set(vals)) > 1:
                bad.append((i, format_point(p), vals))
    return not bad, f"Sing agrees for {', '.join(names)}", f"{checked} points, mismatches {bad[:3]}"


def _a_word(trace, a):
    i = trace.frame_index(a.get("at"))
    p = _point(trace.frames[i].bo.ring, a["point"])
    got = inv.word_at(trace, i, p, a["algebra"])
    return got == _frac(a["expect"]), f"w-ord {a['algebra']} at step {i}, {a['point']} = {a['expect']}", f"got {got}"


def _a_t(trace, a):
    i = trace.frame_index(a.get("at"))
    p = _point(trace.frames[i].bo.ring, a["point"])
    got = inv.t_at(trace, i, p, a["algebra"])
    want = (_frac(a["expect"][0]), int(a["expect"][1]))
    return got == want, f"t {a['algebra']} at step {i} = {a['expect']}", f"got ({got[0]}, {got[1]})"


def _a_word_identity(trace, a):
    name = a["algebra"]
    checked, bad = 0, []
    for i in range(len(trace.frames)):
        for p in inv.singular_samples(trace, i, name):
            w1 = inv.word_at(trace, i, p, name)
            w2 = inv.word_via_exponents(trace, i, p, name)
            checked += 1
            if w1 != w2:
                bad.append((i, format_point(p), str(w1), str(w2)))
    return (not bad and checked > 0), f"w-ord = ord - sum exp for {name} on every frame", \
        f"{checked} singular sample points, mismatches {bad[:3]}"


def _a_t_monotone(trace, a):
    name = a["algebra"]
    checked, bad = 0, []
    for f in trace.frames[1:]:
        if f.meta.get("kind") != "blowup":
            continue
        i = f.index - 1
        before = inv.max_t(trace, i, name)
        if before is None:
            continue
        centre = Stratum(f.meta["center"])
        if inv.t_at(trace, i, centre, name) != before:
            continue  # not t-permissible
        after = inv.max_t(trace, f.index, name)
        checked += 1
        if after is not None and after > before:
            bad.append((f.index, str(before), str(after)))
    ok = not bad and checked >= int(a.get("min_checked", 0))
    return ok, f"max t of {name} non-increasing along t-permissible blow-ups", \
        f"{checked} t-permissible steps checked, increases {bad}"


def _a_restriction(trace, a):
    """Restriction: Sing(G join vW) on {v=0} equals Sing of the
    restriction of the saturation."""
    i = trace.frame_index(a.get("at"))
    bo = trace.frames[i].bo
    G, v = bo[a["algebra"]], a["var"]
    ring = bo.ring
    X = join(G, ReesAlg(ring, (WeightedGen(ring.gen(v), 1),)))
    R = restrict_to_hypersurface(diff_saturate(G), v)
    raw_gens = tuple(WeightedGen(g.poly.substitute({v: R.ring.zero()}, R.ring), g.weight)
                     for g in G.gens if g.poly.substitute({v: R.ring.zero()}, R.ring))
    raw = ReesAlg(R.ring, raw_gens)
    pts = inv.sample_points(R.ring, (), trace.scenario.sample)
    pts += inv.random_rational_points(R.ring, int(a.get("random", 0)), 1)
    bad, raw_diff, checked = [], 0, 0
    for q in pts:
        if isinstance(q, Stratum):
            lifted = Stratum(set(q.vars) | {v})
        else:
            vals = dict(zip(R.ring.vars, q))
            vals[v] = 0
            lifted = ring.point(vals)
        lhs = sing_membership(X, lifted)
        rhs = sing_membership(R, q)
        checked += 1
        if lhs != rhs:
            bad.append(format_point(q))
        if sing_membership(raw, q) != lhs:
            raw_diff += 1
    ok = not bad
    if "raw_differs" in a:
        ok = ok and (raw_diff > 0) == bool(a["raw_differs"])
    return ok, f"restriction of {a['algebra']} to {v} = 0", \
        f"{checked} points, mismatches {bad[:3]}, raw restriction differs at {raw_diff}"


def _a_normalize(trace, a):
    i = trace.frame_index(a.get("at"))
    bo = trace.frames[i].bo
    G = bo[a["algebra"]]
    res = almost_rees_normalize(G, trace.scenario.horizons)
    want = parse_algebra("[" + a["ideal"] + "]", bo.ring)
    from .rees import Ideal
    ok = res.N == int(a["N"]) and res.ideal.equals(Ideal(bo.ring, tuple(want.polys))) is True
    k_ok = all(degree_slice(G, k * res.N).equals(res.ideal.power(k)) is True
               for k in range(1, int(a.get("k", 4)) + 1))
    return ok and k_ok, f"normalize {a['algebra']} -> N={a['N']}, I=<{a['ideal']}>", \
        f"got N={res.N}, I={res.ideal}, multiplicative up to k={a.get('k', 4)}: {k_ok}"


def _a_veronese_invariance(trace, a):
    i = trace.frame_index(a.get("at"))
    bo = trace.frames[i].bo
    G = bo[a["algebra"]]
    V = veronese(G, int(a["M"]), trace.scenario.horizons)
    pts = trace.samples(i)[: int(a.get("points", 10**9))]
    bad = []
    for p in pts:
        s1, s2 = sing_membership(G, p), sing_membership(V, p)
        if s1 != s2 or (s1 and order_at_point(G, p) != order_at_point(V, p)):
            bad.append(format_point(p))
    return not bad and V.horizon_verified, f"Sing and ord of {a['algebra']} agree with its Veronese V_{a['M']}", \
        f"{len(pts)} points, mismatches {bad[:3]}"


def _a_compare(trace, a):
    i = trace.frame_index(a.get("at"))
    bo = trace.frames[i].bo
    cmp = canonical_compare(bo[a["left"]], bo[a["right"]], trace.scenario.horizons)
    if "direction" in a:
        got = (cmp.left_in_right if a["direction"] == "left_in_right" else cmp.right_in_left).value
    else:
        got = cmp.verdict.value
    what = a.get("direction", "verdict")
    return got == a["expect"], f"compare {a['left']} vs {a['right']} ({what}): {a['expect']}", \
        f"{what} = {got}; overall {cmp.verdict}"


_ASSERTIONS = {
    "sing": _a_sing,
    "order": _a_order,
    "generators": _a_generators,
    "exponents": _a_exponents,
    "max_blowups": _a_max_blowups,
    "sing_equal": _a_sing_equal,
    "word": _a_word,
    "t": _a_t,
    "word_identity": _a_word_identity,
    "t_monotone": _a_t_monotone,
    "restriction": _a_restriction,
    "normalize": _a_normalize,
    "veronese_invariance": _a_veronese_invariance,
    "compare": _a_compare,
}


def format_trace(trace: Trace, show_algebras: bool = False) -> str:
    lines = [f"scenario {trace.scenario.name} (char {trace.scenario.char}), {len(trace.frames)} frames"]
    for f in trace.frames:
        if show_algebras or f.index == len(trace.frames) - 1:
            lines.append(f"[{f.index}] {f.label}: {f.description}")
            lines.append(f"    vars {', '.join(f.bo.ring.vars)}")
            for n in f.bo.names():
                lines.append(f"    {n} = {f.bo[n]}")
            if f.meta.get("exponents"):
                lines.append(f"    exponents {f.meta['exponents']}")
            if f.meta.get("certificate"):
                lines.append(f"    certified: {f.meta['certificate']}")
    for r in trace.results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.kind}: {r.description} ({r.detail})")
    return "\n".join(lines)


def trace_to_dict(trace: Trace) -> dict:
    return {
        "scenario": trace.scenario.name,
        "char": trace.scenario.char,
        "frames": [{
            "index": f.index, "label": f.label, "description": f.description,
            "vars": list(f.bo.ring.vars),
            "algebras": {n: str(f.bo[n]) for n in f.bo.names()},
            "exceptionals": [{"id": t.id, "born_at": t.born_at, "var": t.var,
                              "exponents": dict(t.exponents)} for t in f.bo.chart.exceptionals],
            "exclusions": [str(h) for h in f.bo.chart.exclusions],
            "meta": {k: v for k, v in f.meta.items()},
        } for f in trace.frames],
        "assertions": [{"kind": r.kind, "description": r.description, "passed": r.passed,
                        "detail": r.detail} for r in trace.results],
        "passed": trace.passed,
    }
