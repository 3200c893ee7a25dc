"""Built-in scenarios replaying worked local sequences."""
from __future__ import annotations

from dataclasses import dataclass

from .rees import Horizons
from .scenario import Scenario, format_trace, run_scenario, trace_to_dict


@dataclass(frozen=True)
class BuiltinScenario:
    name: str
    description: str
    documents: tuple
    expected_pass: bool = True


def char2_counterexample() -> dict:
    final = {"z5": 0, "x5": 1, "t5": 1, "s": 0}
    return {
        "name": "char2-counterexample",
        "char": 2,
        "vars": ["z", "x"],
        "algebras": {
            "G": "[z^2 + x^3 @ 2]",
            "H": "[x^3*(x+1)^2 @ 2, z^2 + x^3 @ 2]",
        },
        "steps": [
            {"kind": "restrict", "h": "x + 1", "label": "step0"},
            {"kind": "replace", "algebra": "H", "with": "[z @ 1, x^3 @ 2]", "label": "step0-closure"},
            {"kind": "product", "vars": ["t"], "label": "step1"},
            {"kind": "blowup", "center": ["z", "x", "t"], "chart": "t", "label": "step2"},
            {"kind": "blowup", "center": ["z1", "x1", "t"], "chart": "t", "label": "step3"},
            {"kind": "restrict", "h": "x2", "label": "step4-open"},
            {"kind": "change", "subs": {"z2": "z3 + t", "x2": "x3 + 1"},
             "rename": {"z2": "z3", "x2": "x3"}, "label": "step4"},
            {"kind": "replace", "algebra": "H", "with": "[z3 @ 1, t @ 1]", "label": "step4-closure"},
            {"kind": "product", "vars": ["s"], "label": "step5"},
            {"kind": "blowup", "center": ["z3", "t", "x3", "s"], "chart": "s",
             "rename": {"z3": "z4", "t": "t4", "x3": "x4"}, "label": "step6"},
            {"kind": "blowup", "center": ["z4", "t4", "x4", "s"], "chart": "s", "label": "step7"},
        ],
        "assertions": [
            {"kind": "compare", "left": "G", "right": "H", "at": "initial",
             "direction": "left_in_right", "expect": "yes"},
            {"kind": "generators", "algebra": "H", "at": "step0", "expect": "[x^3 @ 2, z^2 + x^3 @ 2]"},
            {"kind": "generators", "algebra": "G", "at": "step2", "expect": "[z1^2 + t*x1^3 @ 2]"},
            {"kind": "generators", "algebra": "H", "at": "step2", "expect": "[z1 @ 1, t*x1^3 @ 2]"},
            {"kind": "generators", "algebra": "G", "at": "step3", "expect": "[z2^2 + t^2*x2^3 @ 2]"},
            {"kind": "generators", "algebra": "H", "at": "step3", "expect": "[z2 @ 1, t^2*x2^3 @ 2]"},
            {"kind": "generators", "algebra": "G", "at": "step4",
             "expect": "[z3^2 + t^2*x3*(x3^2 + x3 + 1) @ 2]"},
            {"kind": "generators", "algebra": "H", "at": "step4", "expect": "[z3 + t @ 1, t^2 @ 2]"},
            {"kind": "generators", "algebra": "G", "at": "step6",
             "expect": "[z4^2 + s*t4^2*x4*(s^2*x4^2 + s*x4 + 1) @ 2]"},
            {"kind": "generators", "algebra": "H", "at": "step6", "expect": "[z4 @ 1, t4 @ 1]"},
            {"kind": "generators", "algebra": "G", "at": "step7",
             "expect": "[z5^2 + s^2*t5^2*x5*(s^4*x5^2 + s^2*x5 + 1) @ 2]"},
            {"kind": "generators", "algebra": "H", "at": "step7", "expect": "[z5 @ 1, t5 @ 1]"},
            {"kind": "sing", "algebra": "G", "point": final, "sweep": ["x5", "t5"], "expect": True},
            {"kind": "sing", "algebra": "H", "point": final, "sweep": ["x5", "t5"], "expect": False},
            {"kind": "sing", "algebra": "G", "point": {"generic": ["z5", "s"]}, "expect": True,
             "note": "V(z5, s) lies in Sing G6"},
            {"kind": "sing", "algebra": "H", "point": {"generic": ["z5", "s"]}, "expect": False,
             "note": "V(z5, s) does not lie in Sing H6"},
            {"kind": "word_identity", "algebra": "G"},
            {"kind": "word_identity", "algebra": "H"},
            {"kind": "t_monotone", "algebra": "G"},
            {"kind": "t_monotone", "algebra": "H"},
        ],
    }


def hironaka_trick(N: int = 2, n: int = 1, b: int = 1, m: int = 6, Q: int = 3) -> dict:
    """H = [x^{Nb} W^{nb}] and G = [x^Q W^{nb}] on k[x], times a line, then m
    blow-ups of the strict transform of V(x) meeting the newest divisor."""
    steps = [{"kind": "product", "vars": ["t"], "label": "product"}]
    for j in range(m):
        xv = "x" if j == 0 else f"x{j}"
        steps.append({"kind": "blowup", "center": [xv, "t"], "chart": "t", "label": f"blowup{j + 1}"})
    repeats = m * (N - n) * b // (n * b)
    g_repeats = m * (Q - n * b) // (n * b)
    return {
        "name": "hironaka-trick",
        "description": f"(N,n,b)=({N},{n},{b}), m={m}, Q={Q}",
        "char": 0,
        "vars": ["x"],
        "algebras": {"H": f"[x^{N * b} @ {n * b}]", "G": f"[x^{Q} @ {n * b}]"},
        "steps": steps,
        "assertions": [
            {"kind": "exponents", "algebra": "H", "expect": [j * (N - n) * b for j in range(1, m + 1)]},
            {"kind": "exponents", "algebra": "G", "expect": [j * (Q - n * b) for j in range(1, m + 1)]},
            {"kind": "generators", "algebra": "H",
             "expect": f"[t^{m * (N - n) * b}*x{m}^{N * b} @ {n * b}]"},
            {"kind": "max_blowups", "algebra": "H", "center": ["t"], "expect": repeats},
            {"kind": "max_blowups", "algebra": "G", "center": ["t"], "expect": g_repeats},
            {"kind": "word", "algebra": "H", "point": {f"x{m}": 0, "t": 1}, "expect": f"{N}/{n}"},
            {"kind": "word_identity", "algebra": "H"},
            {"kind": "word_identity", "algebra": "G"},
            {"kind": "t_monotone", "algebra": "H", "min_checked": 1},
        ],
    }


def giraud_check(char: int, chart: str) -> dict:
    return {
        "name": f"giraud-check-char{char}-chart{chart}",
        "char": char,
        "vars": ["z", "x"],
        "sample": {"random": 50 if char == 0 else 0, "seed": 5},
        "algebras": {
            "G": "[z^2 + x^3 @ 2]",
            "R": {"saturate": "G"},
            "K": {"join": ["G", "[z @ 1]"]},
        },
        "steps": [{"kind": "blowup", "center": ["z", "x"], "chart": chart, "label": "blowup"}],
        "assertions": [
            {"kind": "sing_equal", "algebras": ["G", "K", "R"], "at": "initial"},
            {"kind": "sing_equal", "algebras": ["G", "K", "R"], "at": "final"},
        ],
    }


def restriction_check(char: int) -> dict:
    return {
        "name": f"restriction-check-char{char}",
        "char": char,
        "vars": ["z", "x"],
        "sample": {"random": 0, "seed": 7},
        "algebras": {"G": "[z^2 + x^3 @ 2]", "L": "[z + x^3 @ 2]"},
        "assertions": [
            {"kind": "restriction", "algebra": "G", "var": "z", "random": 50},
            {"kind": "restriction", "algebra": "L", "var": "z", "raw_differs": True,
             "note": "raw restriction of [(z + x^3) W^2] has a larger singular locus"},
        ],
    }


def veronese_demo() -> dict:
    return {
        "name": "veronese-normalize-demo",
        "char": 0,
        "vars": ["x", "y"],
        "sample": {"random": 20, "seed": 6},
        "algebras": {"G": "[x @ 2, y @ 3]", "A": "[x^3 @ 2, y^4 @ 3]"},
        "assertions": [
            {"kind": "normalize", "algebra": "G", "N": 6, "ideal": "x^3, y^2", "k": 4},
            {"kind": "veronese_invariance", "algebra": "G", "M": 6, "points": 20},
            {"kind": "veronese_invariance", "algebra": "A", "M": 6, "points": 20},
            {"kind": "order", "algebra": "A", "point": [0, 0], "expect": "4/3"},
        ],
    }


BUILTINS = {
    "char2-counterexample": BuiltinScenario(
        "char2-counterexample", "char 2: G = [(z^2+x^3)W^2] and H = G plus x^3(x+1)^2 W^2; "
        "after seven steps V(z5, s) lies in Sing G6 but not in Sing H6", (char2_counterexample(),)),
    "hironaka-trick": BuiltinScenario(
        "hironaka-trick", "exceptional exponents j(N-n)b and the count of further blow-ups",
        (hironaka_trick(),)),
    "giraud-check": BuiltinScenario(
        "giraud-check", "G, G joined with a saturation generator, and the saturation have equal "
        "singular loci after blowing up the origin (both charts, char 0 and 5)",
        tuple(giraud_check(c, ch) for c in (0, 5) for ch in ("x", "z"))),
    "restriction-check": BuiltinScenario(
        "restriction-check", "restricting the saturation to z = 0 matches Sing of G joined with zW",
        (restriction_check(0), restriction_check(7))),
    "veronese-normalize-demo": BuiltinScenario(
        "veronese-normalize-demo", "almost-Rees normalization of [x W^2, y W^3]", (veronese_demo(),)),
}


def list_builtins() -> list:
    return sorted(BUILTINS)


def run_builtin(name: str, horizons: Horizons | None = None) -> list:
    """Run every scenario of a builtin; returns the traces."""
    if name not in BUILTINS:
        raise KeyError(f"unknown builtin {name!r}; known: {', '.join(list_builtins())}")
    return [run_scenario(Scenario.from_dict(doc, horizons)) for doc in BUILTINS[name].documents]


def builtin_report(name: str, traces: list, as_dict: bool = False):
    if as_dict:
        return {"builtin": name, "passed": all(t.passed for t in traces),
                "scenarios": [trace_to_dict(t) for t in traces]}
    return "\n\n".join(format_trace(t) for t in traces)
