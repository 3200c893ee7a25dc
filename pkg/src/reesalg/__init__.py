"""Exact Rees-algebra calculus: saturation, singular loci, blow-ups, closures."""
from .poly import Field, Poly, Ring, Stratum, hasse_derivative, order_at, divisor_order, translate, initial_form
from .rees import (Horizons, Ideal, ReesAlg, WeightedGen, almost_rees_normalize, degree_slice, join,
                   order_at_point, parse_algebra, sing_ideal, sing_membership, veronese, zero_set_membership)
from .diff import diff_saturate, restrict_to_hypersurface
from .closure import (Verdict, almost_rees_containment, canonical_compare, hypersurface_criterion,
                      ic_power_witness, monomial_ic_membership)

__all__ = [
    "Field", "Poly", "Ring", "Stratum", "hasse_derivative", "order_at", "divisor_order", "translate",
    "initial_form", "Horizons", "Ideal", "ReesAlg", "WeightedGen", "almost_rees_normalize", "degree_slice",
    "join", "order_at_point", "parse_algebra", "sing_ideal", "sing_membership", "veronese",
    "zero_set_membership", "diff_saturate", "restrict_to_hypersurface", "Verdict", "almost_rees_containment",
    "canonical_compare", "hypersurface_criterion", "ic_power_witness", "monomial_ic_membership",
]

__version__ = "0.1.0"
