"""Differential saturation by Hasse derivatives and restriction to coordinate
hypersurfaces."""
from __future__ import annotations

from .poly import Ring, hasse_derivative, multi_indices
from .rees import ReesAlg, WeightedGen, minimalize

MAX_ROUNDS = 64


class NotSaturatedError(ValueError):
    pass


def derivative_generators(G: ReesAlg) -> list:
    """Delta^alpha(f_i) W^{n_i - |alpha|} for all |alpha| < n_i."""
    out = []
    d = G.ring.ngens
    for g in G.gens:
        for alpha in multi_indices(d, g.weight - 1):
            f = hasse_derivative(g.poly, alpha)
            if f:
                out.append(WeightedGen(f, g.weight - sum(alpha)))
    return out


def diff_saturate(G: ReesAlg) -> ReesAlg:
    """Smallest differential algebra containing G, as a minimalized generator set."""
    if G.saturated:
        return G
    gens = minimalize(G.gens, differential=True)
    for _ in range(MAX_ROUNDS):
        new = minimalize(derivative_generators(G.with_gens(gens)), differential=True)
        if set(new) == set(gens):
            return G.with_gens(new, saturated=True)
        gens = new
    raise RuntimeError(f"saturation of {G} did not stabilize in {MAX_ROUNDS} rounds")


def restrict_to_hypersurface(G: ReesAlg, v: str) -> ReesAlg:
    """Restrict a differential algebra to {v = 0}; the result lives on the
    ring without ``v``.

    Raw algebras are refused: for them Sing of the restriction can be strictly
    larger than Sing G intersected with the hypersurface.
    """
    if not G.saturated:
        raise NotSaturatedError("restriction needs a differentially saturated algebra")
    ring = G.ring
    ring.index(v)
    sub = Ring(ring.field, tuple(x for x in ring.vars if x != v))
    images = {v: sub.zero()}
    gens = []
    for g in G.gens:
        f = g.poly.substitute(images, sub)
        if f:
            gens.append(WeightedGen(f, g.weight))
    excl = []
    for h in G.exclusions:
        hr = h.substitute(images, sub)
        if not hr:
            raise ValueError(f"hypersurface {v} = 0 lies inside the excluded locus {h} = 0")
        excl.append(hr)
    return ReesAlg(sub, tuple(minimalize(gens, differential=True)), tuple(excl), saturated=True)
