"""Compare Newton-polyhedron membership with the power-witness oracle over
all small monomial ideals, and tabulate the witness exponents found."""
import argparse
import collections
import itertools
import time

from reesalg.closure import ic_power_witness, monomial_ic_membership
from reesalg.poly import Field, Poly, Ring
from reesalg.rees import Ideal


def monomials(nvars, max_deg):
    return [e for d in range(max_deg + 1) for e in itertools.product(range(d + 1), repeat=nvars) if sum(e) == d]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--vars", type=int, default=2)
    ap.add_argument("--gens", type=int, default=3, help="max number of generators")
    ap.add_argument("--gen-degree", type=int, default=4)
    ap.add_argument("--test-degree", type=int, default=8)
    ap.add_argument("-K", type=int, default=12, help="largest power tried by the oracle")
    args = ap.parse_args()

    names = ("x", "y", "z", "w")[:args.vars]
    R = Ring(Field(0), names)
    gens = monomials(args.vars, args.gen_degree)
    tests = monomials(args.vars, args.test_degree)
    t0 = time.perf_counter()
    total, members = 0, 0
    witness = collections.Counter()
    bad = []
    for r in range(1, args.gens + 1):
        for gs in itertools.combinations(gens, r):
            I = Ideal(R, tuple(Poly(R, {g: 1}) for g in gs))
            for m in tests:
                total += 1
                a = monomial_ic_membership(m, I)
                k = ic_power_witness(m, I, args.K)
                members += a
                if k:
                    witness[k] += 1
                if a != (k is not None):
                    bad.append((gs, m, a, k))
    dt = time.perf_counter() - t0
    print(f"{total} pairs, {members} in the closure, {len(bad)} disagreements, {dt:.2f} s")
    print("smallest witness power k: " + ", ".join(f"k={k}: {n}" for k, n in sorted(witness.items())))
    for row in bad[:10]:
        print("disagreement:", row)
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
