"""Tabulate exceptional exponents and repeat counts for the sequence
H = [x^{Nb} W^{nb}] times a line, blown up m times along V(x_j, t)."""
import argparse

from reesalg.blowup import count_permissible_repeats
from reesalg.builtins import hironaka_trick
from reesalg.scenario import Scenario, run_scenario


def row(N, n, b, m, Q):
    trace = run_scenario(Scenario.from_dict(hironaka_trick(N, n, b, m, Q)), evaluate=False)
    exps = [f.meta["exponents"]["H"] for f in trace.frames if f.meta.get("kind") == "blowup"]
    bo = trace.frames[-1].bo
    count = count_permissible_repeats(bo, ["t"], "H")
    expected = m * (N - n) * b // (n * b)
    return exps, count, expected


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=6)
    args = ap.parse_args()
    print(f"{'N':>3} {'n':>3} {'b':>3}  {'exponents':<28} {'repeats':>7} {'formula':>7}")
    ok = True
    for N, n, b in [(2, 1, 1), (3, 1, 1), (3, 2, 1), (2, 1, 2), (5, 2, 1), (4, 3, 2)]:
        exps, count, expected = row(N, n, b, args.m, Q=N * b)
        ok &= count == expected and exps == [j * (N - n) * b for j in range(1, args.m + 1)]
        print(f"{N:>3} {n:>3} {b:>3}  {str(exps):<28} {count:>7} {expected:>7}")
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
