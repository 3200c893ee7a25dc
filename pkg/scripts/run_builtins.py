"""Run every built-in scenario and print a one-line summary per scenario."""
import argparse
import time

from reesalg.builtins import BUILTINS, builtin_report, run_builtin
from reesalg.rees import Horizons


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", help="subset of builtins (default: all)")
    ap.add_argument("--full", action="store_true", help="print full reports")
    ap.add_argument("--horizon", type=int, default=8)
    args = ap.parse_args()
    names = args.names or sorted(BUILTINS)
    ok_all = True
    for name in names:
        t0 = time.perf_counter()
        traces = run_builtin(name, Horizons(a_max=args.horizon))
        dt = time.perf_counter() - t0
        for t in traces:
            n_ok = sum(r.passed for r in t.results)
            print(f"{'ok  ' if t.passed else 'FAIL'} {t.scenario.name:<36} {n_ok}/{len(t.results)} assertions, "
                  f"{len(t.frames) - 1} steps")
            ok_all &= t.passed
        print(f"     {name}: {dt:.2f} s")
        if args.full:
            print(builtin_report(name, traces))
    raise SystemExit(0 if ok_all else 1)


if __name__ == "__main__":
    main()
