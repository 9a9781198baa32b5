"""Print the bound reports over a range of L = log2 n and the crossover points."""

import argparse

from cliquechrom.bounds import janson_crossover, janson_report, lemma21_bounds, lemma22_bounds


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=float, nargs="+", default=[20, 60, 119, 120, 200, 400, 1000])
    args = ap.parse_args()
    print(f"janson crossover L* = {janson_crossover():.4f}")
    print(f"half-expectation crossover L = {float(lemma21_bounds(100).values['half_expectation_crossover_L']):.1f}")
    print(f"dense-neighbour step crossover L = {lemma22_bounds(100).values['step_crossover_L']:.2f}")
    print()
    for L in args.L:
        for rep in (lemma21_bounds(L), lemma22_bounds(L), janson_report(L)):
            failing = [k for k, ok in rep.verdicts.items() if not ok]
            print(f"L={L:<7g} {rep.name:<8} failing: {', '.join(failing) or '-'}")


if __name__ == "__main__":
    main()
