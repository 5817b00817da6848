"""Sampled checks of the dual densities for SVK and neo-Hookean materials.

Random dual points are drawn with a fixed seed.  At each point the density
is evaluated and compared with its lower and upper bounds and with the
regime witness.  Midpoint convexity is then tested along random segments.
"""

from collections import Counter

from dualelast.convexity import run_bound_checks, run_convexity_checks


def main(samples=40, seed=7):
    bounds = run_bound_checks(samples=samples, seed=seed)
    regimes = Counter((r["model"], r["regime"]) for r in bounds)
    for (model, regime), count in sorted(regimes.items(), key=str):
        print(f"{model:<22} regime {regime!s:<3} {count:4d} points")
    print(f"bound violations: {sum(r['violation'] for r in bounds)} of {len(bounds)}")

    combos = run_convexity_checks(samples=samples, seed=seed)
    worst = max(r["lhs"] - r["rhs"] for r in combos)
    print(f"convexity violations: {sum(r['violation'] for r in combos)} of {len(combos)}; worst gap {worst:.2e}")


if __name__ == "__main__":
    main()
