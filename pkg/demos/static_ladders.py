"""Mesh-refinement ladders for the static cases.

Each case is solved from the zero dual state on its default meshes; the
table prints the L1 errors against the closed-form target, or against the
finest mesh when no target is known.

Run with ``python3 demos/static_ladders.py``.
"""

from dualelast import build_case, refinement_study
from dualelast.output import format_refinement_table

CASES = ("stress_free", "stressed_homogeneous", "stressed_inhomogeneous", "grain_boundary_static")


def main():
    for name in CASES:
        spec = build_case(name)
        reports = refinement_study(spec)
        print(f"\n{spec.label}")
        print(format_refinement_table(reports))


if __name__ == "__main__":
    main()
