"""Dependence of the dual solution on the base state.

The hat-shaped base states share boundary data with the stress-free case
but differ in the strain they sit on.  For a small amplitude the solver
lands near the smooth solution; for ``a = 1`` the base state is itself an
equilibrium and Newton stops immediately.  Some amplitudes do not converge
at all, which is reported rather than hidden.
"""

import numpy as np

from dualelast import NewtonError, build_case, run_static_case


def main(amplitudes=(0.2, 0.3, 0.9, 1.0, 5.0), n_elements=100):
    for a in amplitudes:
        spec = build_case("hat_bifurcation", a=a)
        try:
            rep = run_static_case(spec, n_elements)
        except NewtonError as exc:
            print(f"a = {a:<4}: no convergence ({exc})")
            continue
        dev = float(np.max(np.abs(rep.e_hat - 1.0)))
        print(f"a = {a:<4}: {rep.newton.iterations:2d} iterations, max |e_hat - 1| = {dev:.3e}")


if __name__ == "__main__":
    main()
