"""
Numerical cross-check against the closed forms
==============================================

An adaptive Dormand-Prince integrator starts from the exact initial data and
is compared with the closed form on a uniform grid.
"""
import random
from fractions import Fraction

from chainlab.chains import generate_chain
from chainlab.numcheck import (IVP, PoleInInterval, StepUnderflow, integrate, measure_order,
                               random_case, run_cross_check)

slope, errors = measure_order()
print(f"fixed-step convergence order on u' = -u^2: {slope:.2f}")
print("errors:", ", ".join(f"{e:.2e}" for e in errors))

traj = integrate(IVP(generate_chain("riccati", 2), 1.0, (2.0, -2.0)), 3.0)
print(f"\nu(3) = {traj.states[-1][0]!r} vs 2/3; {traj.steps} steps, {traj.rejected} rejected")

# the solution through u(-1/2) = -2 is 1/x, which blows up at 0
try:
    integrate(IVP(generate_chain("riccati", 1), -0.5, (-2.0,)), 0.5)
except StepUnderflow as exc:
    print("stopped:", exc)

# poles are found before integrating
try:
    run_cross_check("riccati", 3, (1, 1, 1), (0, 2))
except PoleInInterval as exc:
    print("skipped:", exc)
print("on [2, 4] instead:", f"{run_cross_check('riccati', 3, (1, 1, 1), (2, 4)).deviation:.2e}")

rng = random.Random(3)
print("\nrandom pole-free cases")
for family in ("riccati", "abel"):
    for n in range(1, 6):
        consts, (a, b) = random_case(family, n, rng)
        res = run_cross_check(family, n, consts, (a, b))
        print(f"{family:8s} N={n} k={[str(c) for c in consts]} on [{float(a):.3f}, {float(b):.3f}]"
              f"  deviation {res.deviation:.1e}")
