"""
A nonlocal symmetry shared by the whole chain
=============================================

The covering v' = -m u^m - c'/c admits the generator with xi = 0,
phi = c e^v u and psi = m c e^v for an arbitrary function c(x).
"""
from chainlab.kernel import Const
from chainlab.parser import parse_expression
from chainlab.symmetry import (build_covering_flux, build_generator, check_invariant_functions,
                               is_nonlocal, nonlocality_measure, verify_determining_equations,
                               verify_invariance)

for family in ("riccati", "abel"):
    vf = build_generator(family)
    print(f"{family}: flux f = {build_covering_flux(family)}")
    print(f"  xi = {vf.xi}, phi = {vf.phi}, psi = {vf.psi}")
    print(f"  xi_v^2 + phi_v^2 = {nonlocality_measure(vf)}  (nonlocal: {is_nonlocal(vf)})")

# the six determining equations of the second-order member vanish for symbolic c
print()
print(verify_determining_equations("abel").to_text())

# and for a concrete choice of c
print(verify_determining_equations("riccati", parse_expression("exp(2*x)")).to_text())

# invariance checked directly on the prolonged field, order by order
for n in range(1, 9):
    statuses = [verify_invariance(f, n).status for f in ("riccati", "abel")]
    print(f"N={n}: riccati {statuses[0]}, abel {statuses[1]}")

print()
print(check_invariant_functions("abel").to_text())
