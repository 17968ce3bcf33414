"""
Order reduction with zeta = u'/u + u^m
======================================

Writing u' = u (zeta - u^m) turns every chain member into u times the Riccati
member one order lower, in the variable zeta.
"""
from chainlab.chains import format_chain, generate_chain
from chainlab.reduction import (ZETA, build_substitution_table, reduce_chain, reduction_ladder,
                                verify_reductions)

table = build_substitution_table("abel", 3)
for k, entry in table.entries.items():
    print(f"u_{k} -> {format_chain(entry)}")

res = reduce_chain(generate_chain("abel", 3))
print(f"\nAbel N=3 = {res.cofactor} * ({format_chain(res.target.lhs, ZETA)})")

# repeat until first order; every rung after the first is Riccati
for rung in reduction_ladder("abel", 5):
    print("  ", rung)

print()
print(verify_reductions("riccati", 10).to_text())
