"""
Generating the Riccati and Abel chains
======================================

Each member is built from the previous one by applying D + u^m, starting
from u' + u^(m+1). m = 1 gives the Riccati chain, m = 2 the Abel chain.
"""
from chainlab.chains import ABEL, RICCATI, catalog_check, generate_chain, to_latex

for family in (RICCATI, ABEL):
    print(f"--- {family.value} ---")
    for n in range(1, 5):
        eq = generate_chain(family, n)
        print(f"N={n}: {eq}")

# every monomial has the same weight when u_k counts k + 1/m
eq = generate_chain(ABEL, 6)
print("\nAbel N=6 terms:", len(eq.lhs), " weight violations:", eq.weight_violations())

# LaTeX, ordered by jet order then degree
print(to_latex(generate_chain(RICCATI, 3)))

# compare against the transcribed catalog; one term of Abel N=4 is a known misprint
print()
print(catalog_check().to_text())
