"""
Closed-form general solutions
=============================

Riccati: u = Q'/Q with Q a polynomial of degree N.
Abel:    u = P/sqrt(S) with deg P = N - 1 and S' = 2 P^2.
"""
from fractions import Fraction

from chainlab.chains import generate_chain
from chainlab.solutions import (abel_solution, agreement_residual, evaluate_solution,
                                recursive_solve, riccati_solution, verify_published_solutions,
                                verify_solution_symbolic)

for n in range(1, 5):
    print(riccati_solution(n))
for n in range(2, 5):
    print(abel_solution(n))

# the residual of each family is identically zero in x and the constants
for n in (3, 6):
    cert = verify_solution_symbolic(generate_chain("abel", n), abel_solution(n))
    print(f"Abel N={n} residual numerator: {cert.residual_numerator}")

# the same family falls out of solving the reduced equation and integrating back
print("recursive vs direct, Riccati N=4:",
      agreement_residual(riccati_solution(4), recursive_solve("riccati", 4)))

print("u(1) for Riccati N=2, k=(1,0):", evaluate_solution(riccati_solution(2, [1, 0]), 1))
v = evaluate_solution(abel_solution(2, [0, 0]), 2)
print("u(2)^2 for Abel N=2, k=(0,0):", v.p ** 2 / v.s)

# the printed forms, including the one whose overall sign must be flipped
print()
print(verify_published_solutions().to_text())
