# Exact Laurent polynomial arithmetic and the coset machinery.
from fractions import Fraction

from prewavelets.laurent import (
    LaurentPoly, bracket_product, decompose, negative_representatives,
    parse_poly, rho, rho_D, tau_D,
)

x, y = LaurentPoly.variables(2)

# products keep exact coefficients; negative exponents are fine
p = (1 + x) * (1 + y) * (1 + x * y)
print("8H for the Courant element:", p)
print("conjugate:", p.conjugate())

# a parsed polynomial with a rational coefficient
q = parse_poly("x^2*y^-1 - 3/4*x + 1", 2)
print("q =", q, " q(1,1) =", q.value_at_one())

# the four coset components of p, with the two representative conventions
for reps, label in ((None, "j"), (negative_representatives(2), "-j")):
    dec = decompose(p, reps)
    print(f"\ncomponents (representatives {label}):")
    for j, comp in dec.components.items():
        print("  ", j, comp)
    assert dec.reconstruct() == p

# rho keeps the even part only
print("\nrho(p) =", rho(p))

# the two projections agree on whether they vanish
z = LaurentPoly.variables(1)[0]
print("rho_D(1+z, 1+z) =", rho_D(1 + z, 1 + z), " tau_D =", tau_D(1 + z, 1 + z))

# the bracket product with a trivial weight is 2^d times an even projection
one = LaurentPoly.constant(1, 2)
print("<p, 1>_1 =", bracket_product(p, one, one))
print("Fraction coefficients stay exact:", (q * Fraction(1, 3)).coefficient((1, 0)))
