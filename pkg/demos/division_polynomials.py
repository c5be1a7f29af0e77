"""Division polynomials on y^2 = x^3 - 36x and the solutions they generate."""

from rankforge import parametrized_solution
from rankforge.quartic import HELPER_CURVE, HELPER_POINT

E, P = HELPER_CURVE, HELPER_POINT
print("curve:", E, " point:", P.x, P.y)

# psi, phi, omega at P; n*P = (phi/psi^2, omega/psi^3)
for n in range(1, 6):
    v = E.division_poly_eval(P, n)
    q = E.multiple_via_divpoly(P, n)
    print(f"n={n}: psi has {len(str(v.psi.numerator))} digits, "
          f"x(nP) = {q.x if n < 3 else str(q.x)[:30] + '...'}, agrees with group law: {q == E.scalar_mul(n, P)}")

# n = 1 without the gcd reduction is 81 times the seed (with a sign)
print("raw n=1:", parametrized_solution(1, reduce=False).as_tuple())
print("n=1:", parametrized_solution(1).as_tuple())
print("n=2:", parametrized_solution(2).as_tuple())

# solutions grow quickly with n
for n in range(3, 7):
    s = parametrized_solution(n)
    print(f"n={n}: max |entry| has {len(str(s.height()))} digits, valid: {s.is_valid()}")
