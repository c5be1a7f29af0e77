"""Tangent descent on the surface x^4 + y^4 - 2u^4 = 2."""

from fractions import Fraction

from rankforge import QuarticSolution, descend_chain, verify_solution
from rankforge.quartic import (
    SurfacePoint,
    line_coefficients,
    resolve_d,
    tangent_directions,
    to_integer_solution,
    to_surface_point,
)

seed = QuarticSolution(21, 20, 7, 19)
p0 = to_surface_point(seed)
print("start point (A/C, D/C, B/C):", p0.x, p0.y, p0.u)

# lines through p0 along (1, r, c) meet the surface with multiplicity 3
# when c kills the linear term and r kills the quadratic one
for d in tangent_directions(p0):
    M, N, R, S = line_coefficients(p0, d)
    t = -N / M
    print(f"direction (1, {d.b}, {d.c}): R = {R}, S = {S}, t = {t}")

d = next(d for d in tangent_directions(p0) if d.b == Fraction(93, 133))
M, N, _, _ = line_coefficients(p0, d)
t = -N / M
p1 = SurfacePoint(p0.x + t, p0.y + d.b * t, p0.u + d.c * t)
s = to_integer_solution(p1).normalized()
print("new solution:", s.as_tuple(), "valid:", s.is_valid())

# a printed value of D for this solution is sometimes given as 1086621
print("which D works:", resolve_d(s.A, s.B, s.C, [1086621, 1086629]))
print("1086621 verifies:", verify_solution(s.A, s.B, s.C, 1086621))

for i, t in enumerate(descend_chain(seed, 3), 1):
    print(f"step {i}: {max(len(str(abs(v))) for v in t.as_tuple())}-digit solution, valid: {t.is_valid()}")
