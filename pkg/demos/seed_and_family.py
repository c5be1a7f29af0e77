"""From the smallest solution of A^4 + D^4 = 2(B^4 + C^4) to a curve with five points."""

from rankforge import QuarticSolution, build_instance, heron_factors, verify_solution

# the smallest nontrivial solution
A, B, C, D = 21, 20, 7, 19
print("A^4 + D^4 =", A**4 + D**4, " 2(B^4 + C^4) =", 2 * (B**4 + C**4))
print("verified:", verify_solution(A, B, C, D))

# Heron's product for the "triangle" with sides A^2, B^2, C^2
f = heron_factors(A, B, C)
print("quadratic forms:", f, " product (= 16 S^2):", f[0] * f[1] * f[2] * f[3])

inst = build_instance(QuarticSolution(A, B, C, D))
print("curve:", inst.curve)
print("K = -16 S^2 / 4 =", inst.k)

# five points with x = A^2B^2, A^2C^2, B^2C^2, B^2D^2, C^2D^2
for i, p in enumerate(inst.points, 1):
    print(f"P{i} = ({p.x}, {p.y})  on curve: {inst.curve.on_curve(p)}")

# the group law is exact: sums of the points stay on the curve
s = inst.curve.add(inst.points[0], inst.points[1])
print("P1 + P2 =", s.x, "...", "on curve:", inst.curve.on_curve(s))
