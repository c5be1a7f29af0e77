"""Canonical heights and the independence certificate for the n = 2 curve."""

import time

import mpmath

from rankforge import build_instance, canonical_height, certify, naive_height, parametrized_solution
from rankforge.curve import WeierstrassCurve, point
from rankforge.heights import matching_scales

# a small example first: (-3, 9) on y^2 = x^3 - 36x
E, P = WeierstrassCurve(-36, 0), point(-3, 9)
h = canonical_height(E, P)
print("h_hat(P) =", mpmath.nstr(h.value, 20), "+-", mpmath.nstr(h.err, 3))
print("doubling oracle:", mpmath.nstr(canonical_height(E, P, method="doubling").value, 20))

# the naive limit 4^-j h(x(2^j P)) creeps toward it
for j in (2, 4, 6, 8):
    print(f"  j={j}: {mpmath.nstr(naive_height(E.scalar_mul(2**j, P)) / 4**j, 12)}")

inst = build_instance(parametrized_solution(2))
print("K =", inst.k)
t = time.perf_counter()
cert = certify(inst)
print(f"certificate in {time.perf_counter() - t:.2f} s, normalization {cert.normalization.value}")
for row in cert.gram:
    print("  ", "  ".join(mpmath.nstr(v.value, 10).rjust(14) for v in row))
d = cert.determinant
print("determinant =", mpmath.nstr(d.value, 15), "+-", mpmath.nstr(d.err, 3))
print("matches the reference value as:", [label for label, _ in matching_scales(d, cert.normalization)])
print("rank lower bound:", cert.rank_lower_bound, " torsion:", cert.torsion.value)

half = certify(inst, normalization="half")
print("half-x-height determinant:", mpmath.nstr(half.determinant.value, 15), "(32 times smaller)")
