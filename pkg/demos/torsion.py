"""Torsion of y^2 = x^3 + Kx and the sign of 16 S^2."""

from rankforge import QuarticSolution, build_instance, classify, diagnostics, fourth_power_free_part

for k in (4, -1, 3, 4 * 5**4, -126878400):
    print(f"K = {k}: fourth-power-free part {fourth_power_free_part(k)}, torsion {classify(k).value}")

# when 16 S^2 < 0 (S imaginary) the torsion is always Z/2
for abcd in [(21, 20, 7, 19), (607, 951, 1640, 1999), (181, 1247, 1620, 2077)]:
    inst = build_instance(QuarticSolution(*abcd))
    d = diagnostics(inst)
    print(abcd, "S real:", d.s_real, " 4S^2 square:", d.four_s2_is_square, " torsion:", d.torsion.value)
