"""From a quartic solution to the curve y^2 = x^3 + K x and its five points.

Applying Heron's formula to the "sides" (A^2, B^2, C^2) gives
16 S^2 = (A^2+B^2+C^2)(A^2+B^2-C^2)(A^2+C^2-B^2)(B^2+C^2-A^2), and the
curve coefficient is K = -4 S^2. S itself is never formed: it can be
irrational or imaginary, only the integer 16 S^2 matters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curve import CurvePoint, WeierstrassCurve
from .errors import InvariantError, RankforgeError
from .quartic import QuarticSolution


class NonIntegral(InvariantError):
    pass


class OffCurve(InvariantError):
    pass


class DegenerateSolution(RankforgeError, ValueError):
    pass


def heron_factors(A: int, B: int, C: int) -> tuple[int, int, int, int]:
    """The four quadratic forms whose product is 16 S^2 (and -4K)."""
    a2, b2, c2 = A * A, B * B, C * C
    return (a2 + b2 + c2, a2 + b2 - c2, a2 + c2 - b2, b2 + c2 - a2)


def sixteen_s2(A: int, B: int, C: int) -> int:
    f1, f2, f3, f4 = heron_factors(A, B, C)
    return f1 * f2 * f3 * f4


def curve_coefficient(s: QuarticSolution) -> int:
    """K = (A^8 + B^8 + C^8 - 2A^4B^4 - 2A^4C^4 - 2B^4C^4) / 4."""
    A4, B4, C4 = s.A**4, s.B**4, s.C**4
    num = A4 * A4 + B4 * B4 + C4 * C4 - 2 * (A4 * B4 + A4 * C4 + B4 * C4)
    if num % 4:
        raise NonIntegral(f"4 does not divide the coefficient numerator for {s}")
    k = num // 4
    if 4 * k != -sixteen_s2(s.A, s.B, s.C):
        raise InvariantError("K disagrees with the Heron product")
    return k


def _pt(x: int, y_twice: int) -> CurvePoint:
    return CurvePoint(Fraction(x), Fraction(y_twice, 2))


def build_points(s: QuarticSolution, curve: WeierstrassCurve | None = None) -> tuple[CurvePoint, ...]:
    """P1..P5 with x-coordinates A^2B^2, A^2C^2, B^2C^2, B^2D^2, C^2D^2."""
    A, B, C, D = s.as_tuple()
    A4, B4, C4, D4 = A**4, B**4, C**4, D**4
    pts = (
        _pt(A * A * B * B, A * B * (A4 + B4 - C4)),
        _pt(A * A * C * C, A * C * (A4 + C4 - B4)),
        _pt(B * B * C * C, B * C * (B4 + C4 - A4)),
        _pt(B * B * D * D, B * D * (B4 + D4 - C4)),
        _pt(C * C * D * D, C * D * (C4 + D4 - B4)),
    )
    xs = [p.x for p in pts]
    if 0 in xs or len(set(xs)) < 5:
        raise DegenerateSolution(f"{s} gives vanishing or repeated x-coordinates")
    if curve is None:
        curve = WeierstrassCurve(curve_coefficient(s), 0)
    for i, p in enumerate(pts, 1):
        if not curve.on_curve(p):
            raise OffCurve(f"P{i} = {p} is not on {curve}")
    return pts


@dataclass(frozen=True)
class FamilyInstance:
    solution: QuarticSolution
    sixteen_s2: int
    k: int
    curve: WeierstrassCurve
    points: tuple[CurvePoint, ...]

    @property
    def heron_factors(self) -> tuple[int, int, int, int]:
        s = self.solution
        return heron_factors(s.A, s.B, s.C)


def build_instance(s: QuarticSolution) -> FamilyInstance:
    if not s.is_valid():
        raise DegenerateSolution(f"{s} does not satisfy A^4 + D^4 = 2(B^4 + C^4)")
    if s.degenerate:
        raise DegenerateSolution(f"{s} is degenerate")
    s16 = sixteen_s2(s.A, s.B, s.C)
    k = curve_coefficient(s)
    curve = WeierstrassCurve(k, 0)
    return FamilyInstance(s, s16, k, curve, build_points(s, curve))
