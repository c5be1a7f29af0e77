"""Short Weierstrass curves y^2 = x^3 + a x + b over Q with exact arithmetic.

Points carry :class:`fractions.Fraction` coordinates, so every result is
exact and stored in lowest terms. Division polynomials are evaluated at a
single point through a memoized recurrence rather than as polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import RankforgeError


class SingularCurve(RankforgeError, ValueError):
    pass


class OffCurveInput(RankforgeError, ValueError):
    pass


class InfinityInput(RankforgeError, ValueError):
    pass


class TwoTorsionInput(RankforgeError, ValueError):
    pass


class TorsionMultiple(RankforgeError, ValueError):
    pass


@dataclass(frozen=True)
class CurvePoint:
    """A rational point; ``x is None`` encodes the point at infinity."""

    x: Fraction | None = None
    y: Fraction | None = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_infinity:
            return "CurvePoint(Infinity)"
        return f"CurvePoint({self.x}, {self.y})"


INFINITY = CurvePoint()


def point(x, y) -> CurvePoint:
    return CurvePoint(Fraction(x), Fraction(y))


@dataclass(frozen=True)
class DivisionPolyValues:
    n: int
    psi: Fraction
    phi: Fraction
    omega: Fraction


@dataclass(frozen=True)
class WeierstrassCurve:
    a: int
    b: int = 0

    def __post_init__(self):
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", int(self.b))
        if 4 * self.a**3 + 27 * self.b**2 == 0:
            raise SingularCurve(f"y^2 = x^3 + {self.a}x + {self.b} is singular")

    def __str__(self):
        return f"y^2 = x^3 + ({self.a})x + ({self.b})"

    @property
    def discriminant(self) -> int:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    @property
    def j_invariant(self) -> Fraction:
        return Fraction(-1728 * (4 * self.a) ** 3, self.discriminant)

    def on_curve(self, p: CurvePoint) -> bool:
        if p.is_infinity:
            return True
        x, y = p.x, p.y
        return y * y == (x * x + self.a) * x + self.b

    def _check(self, *points):
        for p in points:
            if not self.on_curve(p):
                raise OffCurveInput(f"{p} is not on {self}")

    def negate(self, p: CurvePoint) -> CurvePoint:
        self._check(p)
        return p if p.is_infinity else CurvePoint(p.x, -p.y)

    def add(self, p: CurvePoint, q: CurvePoint) -> CurvePoint:
        self._check(p, q)
        return self._add(p, q)

    def _add(self, p, q):
        if p.is_infinity:
            return q
        if q.is_infinity:
            return p
        if p.x == q.x:
            if p.y + q.y == 0:
                return INFINITY
            slope = (3 * p.x * p.x + self.a) / (2 * p.y)
        else:
            slope = (q.y - p.y) / (q.x - p.x)
        x3 = slope * slope - p.x - q.x
        return CurvePoint(x3, slope * (p.x - x3) - p.y)

    def sub(self, p: CurvePoint, q: CurvePoint) -> CurvePoint:
        return self.add(p, self.negate(q))

    def scalar_mul(self, n: int, p: CurvePoint) -> CurvePoint:
        """n*p by double-and-add; negative n allowed."""
        self._check(p)
        if n < 0:
            n, p = -n, self.negate(p)
        result = INFINITY
        while n:
            if n & 1:
                result = self._add(result, p)
            n >>= 1
            if n:
                p = self._add(p, p)
        return result

    def division_poly_eval(self, p: CurvePoint, n: int) -> DivisionPolyValues:
        """Values of psi_n, phi_n, omega_n at the affine point ``p``."""
        self._check(p)
        if p.is_infinity:
            raise InfinityInput("division polynomials need an affine point")
        if n < 1:
            raise ValueError("n must be positive")
        return _DivisionPolyContext(self, p).values(n)

    def multiple_via_divpoly(self, p: CurvePoint, n: int) -> CurvePoint:
        v = self.division_poly_eval(p, n)
        if v.psi == 0:
            raise TorsionMultiple(f"{n}*{p} is the point at infinity")
        return CurvePoint(v.phi / v.psi**2, v.omega / v.psi**3)


class _DivisionPolyContext:
    """Memo table of psi_k at one point; psi_0 = 0 and psi_{-1} = -1 close the recurrences."""

    def __init__(self, curve: WeierstrassCurve, p: CurvePoint):
        a, b = curve.a, curve.b
        x, y = p.x, p.y
        self.x, self.y = x, y
        self.psi = {
            -1: Fraction(-1),
            0: Fraction(0),
            1: Fraction(1),
            2: 2 * y,
            3: 3 * x**4 + 6 * a * x**2 + 12 * b * x - a * a,
            4: 4 * y * (x**6 + 5 * a * x**4 + 20 * b * x**3 - 5 * a * a * x * x
                        - 4 * a * b * x - 8 * b * b - a**3),
        }

    def _over_2y(self, value):
        if self.y == 0:
            raise TwoTorsionInput("recurrence divides by 2y at a 2-torsion point")
        return value / (2 * self.y)

    def __getitem__(self, k: int) -> Fraction:
        psi = self.psi
        if k in psi:
            return psi[k]
        # fill iteratively so deep n cannot hit the recursion limit
        todo = [k]
        while todo:
            j = todo[-1]
            m = j // 2
            need = [m - 2, m - 1, m, m + 1, m + 2] if j % 2 == 0 else [m - 1, m, m + 1, m + 2]
            missing = [i for i in need if i not in psi]
            if missing:
                todo.extend(missing)
                continue
            todo.pop()
            if j in psi:
                continue
            if j % 2:
                psi[j] = psi[m + 2] * psi[m] ** 3 - psi[m - 1] * psi[m + 1] ** 3
            else:
                psi[j] = self._over_2y(psi[m]) * (
                    psi[m + 2] * psi[m - 1] ** 2 - psi[m - 2] * psi[m + 1] ** 2
                )
        return psi[k]

    def values(self, n: int) -> DivisionPolyValues:
        psi_n = self[n]
        phi = self.x * psi_n**2 - self[n + 1] * self[n - 1]
        num = self[n + 2] * self[n - 1] ** 2 - self[n - 2] * self[n + 1] ** 2
        omega = self._over_2y(num) / 2
        return DivisionPolyValues(n, psi_n, phi, omega)
