"""Integer solutions of A^4 + D^4 = 2(B^4 + C^4).

Two generators are provided:

* the parametrization by multiples of (-3, 9) on y^2 = x^3 - 36x, built
  from the division-polynomial values phi_n, psi_n, omega_n;
* a secant descent on the affine surface x^4 + y^4 - 2u^4 - 2 = 0, where
  (x, y, u) = (A/C, D/C, B/C).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from .curve import CurvePoint, WeierstrassCurve
from .errors import InvariantError, RankforgeError
from .numtheory import gcd_reduce

HELPER_CURVE = WeierstrassCurve(-36, 0)
HELPER_POINT = CurvePoint(Fraction(-3), Fraction(9))

SEED_SOLUTION_ABCD = (21, 20, 7, 19)


class TorsionIndex(RankforgeError, ValueError):
    pass


class DegenerateC(RankforgeError, ValueError):
    pass


class NoRationalDirection(RankforgeError, ValueError):
    pass


class DegenerateDirection(RankforgeError, ValueError):
    pass


class ChainStuck(RankforgeError, RuntimeError):
    pass


def verify_solution(A: int, B: int, C: int, D: int) -> bool:
    return A**4 + D**4 == 2 * (B**4 + C**4)


@dataclass(frozen=True)
class QuarticSolution:
    """Integers with A^4 + D^4 = 2(B^4 + C^4); fields are named, never positional in output."""

    A: int
    B: int
    C: int
    D: int

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name, int(getattr(self, name)))

    @classmethod
    def from_adbc_order(cls, A, D, B, C) -> "QuarticSolution":
        """Build from a tuple ordered (A, D, B, C)."""
        return cls(A, B, C, D)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.A, self.B, self.C, self.D)

    def is_valid(self) -> bool:
        return verify_solution(*self.as_tuple())

    @property
    def degenerate(self) -> bool:
        A, B, C, D = self.as_tuple()
        return A * B * C * D == 0 or abs(B) == abs(C) or abs(A) == abs(D)

    def normalized(self) -> "QuarticSolution":
        """All signs positive, common factor removed."""
        return QuarticSolution(*(abs(v) for v in gcd_reduce(self.as_tuple())))

    def scaled(self, k: int) -> "QuarticSolution":
        return QuarticSolution(*(k * v for v in self.as_tuple()))

    def key(self):
        """Identity up to signs, scaling and the A<->D, B<->C symmetries."""
        A, B, C, D = self.normalized().as_tuple()
        return (tuple(sorted((A, D))), tuple(sorted((B, C))))

    def height(self) -> int:
        return max(abs(v) for v in self.as_tuple())


def parametrized_solution(n: int, reduce: bool = True) -> QuarticSolution:
    """Solution attached to n*(-3, 9) on y^2 = x^3 - 36x.

    With ``reduce`` the raw quadruple is divided by its gcd and made
    positive; n = 1 gives 81*(21, 20, -7, 19) raw and (21, 20, 7, 19) reduced.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    v = HELPER_CURVE.division_poly_eval(HELPER_POINT, n)
    f, s, w = v.phi, v.psi, v.omega
    if s == 0 or w == 0:
        raise TorsionIndex(f"{n}*(-3, 9) is a torsion point")
    A = (f**4 + 1296 * s**8 + 864 * f * s**6 + 72 * f**2 * s**4 + 144 * w * s**5
         - 24 * f**3 * s**2 + 4 * f**2 * w * s)
    D = (-864 * f * s**6 - f**4 - 1296 * s**8 - 72 * f**2 * s**4 + 144 * w * s**5
         + 24 * f**3 * s**2 + 4 * f**2 * w * s)
    B = 4 * (f**2 + 36 * s**4) * w * s
    C = (f**2 - 36 * s**4 - 12 * f * s**2) * (f**2 - 36 * s**4 + 12 * f * s**2)
    if any(t.denominator != 1 for t in (A, B, C, D)):
        raise InvariantError(f"non-integral parametrized solution at n={n}")
    sol = QuarticSolution(int(A), int(B), int(C), int(D))
    if not sol.is_valid():
        raise InvariantError(f"parametrized solution at n={n} fails the quartic")
    return sol.normalized() if reduce else sol


@dataclass(frozen=True)
class SurfacePoint:
    """Rational point on x^4 + y^4 - 2u^4 - 2 = 0."""

    x: Fraction
    y: Fraction
    u: Fraction

    def __post_init__(self):
        for name in "xyu":
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def on_surface(self) -> bool:
        return self.x**4 + self.y**4 - 2 * self.u**4 - 2 == 0


@dataclass(frozen=True)
class Direction:
    a: Fraction
    b: Fraction
    c: Fraction


def to_surface_point(s: QuarticSolution) -> SurfacePoint:
    if s.C == 0:
        raise DegenerateC("C = 0 has no affine image")
    C = s.C
    return SurfacePoint(Fraction(s.A, C), Fraction(s.D, C), Fraction(s.B, C))


def to_integer_solution(p: SurfacePoint) -> QuarticSolution:
    """Clear denominators: (A, B, C, D) = (x l, u l, l, y l), gcd-reduced, signs kept."""
    ell = lcm(p.x.denominator, p.y.denominator, p.u.denominator)
    A, B, C, D = gcd_reduce([int(p.x * ell), int(p.u * ell), ell, int(p.y * ell)])
    return QuarticSolution(A, B, C, D)


def line_coefficients(p0: SurfacePoint, d: Direction):
    """(M, N, R, S) with f(p0 + t d) = M t^4 + N t^3 + R t^2 + S t."""
    x0, y0, u0 = p0.x, p0.y, p0.u
    a, b, c = d.a, d.b, d.c
    M = a**4 + b**4 - 2 * c**4
    N = 4 * (a**3 * x0 + b**3 * y0 - 2 * c**3 * u0)
    R = 6 * (a**2 * x0**2 + b**2 * y0**2 - 2 * c**2 * u0**2)
    S = 4 * (a * x0**3 + b * y0**3 - 2 * c * u0**3)
    return M, N, R, S


def tangent_c(p0: SurfacePoint, a, b) -> Fraction:
    """c solving S = 0: the line lies in the tangent plane at p0."""
    if p0.u == 0:
        raise NoRationalDirection("tangent plane is vertical in u at this point")
    return (a * p0.x**3 + b * p0.y**3) / (2 * p0.u**3)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def tangent_direction_ratios(p0: SurfacePoint) -> list[Fraction]:
    """Rational roots r = b/a of R = 0 after eliminating c with S = 0."""
    x0, y0, u0 = p0.x, p0.y, p0.u
    if u0 == 0:
        raise NoRationalDirection("u0 = 0")
    # c = alpha + beta r, with a = 1
    alpha = x0**3 / (2 * u0**3)
    beta = y0**3 / (2 * u0**3)
    # x0^2 + r^2 y0^2 - 2 u0^2 (alpha + beta r)^2 = 0
    q2 = y0**2 - 2 * u0**2 * beta**2
    q1 = -4 * u0**2 * alpha * beta
    q0 = x0**2 - 2 * u0**2 * alpha**2
    if q2 == 0:
        if q1 == 0:
            raise NoRationalDirection("R vanishes identically or never")
        return [-q0 / q1]
    root = _rational_sqrt(q1 * q1 - 4 * q2 * q0)
    if root is None:
        raise NoRationalDirection("discriminant of the direction quadratic is not a rational square")
    roots = {(-q1 + root) / (2 * q2), (-q1 - root) / (2 * q2)}
    return sorted(roots, reverse=True)


def tangent_directions(p0: SurfacePoint) -> list[Direction]:
    """Directions (1, r, c) killing both S and R; degenerate ones (M = 0) dropped."""
    if not p0.on_surface():
        raise ValueError(f"{p0} is not on the surface")
    out = []
    for r in tangent_direction_ratios(p0):
        d = Direction(Fraction(1), r, tangent_c(p0, 1, r))
        if line_coefficients(p0, d)[0] != 0:
            out.append(d)
    if not out:
        raise DegenerateDirection("every rational direction has M = 0")
    return out


def descend_step(p0: SurfacePoint) -> list[SurfacePoint]:
    """Third intersection of each tangent line with the surface (t = -N/M)."""
    try:
        directions = tangent_directions(p0)
    except (NoRationalDirection, DegenerateDirection):
        return []
    points = []
    for d in directions:
        M, N, _, _ = line_coefficients(p0, d)
        t = -N / M
        p = SurfacePoint(p0.x + d.a * t, p0.y + d.b * t, p0.u + d.c * t)
        if not p.on_surface():
            raise InvariantError(f"descent produced an off-surface point {p}")
        if p != p0 and p not in points:
            points.append(p)
    return points


def descend_chain(seed: QuarticSolution, steps: int) -> list[QuarticSolution]:
    """Iterate the descent ``steps`` times, one new solution per step.

    Each step keeps the smallest candidate not seen before (normalized,
    positive signs) and continues from it.
    """
    if seed.degenerate:
        raise ValueError(f"seed {seed} is degenerate")
    seen = {seed.key()}
    current = seed
    chain = []
    for _ in range(steps):
        candidates = []
        for p in descend_step(to_surface_point(current)):
            s = to_integer_solution(p).normalized()
            if not s.is_valid():
                raise InvariantError(f"descent produced a non-solution {s}")
            if s.key() not in seen and not s.degenerate:
                candidates.append(s)
        if not candidates:
            raise ChainStuck(f"no new solution from {current}")
        current = min(candidates, key=lambda s: (s.height(), s.as_tuple()))
        seen.add(current.key())
        chain.append(current)
    return chain


def descent_tree(seed: QuarticSolution, depth: int, limit: int | None = None) -> list[QuarticSolution]:
    """Breadth-first descent keeping every branch; stops after ``limit`` solutions."""
    seen = {seed.key()}
    out = []
    frontier = [seed]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            if s.C == 0:
                continue
            for p in descend_step(to_surface_point(s)):
                t = to_integer_solution(p).normalized()
                if t.key() in seen or t.degenerate:
                    continue
                seen.add(t.key())
                out.append(t)
                nxt.append(t)
                if limit is not None and len(out) >= limit:
                    return out
        frontier = sorted(nxt, key=QuarticSolution.height)
    return out


def solution_corpus(size: int = 25) -> list[QuarticSolution]:
    """Distinct solutions: n = 1..5 parametrizations, a 3-step chain, then descent branches."""
    out, keys = [], set()

    def take(s):
        if s.key() not in keys:
            keys.add(s.key())
            out.append(s)

    for n in range(1, 6):
        take(parametrized_solution(n))
    seed = QuarticSolution(*SEED_SOLUTION_ABCD)
    for s in descend_chain(seed, 3):
        take(s)
    for s in descent_tree(seed, depth=4, limit=4 * size):
        if len(out) >= size:
            break
        take(s)
    return out[:size]


def resolve_d(A: int, B: int, C: int, candidates) -> int:
    """The single candidate D with A^4 + D^4 = 2(B^4 + C^4).

    Handy when a printed solution has a doubtful last digit.
    """
    hits = sorted({d for d in candidates if verify_solution(A, B, C, d)})
    if len(hits) != 1:
        raise ValueError(f"{len(hits)} of {list(candidates)} verify")
    return hits[0]
