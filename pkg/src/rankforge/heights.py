"""Canonical heights, height pairings and rank certificates.

Two independent algorithms compute the canonical height:

``local``
    Decomposition into local heights. The model is first scaled to be
    fourth-power free, then a small multiple Q = mP with nonsingular
    reduction at every bad prime is found. For such Q the non-archimedean
    part is (1/2) log den(x(Q)) + (1/12) log|Delta| spread over primes,
    and the archimedean part comes from the q-expansion of the Weierstrass
    sigma function, with the elliptic logarithm taken from Carlson's R_F.

``doubling``
    The limit 4^-n h(x(2^n P)), summed as a telescoping series. Each
    doubling step splits into a real factor (tracked in floating point on
    a normalized projective pair) and a gcd that divides Delta^2 (tracked
    exactly modulo a power of Delta^2), so nothing grows.

Heights are reported in one of two normalizations: ``x-height`` (the
limit of the logarithmic height of x) or ``half-x-height``.
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import mpmath
from mpmath import mp, mpf

from .curve import CurvePoint, InfinityInput, OffCurveInput, WeierstrassCurve
from .errors import RankforgeError
from .family import FamilyInstance
from .numtheory import DEFAULT_FACTOR_BUDGET, factor
from .torsion import TorsionClass, classify


class PrecisionUnreachable(RankforgeError, RuntimeError):
    pass


class FactorizationIncomplete(RankforgeError, RuntimeError):
    pass


class LocalReductionFailure(RankforgeError, RuntimeError):
    """No small multiple of the point has nonsingular reduction everywhere."""


class Normalization(enum.Enum):
    X = "x-height"
    HALF = "half-x-height"

    @classmethod
    def parse(cls, value) -> "Normalization":
        if isinstance(value, cls):
            return value
        aliases = {"x": cls.X, "x-height": cls.X, "half": cls.HALF, "half-x-height": cls.HALF,
                   "auto": DEFAULT_NORMALIZATION}
        try:
            return aliases[str(value)]
        except KeyError:
            raise ValueError(f"unknown normalization {value!r}") from None

    @property
    def scale(self) -> int:
        """Factor applied to a half-x-height value."""
        return 2 if self is Normalization.X else 1


# Pinned by the regression on the n = 2 family member: the x-height
# determinant is 30739535.349..., the half-x-height one is 32 times smaller.
DEFAULT_NORMALIZATION = Normalization.X
REFERENCE_DETERMINANT = mpf("30739535.349")

DEFAULT_TOL = 1e-10
GUARD_DIGITS = 30
MULTIPLIERS = (1, 2, 3, 4, 6, 8, 12, 16, 24)
INDEPENDENCE_FLOOR = mpf("1e-6")


@dataclass(frozen=True)
class HeightValue:
    value: mpf
    err: mpf

    def __iter__(self):
        return iter((self.value, self.err))

    def contains(self, x, slack=0) -> bool:
        return abs(self.value - x) <= self.err + slack


@dataclass(frozen=True)
class RankCertificate:
    gram: tuple[tuple[HeightValue, ...], ...]
    determinant: HeightValue
    normalization: Normalization
    rank_lower_bound: int
    torsion: TorsionClass | None = None

    @property
    def size(self) -> int:
        return len(self.gram)


def coordinate_digits(points) -> int:
    digits = 1
    for p in points:
        if p.is_infinity:
            continue
        for c in (p.x, p.y):
            digits = max(digits, len(str(abs(c.numerator))), len(str(c.denominator)))
    return digits


def working_dps(points, tol=DEFAULT_TOL) -> int:
    """Decimal precision: twice the coordinate digits plus guard digits."""
    need = 2 * coordinate_digits(points) + GUARD_DIGITS
    return max(need, int(-math.log10(float(tol))) + GUARD_DIGITS, 50)


def naive_height(p: CurvePoint) -> mpf:
    """log max(|r|, |s|) for x(p) = r/s in lowest terms."""
    if p.is_infinity:
        raise InfinityInput("naive height of the point at infinity")
    x = p.x
    return mpmath.log(max(abs(x.numerator), x.denominator))


def is_torsion(curve: WeierstrassCurve, p: CurvePoint) -> bool:
    """Nagell-Lutz on the given integral model, then direct multiples up to 12."""
    if p.is_infinity:
        return True
    if p.x.denominator != 1 or p.y.denominator != 1:
        return False
    if p.y == 0:
        return True
    if (4 * curve.a**3 + 27 * curve.b**2) % int(p.y) ** 2:
        return False
    q = p
    for _ in range(2, 13):
        q = curve._add(q, p)
        if q.is_infinity:
            return True
        if q.x.denominator != 1:
            return False
    return False


def _valuation(n: int, p: int) -> int:
    n = abs(n)
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@lru_cache(maxsize=256)
def discriminant_primes(curve: WeierstrassCurve, budget: float = DEFAULT_FACTOR_BUDGET, seed: int = 0):
    """Primes dividing the discriminant; raises FactorizationIncomplete."""
    core = abs(4 * curve.a**3 + 27 * curve.b**2)
    f = factor(core, budget=budget, seed=seed)
    if not f.complete:
        raise FactorizationIncomplete(f"could not finish factoring {core}")
    return tuple(sorted({2, *f.primes}))


def reduce_model(curve: WeierstrassCurve, primes) -> tuple[WeierstrassCurve, int]:
    """Largest u with u^4 | a and u^6 | b over ``primes``; returns (scaled curve, u)."""
    u = 1
    for p in primes:
        e = _valuation(curve.a, p) // 4
        if curve.b:
            e = min(e, _valuation(curve.b, p) // 6)
        u *= p**e
    return WeierstrassCurve(curve.a // u**4, curve.b // u**6), u


def _scale_point(p: CurvePoint, u: int) -> CurvePoint:
    if p.is_infinity or u == 1:
        return p
    return CurvePoint(p.x / u**2, p.y / u**3)


def _singular_primes(curve: WeierstrassCurve, q: CurvePoint, primes) -> list[int]:
    """Bad primes at which q reduces to the singular point of the model."""
    X, d2 = q.x.numerator, q.x.denominator
    d = isqrt(d2)
    Y = q.y * d**3
    if d * d != d2 or Y.denominator != 1:
        raise RankforgeError(f"{q} has non-Weierstrass denominators")
    dx = 3 * X * X + curve.a * d2 * d2
    dy = 2 * int(Y)
    g = gcd(dx, dy)
    return [p for p in primes if g % p == 0]


def _roots(curve: WeierstrassCurve):
    roots = mp.polyroots([1, 0, curve.a, curve.b], maxsteps=500, extraprec=2 * mp.dps)
    if 4 * curve.a**3 + 27 * curve.b**2 < 0:
        return sorted((mpmath.re(r) for r in roots), reverse=True), True
    roots = sorted(roots, key=lambda r: abs(mpmath.im(r)))
    e1 = mpmath.re(roots[0])
    e2, e3 = sorted(roots[1:], key=lambda r: mpmath.im(r), reverse=True)
    return [e1, e2, e3], False


def archimedean_local_height(curve: WeierstrassCurve, x: Fraction) -> HeightValue:
    """Archimedean local height at a real point with abscissa ``x``.

    Model independent (the Delta^(1/12) term is built in), in the
    half-x-height normalization. Evaluated at the current mp precision.
    """
    xr = mpf(x.numerator) / x.denominator
    (e1, e2, e3), three_real = _roots(curve)
    if three_real:
        omega1 = mp.pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
        omega2 = mp.pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3))
        tau = mpmath.mpc(0, omega2 / omega1)
        if xr > (e1 + e2) / 2:
            z = mpmath.elliprf(xr - e1, xr - e2, xr - e3)
        else:
            # egg component: translate by the 2-torsion point (e3, 0)
            xs = e3 + (e3 - e1) * (e3 - e2) / (xr - e3)
            z = mpmath.elliprf(xs - e1, xs - e2, xs - e3) + tau * omega1 / 2
    else:
        omega1 = 2 * mpmath.re(mpmath.elliprf(0, e1 - e2, e1 - e3))
        t = mpmath.re(mpmath.elliprf(0, e2 - e1, e3 - e1))
        tau = mpmath.mpc(mpf(1) / 2, t / omega1)
        z = mpmath.re(mpmath.elliprf(xr - e1, xr - e2, xr - e3))

    q = mpmath.exp(2j * mp.pi * tau)
    zn = z / omega1
    u = mpmath.exp(2j * mp.pi * zn)
    T = mpmath.im(zn) / mpmath.im(tau)
    b2 = T * T - T + mpf(1) / 6
    lam = -b2 / 2 * mpmath.log(abs(q)) - mpmath.log(abs(1 - u))
    aq = abs(q)
    au = max(abs(u), 1 / abs(u))
    eps = mpf(10) ** (-mp.dps)
    qn = q
    n = 1
    while True:
        lam -= mpmath.log(abs((1 - qn * u) * (1 - qn / u)))
        n += 1
        qn *= q
        # |log|1-w|| <= 2|w| for |w| <= 1/2; the tail is geometric in |q|
        tail = 4 * au * abs(qn) / (1 - aq)
        if abs(qn) * au <= mpf(1) / 2 and tail < eps:
            break
        if n > 10 * mp.dps:
            raise PrecisionUnreachable("q-series failed to converge")
    rounding = mpf(10) ** (-(mp.dps - 15)) * (1 + abs(lam))
    return HeightValue(lam, tail + rounding)


def _local_half_height(curve, p, primes, dps):
    """(value, err) in the half-x-height normalization via local heights."""
    model, u = reduce_model(curve, primes)
    pm = _scale_point(p, u)
    for m in MULTIPLIERS:
        q = model.scalar_mul(m, pm)
        if q.is_infinity:
            return mpf(0), mpf(0)
        if not _singular_primes(model, q, primes):
            break
    else:
        raise LocalReductionFailure(f"no multiple in {MULTIPLIERS} has good reduction")

    with mp.workdps(dps):
        arch = archimedean_local_height(model, q.x)
        delta = model.discriminant
        den = q.x.denominator
        nonarch = mpf(0)
        for pr in primes:
            vx = _valuation(den, pr)
            den //= pr**vx
            nonarch += (mpf(vx) / 2 + mpf(_valuation(delta, pr)) / 12) * mpmath.log(pr)
        # primes of good reduction only see the denominator
        nonarch += mpmath.log(den) / 2
        total = (arch.value + nonarch) / (m * m)
        err = (arch.err + mpf(10) ** (-(dps - 15)) * (1 + abs(nonarch))) / (m * m)
        return +total, +err


def _doubling_forms(a, b, X, Z):
    X2, Z2 = X * X, Z * Z
    F = X2 * X2 - 2 * a * X2 * Z2 - 8 * b * X * Z2 * Z + a * a * Z2 * Z2
    G = 4 * Z * (X2 * X + a * X * Z2 + b * Z2 * Z)
    return F, G


def height_difference_bound(curve: WeierstrassCurve) -> mpf:
    """Bound on |h_hat - h| in the x-height normalization.

    Twice the Silverman difference bound, doubled again as a safety margin.
    """
    j = curve.j_invariant
    hj = mpmath.log(max(abs(j.numerator), j.denominator, 1))
    hd = mpmath.log(abs(curve.discriminant))
    return 2 * (2 * (hj / 8 + hd / 12 + mpf("1.07")))


def _doubling_half_height(curve, p, tol, dps):
    a, b = curve.a, curve.b
    X, Z = p.x.numerator, p.x.denominator
    with mp.workdps(dps):
        bound = height_difference_bound(curve)
        steps = max(1, int(mpmath.ceil(mpmath.log(4 * bound / tol) / mpmath.log(4))))
    if steps > 400:
        raise PrecisionUnreachable(f"{steps} doubling steps needed for tol={tol}")
    work = dps + int(steps * 0.61) + 10
    resultant = curve.discriminant**2
    modulus = resultant ** (steps + 1)
    with mp.workdps(work):
        total = mpmath.log(max(abs(X), Z))
        xr, zr = mpf(X), mpf(Z)
        s = max(abs(xr), abs(zr))
        xr, zr = xr / s, zr / s
        xm, zm = X % modulus, Z % modulus
        weight = mpf(1)
        for _ in range(steps):
            weight /= 4
            fr, gr = _doubling_forms(a, b, xr, zr)
            s = max(abs(fr), abs(gr))
            fm, gm = _doubling_forms(a, b, xm, zm)
            g = gcd(fm % modulus, gm % modulus, modulus)
            modulus //= g
            xm, zm = (fm % (modulus * g)) // g % modulus, (gm % (modulus * g)) // g % modulus
            total += weight * (mpmath.log(s) - mpmath.log(g))
            xr, zr = fr / s, gr / s
        err = bound * weight + mpf(10) ** (-(dps - 15)) * (1 + abs(total))
        return total / 2, err / 2


def canonical_height(curve: WeierstrassCurve, p: CurvePoint, tol=DEFAULT_TOL,
                     normalization=DEFAULT_NORMALIZATION, budget: float = DEFAULT_FACTOR_BUDGET,
                     method: str = "auto", primes=None, seed: int = 0, dps: int | None = None) -> HeightValue:
    """Canonical height of ``p`` with absolute error at most ``tol``.

    ``method`` is ``"local"``, ``"doubling"`` or ``"auto"`` (local, falling
    back to doubling when factoring or the reduction search fails).
    ``primes`` may supply every prime dividing the discriminant.
    """
    normalization = Normalization.parse(normalization)
    if not curve.on_curve(p):
        raise OffCurveInput(f"{p} is not on {curve}")
    if p.is_infinity or is_torsion(curve, p):
        return HeightValue(mpf(0), mpf(0))
    tol = mpf(tol)
    if dps is None:
        dps = working_dps([p], tol)
    scale = normalization.scale

    if method in ("auto", "local"):
        try:
            if primes is None:
                primes = discriminant_primes(curve, budget, seed)
            value, err = _local_half_height(curve, p, tuple(primes), dps)
        except (FactorizationIncomplete, LocalReductionFailure):
            if method == "local":
                raise
        else:
            return _finish(value, err, scale, tol, dps)
    elif method != "doubling":
        raise ValueError(f"unknown method {method!r}")

    value, err = _doubling_half_height(curve, p, tol / scale, dps)
    return _finish(value, err, scale, tol, dps)


def _finish(value, err, scale, tol, dps) -> HeightValue:
    with mp.workdps(dps):
        value, err = scale * value, scale * err
    if err > tol:
        raise PrecisionUnreachable(f"error {err} exceeds tol {tol}")
    return HeightValue(value, err)


def pairing(curve, p, q, tol=DEFAULT_TOL, normalization=DEFAULT_NORMALIZATION, **kwargs) -> HeightValue:
    """<p, q> = (h(p+q) - h(p) - h(q)) / 2, errors summed."""
    dps = kwargs.setdefault("dps", working_dps([p, q], tol))
    hp = canonical_height(curve, p, tol, normalization, **kwargs)
    hq = canonical_height(curve, q, tol, normalization, **kwargs)
    hs = canonical_height(curve, curve.add(p, q), tol, normalization, **kwargs)
    with mp.workdps(dps):
        return HeightValue((hs.value - hp.value - hq.value) / 2, hs.err + hp.err + hq.err)


def _height_job(args):
    curve, p, tol, normalization, kwargs = args
    return canonical_height(curve, p, tol, normalization, **kwargs)


def height_pairing_matrix(curve, points, tol=DEFAULT_TOL, normalization=DEFAULT_NORMALIZATION,
                          workers: int = 1, **kwargs):
    """Symmetric Gram matrix of HeightValues; the 15 heights for 5 points are independent jobs."""
    normalization = Normalization.parse(normalization)
    n = len(points)
    kwargs.setdefault("dps", working_dps(points, tol))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    targets = list(points) + [curve.add(points[i], points[j]) for i, j in pairs]
    jobs = [(curve, t, tol, normalization, kwargs) for t in targets]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            heights = list(pool.map(_height_job, jobs))
    else:
        heights = [_height_job(j) for j in jobs]
    diag = heights[:n]
    gram = [[None] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = diag[i]
    for (i, j), hs in zip(pairs, heights[n:]):
        with mp.workdps(kwargs["dps"]):
            v = HeightValue((hs.value - diag[i].value - diag[j].value) / 2,
                            hs.err + diag[i].err + diag[j].err)
        gram[i][j] = gram[j][i] = v
    return tuple(tuple(row) for row in gram)


def gram_determinant(gram, dps: int | None = None) -> HeightValue:
    """Determinant with an enclosure from interval arithmetic over the entry errors."""
    n = len(gram)
    if n == 0:
        return HeightValue(mpf(1), mpf(0))
    if dps is None:
        dps = max(mp.dps, 50)
    iv = mpmath.iv
    old = iv.dps
    iv.dps = dps
    try:
        m = [[iv.mpf([gram[i][j].value - gram[i][j].err, gram[i][j].value + gram[i][j].err])
              for j in range(n)] for i in range(n)]
        if n <= 7:
            det = iv.mpf(0)
            for perm in itertools.permutations(range(n)):
                term = iv.mpf(_perm_sign(perm))
                for i, j in enumerate(perm):
                    term *= m[i][j]
                det += term
        else:
            det = _iv_elimination(m, iv)
        lo, hi = mpf(det.a), mpf(det.b)
    finally:
        iv.dps = old
    with mp.workdps(dps):
        mid = mpmath.matrix([[gram[i][j].value for j in range(n)] for i in range(n)])
        value = mpmath.det(mid)
        err = max(hi - value, value - lo)
    return HeightValue(value, err)


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for start in range(len(perm)):
        if start in seen:
            continue
        length, j = 0, start
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _iv_elimination(m, iv):
    n = len(m)
    m = [row[:] for row in m]
    det = iv.mpf(1)
    for k in range(n):
        piv = max(range(k, n), key=lambda r: abs(m[r][k].mid))
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for r in range(k + 1, n):
            f = m[r][k] / m[k][k]
            for c in range(k, n):
                m[r][c] -= f * m[k][c]
    return det


def _certified_nonzero(d: HeightValue) -> bool:
    return d.value > max(10 * d.err, INDEPENDENCE_FLOOR)


def independence_rank(gram) -> int:
    """Size of the largest principal minor certified positive."""
    n = len(gram)
    for size in range(n, 0, -1):
        for idx in itertools.combinations(range(n), size):
            sub = [[gram[i][j] for j in idx] for i in idx]
            if _certified_nonzero(gram_determinant(sub)):
                return size
    return 0


def certify_points(curve, points, tol=DEFAULT_TOL, normalization=DEFAULT_NORMALIZATION,
                   torsion: TorsionClass | None = None, workers: int = 1, **kwargs) -> RankCertificate:
    normalization = Normalization.parse(normalization)
    dps = kwargs.setdefault("dps", working_dps(points, tol))
    gram = height_pairing_matrix(curve, points, tol, normalization, workers=workers, **kwargs)
    det = gram_determinant(gram, dps)
    rank = len(points) if _certified_nonzero(det) else independence_rank(gram)
    return RankCertificate(gram, det, normalization, rank, torsion)


def family_primes(inst: FamilyInstance, budget: float = DEFAULT_FACTOR_BUDGET, seed: int = 0):
    """Primes of Delta = -64 K^3 found by factoring the four Heron forms separately."""
    primes = {2}
    for f in inst.heron_factors:
        fac = factor(f, budget=budget, seed=seed)
        if not fac.complete:
            raise FactorizationIncomplete(f"could not finish factoring Heron form {f}")
        primes.update(fac.primes)
    return tuple(sorted(primes))


def certify(inst: FamilyInstance, tol=DEFAULT_TOL, normalization=DEFAULT_NORMALIZATION,
            budget: float = DEFAULT_FACTOR_BUDGET, seed: int = 0, workers: int = 1,
            method: str = "auto", dps: int | None = None) -> RankCertificate:
    """Gram matrix, determinant and rank lower bound for the five family points."""
    kwargs = {"budget": budget, "seed": seed, "method": method}
    if dps is not None:
        kwargs["dps"] = dps
    if method != "doubling":
        try:
            kwargs["primes"] = family_primes(inst, budget, seed)
        except FactorizationIncomplete:
            if method == "local":
                raise
            kwargs["method"] = "doubling"
    torsion = classify(inst.k, budget=budget, seed=seed)
    return certify_points(inst.curve, list(inst.points), tol, normalization,
                          torsion=torsion, workers=workers, **kwargs)


def matching_scales(det: HeightValue, normalization, reference=REFERENCE_DETERMINANT, rtol=1e-3):
    """Which of det, det*32, det/32 lies within ``rtol`` of ``reference``.

    Returns a list of (label, value) pairs; a well-posed regression has
    exactly one entry.
    """
    normalization = Normalization.parse(normalization)
    candidates = [("det", det.value), ("det*32", det.value * 32), ("det/32", det.value / 32)]
    return [(label, v) for label, v in candidates if abs(v - reference) <= rtol * abs(reference)]
