"""Exact integer utilities: gcd reduction, perfect powers, factoring.

Everything here works on plain Python ints, which are arbitrary precision.
Factoring is trial division followed by Brent's variant of Pollard rho,
bounded by a wall-clock budget; an incomplete factorization is a legal
result and callers decide how to degrade.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from functools import lru_cache, reduce
from math import gcd, isqrt, prod

from .errors import RankforgeError

TRIAL_LIMIT = 10**6
DEFAULT_FACTOR_BUDGET = 30.0
MR_ROUNDS = 64

_BLOCK = 256


class AllZero(RankforgeError, ValueError):
    pass


class ZeroInput(RankforgeError, ValueError):
    pass


@dataclass(frozen=True)
class Factorization:
    """Result of :func:`factor`.

    ``sign(input) * prod(p**e) * cofactor == input``; ``cofactor`` is the
    product of whatever composite parts were left when the budget ran out.
    """

    input: int
    factors: tuple[tuple[int, int], ...] = ()
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        sign = -1 if self.input < 0 else 1
        return sign * prod(p**e for p, e in self.factors) * self.cofactor


def gcd_reduce(values):
    """Divide ``values`` by their positive gcd, keeping signs.

    >>> gcd_reduce([1701, 1620, -567, 1539])
    [21, 20, -7, 19]
    """
    values = [int(v) for v in values]
    if not values:
        raise ValueError("gcd_reduce needs at least one value")
    g = reduce(gcd, values, 0)
    if g == 0:
        raise AllZero("all entries are zero")
    return [v // g for v in values]


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of ``n >= 0`` or None."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    r = _iroot_floor(n, k)
    return r if r**k == n else None


def _iroot_floor(n: int, k: int) -> int:
    if k == 2:
        return isqrt(n)
    # Newton from an upper bound; converges monotonically downward
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def is_perfect_fourth_power(n: int) -> bool:
    return n >= 0 and integer_root(n, 4) is not None


@lru_cache(maxsize=None)
def small_primes(limit: int = TRIAL_LIMIT) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@lru_cache(maxsize=None)
def _prime_blocks(limit: int = TRIAL_LIMIT):
    ps = small_primes(limit)
    blocks = []
    for i in range(0, len(ps), _BLOCK):
        chunk = ps[i : i + _BLOCK]
        blocks.append((chunk, prod(chunk)))
    return tuple(blocks)


def is_probable_prime(n: int, rounds: int = MR_ROUNDS, rng: random.Random | None = None) -> bool:
    """Strong probable-prime (Miller-Rabin) test with ``rounds`` random bases."""
    if n < 2:
        return False
    for p in small_primes(1000)[:25]:
        if n % p == 0:
            return n == p
    if rng is None:
        rng = random.Random(n)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int, rng: random.Random, deadline: float) -> int | None:
    """One nontrivial factor of composite odd ``n``, or None on timeout."""
    m = 128
    while time.monotonic() < deadline:
        y, c = rng.randrange(1, n), rng.randrange(1, n)
        g = r = q = 1
        x = ys = y
        timed_out = False
        while g == 1 and not timed_out:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
                # checked once per block so the budget holds for large r
                if time.monotonic() > deadline:
                    timed_out = True
                    break
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def factor(n: int, budget: float = DEFAULT_FACTOR_BUDGET, seed: int = 0) -> Factorization:
    """Factor ``n`` (``|n| >= 1``) within ``budget`` seconds.

    Trial division by every prime below 10**6, then Pollard-Brent rho on the
    remaining composites. Anything left unsplit when time runs out is
    returned as ``cofactor`` and ``complete`` is False.
    """
    n = int(n)
    if n == 0:
        raise ZeroInput("cannot factor 0")
    deadline = time.monotonic() + budget
    rng = random.Random(seed)
    m = abs(n)
    found: dict[int, int] = {}

    for chunk, chunk_prod in _prime_blocks():
        if m == 1 or chunk[0] * chunk[0] > m:
            break
        if gcd(m, chunk_prod) == 1:
            continue
        for p in chunk:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                found[p] = e
    trial_done = m == 1 or small_primes()[-1] ** 2 >= m
    if m > 1 and trial_done:
        # everything below 10**6 is gone, so what is left is prime
        found[m] = found.get(m, 0) + 1
        m = 1

    cofactor = 1
    stack = [m] if m > 1 else []
    while stack:
        c = stack.pop()
        if is_probable_prime(c, rng=rng):
            found[c] = found.get(c, 0) + 1
            continue
        root = _perfect_power(c)
        if root is not None:
            base, k = root
            stack.extend([base] * k)
            continue
        d = _brent(c, rng, deadline)
        if d is None:
            cofactor *= c
            continue
        stack.extend([d, c // d])

    return Factorization(n, tuple(sorted(found.items())), cofactor)


def _perfect_power(n: int) -> tuple[int, int] | None:
    for k in range(2, n.bit_length() + 1):
        if 2**k > n:
            break
        r = _iroot_floor(n, k)
        if r**k == n:
            return r, k
    return None


def fourth_power_free_part(n: int, budget: float = DEFAULT_FACTOR_BUDGET, seed: int = 0):
    """Write ``n = k * m**4`` with ``k`` fourth-power-free and ``m > 0``.

    Returns ``(k, m)``; ``k`` carries the sign of ``n``. Returns None when
    the factorization stayed incomplete and the leftover cofactor is large
    enough to hide a fourth power.
    """
    n = int(n)
    if n == 0:
        raise ZeroInput("0 has no fourth-power-free part")
    f = factor(n, budget=budget, seed=seed)
    m = 1
    k = -1 if n < 0 else 1
    for p, e in f.factors:
        m *= p ** (e // 4)
        k *= p ** (e % 4)
    c = f.cofactor
    if c != 1:
        # every prime of c exceeds TRIAL_LIMIT, so p**4 | c forces c >= TRIAL_LIMIT**4
        if c >= TRIAL_LIMIT**4:
            return None
        k *= c
    return k, m
