import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import trial_factor
from rankforge.numtheory import (
    AllZero,
    ZeroInput,
    factor,
    fourth_power_free_part,
    gcd_reduce,
    integer_root,
    is_perfect_fourth_power,
    is_perfect_square,
    is_probable_prime,
)


def test_gcd_reduce_keeps_signs():
    assert gcd_reduce([1701, 1620, -567, 1539]) == [21, 20, -7, 19]
    assert gcd_reduce([0, -6, 9]) == [0, -2, 3]


def test_gcd_reduce_all_zero():
    with pytest.raises(AllZero):
        gcd_reduce([0, 0, 0])


@given(st.integers(min_value=-10**12, max_value=10**12).filter(lambda n: n != 0))
@settings(max_examples=200, deadline=None)
def test_factor_matches_trial_division(n):
    f = factor(n)
    assert f.complete
    assert f.value() == n
    assert dict(f.factors) == trial_factor(n)


def test_factor_large_semiprime():
    p, q = 10000000019, 100000000003
    f = factor(p * q * 2**5 * 3)
    assert f.complete
    assert dict(f.factors) == {2: 5, 3: 1, p: 1, q: 1}


def test_factor_prime_power_above_trial_limit():
    p = 1000003
    f = factor(p**4 * 7)
    assert dict(f.factors) == {7: 1, p: 4}


def test_factor_budget_exhausted_leaves_cofactor():
    # two 30-digit primes: far beyond rho in a tenth of a second
    p = 100000000000000000000000000319
    q = 1000000000000000000000000000057
    t = time.monotonic()
    f = factor(p * q, budget=0.1)
    assert time.monotonic() - t < 2
    assert not f.complete
    assert f.cofactor == p * q
    assert f.value() == p * q


def test_factor_is_deterministic():
    n = 1000000007 * 998244353 * 1000000009
    assert factor(n, seed=5) == factor(n, seed=5)


def test_probable_prime_small_range():
    primes = [n for n in range(2000) if is_probable_prime(n)]
    assert primes == [n for n in range(2, 2000) if trial_factor(n) == {n: 1}]
    assert not is_probable_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


@given(st.integers(min_value=0, max_value=10**40), st.integers(min_value=2, max_value=6))
def test_integer_root(n, k):
    r = integer_root(n**k, k)
    assert r == n
    if n > 1:
        assert integer_root(n**k + 1, k) is None


def test_square_and_fourth_power():
    assert is_perfect_square(0) and is_perfect_square(144) and not is_perfect_square(-4)
    assert is_perfect_fourth_power(81) and not is_perfect_fourth_power(27)


@given(st.integers(min_value=-10**9, max_value=10**9).filter(lambda n: n != 0),
       st.integers(min_value=1, max_value=50))
@settings(deadline=None)
def test_fourth_power_free_part(k, m):
    n = k * m**4
    d, mm = fourth_power_free_part(n)
    assert d * mm**4 == n
    assert all(e < 4 for e in trial_factor(d).values())


def test_fourth_power_free_part_zero():
    with pytest.raises(ZeroInput):
        fourth_power_free_part(0)
