from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankforge.curve import (
    INFINITY,
    InfinityInput,
    OffCurveInput,
    SingularCurve,
    TorsionMultiple,
    TwoTorsionInput,
    WeierstrassCurve,
    point,
)
from rankforge.family import build_instance
from rankforge.quartic import QuarticSolution

E = WeierstrassCurve(-36, 0)
P = point(-3, 9)
SEED = build_instance(QuarticSolution(21, 20, 7, 19))
small = st.integers(min_value=-6, max_value=6)


def test_point_on_curve():
    assert E.on_curve(P)
    assert E.on_curve(INFINITY)
    assert not E.on_curve(point(1, 1))


def test_singular_curve():
    with pytest.raises(SingularCurve):
        WeierstrassCurve(0, 0)
    with pytest.raises(SingularCurve):
        WeierstrassCurve(-3, 2)


def test_doubling_known_value():
    assert E.add(P, P) == point(Fraction(25, 4), Fraction(-35, 8))


def test_off_curve_rejected():
    with pytest.raises(OffCurveInput):
        E.add(P, point(1, 1))


def test_two_torsion():
    t = point(6, 0)
    assert E.add(t, t) == INFINITY
    with pytest.raises(TwoTorsionInput):
        E.division_poly_eval(t, 3)


@given(small, small, small)
def test_group_axioms_on_helper(i, j, k):
    p, q, r = (E.scalar_mul(n, P) for n in (i, j, k))
    assert E.add(p, INFINITY) == p
    assert E.add(p, E.negate(p)) == INFINITY
    assert E.add(p, q) == E.add(q, p)
    assert E.add(E.add(p, q), r) == E.add(p, E.add(q, r))
    assert E.add(p, q) == E.scalar_mul(i + j, P)


@given(st.sampled_from(range(5)), st.sampled_from(range(5)), st.sampled_from(range(5)))
@settings(deadline=None, max_examples=40)
def test_group_axioms_on_family_curve(i, j, k):
    c = SEED.curve
    p, q, r = SEED.points[i], SEED.points[j], c.negate(SEED.points[k])
    assert c.add(c.add(p, q), r) == c.add(p, c.add(q, r))
    assert c.sub(c.add(p, q), q) == p


def test_divpoly_matches_group_law_helper():
    for n in range(1, 13):
        assert E.multiple_via_divpoly(P, n) == E.scalar_mul(n, P)


@pytest.mark.parametrize("i", range(5))
def test_divpoly_matches_group_law_family(i):
    c, p = SEED.curve, SEED.points[i]
    for n in range(1, 13):
        assert c.multiple_via_divpoly(p, n) == c.scalar_mul(n, p)


def test_divpoly_small_values():
    v = E.division_poly_eval(P, 2)
    assert v.psi == 2 * P.y
    v3 = E.division_poly_eval(P, 3)
    x = P.x
    assert v3.psi == 3 * x**4 + 6 * E.a * x**2 - E.a**2


def test_divpoly_torsion_multiple():
    c = WeierstrassCurve(4, 0)
    t = point(2, 4)  # order 4
    with pytest.raises(TorsionMultiple):
        c.multiple_via_divpoly(t, 4)


def test_divpoly_needs_affine_point():
    with pytest.raises(InfinityInput):
        E.division_poly_eval(INFINITY, 2)


def test_negative_multiple():
    assert E.scalar_mul(-3, P) == E.negate(E.scalar_mul(3, P))
    assert E.scalar_mul(0, P) == INFINITY
