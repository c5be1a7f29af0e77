import random
from fractions import Fraction

import mpmath
import pytest

from rankforge.curve import INFINITY, InfinityInput, WeierstrassCurve, point
from rankforge.family import build_instance
from rankforge.heights import (
    DEFAULT_NORMALIZATION,
    HeightValue,
    Normalization,
    archimedean_local_height,
    canonical_height,
    certify,
    certify_points,
    gram_determinant,
    height_pairing_matrix,
    is_torsion,
    matching_scales,
    naive_height,
    pairing,
    reduce_model,
    working_dps,
)
from rankforge.quartic import QuarticSolution, parametrized_solution

E = WeierstrassCurve(-36, 0)
P = point(-3, 9)
TOL = mpmath.mpf("1e-10")
SEED = build_instance(QuarticSolution(21, 20, 7, 19))


def naive_limit(curve, p, j):
    """4^-j h(x(2^j p)) computed by brute force."""
    q = curve.scalar_mul(2**j, p)
    return naive_height(q) / 4**j


def test_naive_height_examples():
    assert naive_height(point(Fraction(25, 4), Fraction(-35, 8))) == mpmath.log(25)
    assert naive_height(P) == mpmath.log(3)
    x = 110502951275524201934400
    assert naive_height(point(x, 0)) == mpmath.log(x)
    with pytest.raises(InfinityInput):
        naive_height(INFINITY)


def test_torsion_point_has_zero_height():
    for k in (-36, 4, -126878400):
        h = canonical_height(WeierstrassCurve(k, 0), point(0, 0))
        assert abs(h.value) <= TOL
    c4 = WeierstrassCurve(4, 0)
    assert is_torsion(c4, point(2, 4))
    assert canonical_height(c4, point(2, 4)).value == 0
    assert not is_torsion(E, P)


def test_matches_naive_limit_at_j8():
    h = canonical_height(E, P, normalization="x")
    assert abs(h.value - naive_limit(E, P, 8)) < 1e-6


@pytest.mark.parametrize("method", ["local", "doubling"])
def test_quadraticity(method):
    h = canonical_height(E, P, method=method)
    for n in (2, 3, 4):
        hn = canonical_height(E, E.scalar_mul(n, P), method=method)
        assert abs(hn.value - n * n * h.value) <= n * n * 2 * TOL


def test_parallelogram_law():
    rng = random.Random(7)
    mults = [E.scalar_mul(n, P) for n in range(-5, 6) if n]
    for _ in range(20):
        p, q = rng.choice(mults), rng.choice(mults)
        s, d = E.add(p, q), E.sub(p, q)
        lhs = sum((canonical_height(E, r).value for r in (s, d)), mpmath.mpf(0))
        rhs = 2 * canonical_height(E, p).value + 2 * canonical_height(E, q).value
        assert abs(lhs - rhs) <= 8 * TOL


@pytest.mark.parametrize("i", range(5))
def test_oracle_equivalence_on_seed_instance(i):
    p = SEED.points[i]
    a = canonical_height(SEED.curve, p, method="local")
    b = canonical_height(SEED.curve, p, method="doubling")
    assert abs(a.value - b.value) <= 2 * TOL


@pytest.mark.parametrize("curve,p", [
    (WeierstrassCurve(-2, 0), point(-1, 1)),     # egg component
    (WeierstrassCurve(-2, 0), point(2, 2)),
    (WeierstrassCurve(1, 1), point(0, 1)),       # one real root
    (WeierstrassCurve(-43, 166), point(3, 8)),
])
def test_oracle_equivalence_general_curves(curve, p):
    if is_torsion(curve, p):
        assert canonical_height(curve, p).value == 0
        return
    a = canonical_height(curve, p, method="local")
    b = canonical_height(curve, p, method="doubling")
    assert abs(a.value - b.value) <= 2 * TOL


def test_non_minimal_model():
    # scaling by u = 5 must not change the height
    p5 = point(-3 * 25, 9 * 125)
    c5 = WeierstrassCurve(-36 * 5**4, 0)
    assert reduce_model(c5, [2, 3, 5]) == (E, 5)
    h, h5 = canonical_height(E, P), canonical_height(c5, p5)
    assert abs(h.value - h5.value) <= 2 * TOL


def test_normalizations_differ_by_two():
    hx = canonical_height(E, P, normalization=Normalization.X)
    hh = canonical_height(E, P, normalization=Normalization.HALF)
    assert abs(hx.value - 2 * hh.value) <= 2 * TOL
    assert DEFAULT_NORMALIZATION is Normalization.X
    assert Normalization.parse("auto") is Normalization.X


def test_archimedean_is_model_independent():
    with mpmath.workdps(60):
        a = archimedean_local_height(E, P.x)
        b = archimedean_local_height(WeierstrassCurve(-36 * 16, 0), P.x * 4)
        assert abs(a.value - b.value) < mpmath.mpf("1e-40")


def test_pairing_properties():
    q = E.scalar_mul(3, P)
    hp = canonical_height(E, P)
    pp = pairing(E, P, P)
    pq, qp = pairing(E, P, q), pairing(E, q, P)
    neg = pairing(E, P, E.negate(P))
    with mpmath.workdps(80):
        assert abs(pp.value - hp.value) <= pp.err + hp.err
        assert abs(pq.value - qp.value) <= 2 * max(pq.err, qp.err)
        assert abs(pq.value - 3 * hp.value) <= pq.err + 3 * hp.err
        assert abs(neg.value + hp.value) <= neg.err + hp.err


def test_dependent_points_certificate():
    cert = certify_points(E, [P, E.scalar_mul(2, P)])
    assert abs(cert.determinant.value) <= 10 * cert.determinant.err
    assert cert.rank_lower_bound == 1


def test_single_point_determinant():
    cert = certify_points(E, [P])
    h = canonical_height(E, P)
    assert abs(cert.determinant.value - h.value) <= cert.determinant.err + h.err
    assert cert.rank_lower_bound == 1


@pytest.fixture(scope="module")
def n2_cert():
    return certify(build_instance(parametrized_solution(2)))


def test_n2_certificate(n2_cert):
    assert n2_cert.rank_lower_bound == 5
    d = n2_cert.determinant
    assert d.value > max(10 * d.err, 1e-6)
    assert [label for label, _ in matching_scales(d, n2_cert.normalization)] == ["det"]


def test_gram_symmetric_and_psd(n2_cert):
    g = n2_cert.gram
    n = len(g)
    for i in range(n):
        for j in range(n):
            assert g[i][j] == g[j][i]
    for k in range(1, n + 1):
        minor = gram_determinant([row[:k] for row in g[:k]])
        assert minor.value >= -minor.err


def test_determinant_permutation_invariance(n2_cert):
    inst = build_instance(parametrized_solution(2))
    order = [3, 0, 4, 2, 1]
    cert = certify_points(inst.curve, [inst.points[i] for i in order],
                          dps=working_dps(inst.points))
    a, b = n2_cert.determinant, cert.determinant
    assert abs(a.value - b.value) <= a.err + b.err


def test_half_normalization_scale(n2_cert):
    inst = build_instance(parametrized_solution(2))
    half = certify(inst, normalization="half")
    ratio = n2_cert.determinant.value / half.determinant.value
    assert abs(ratio - 32) < 1e-9
    assert [label for label, _ in matching_scales(half.determinant, "half")] == ["det*32"]


def test_workers_bit_identical():
    pts = list(SEED.points[:3])
    a = height_pairing_matrix(SEED.curve, pts, workers=1)
    b = height_pairing_matrix(SEED.curve, pts, workers=3)
    assert a == b


def test_height_value_unpacks():
    v, e = HeightValue(mpmath.mpf(1), mpmath.mpf(0))
    assert v == 1 and e == 0
