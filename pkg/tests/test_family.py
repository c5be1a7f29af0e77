import pytest
from hypothesis import given
from hypothesis import strategies as st

from rankforge.curve import point
from rankforge.family import (
    DegenerateSolution,
    build_instance,
    build_points,
    curve_coefficient,
    heron_factors,
    sixteen_s2,
)
from rankforge.quartic import QuarticSolution, parametrized_solution, solution_corpus

E2_K = 2716157340889414533900362432217058675869770553600
CORPUS = solution_corpus(25)


def test_seed_coefficient():
    assert curve_coefficient(QuarticSolution(21, 20, 7, 19)) == -126878400


def test_n2_coefficient():
    assert curve_coefficient(parametrized_solution(2)) == E2_K


@pytest.mark.parametrize("abcd,k", [
    ((607, 951, 1640, 1999), 9749352988442901002400000),
    ((181, 1247, 1620, 2077), 4988940634912192616750400),
])
def test_example_curves(abcd, k):
    assert curve_coefficient(QuarticSolution(*abcd)) == k


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_heron_product_identity(a, b, c):
    A4, B4, C4 = a**4, b**4, c**4
    lhs = -(A4 * A4 + B4 * B4 + C4 * C4 - 2 * (A4 * B4 + A4 * C4 + B4 * C4))
    assert sixteen_s2(a, b, c) == lhs
    f = heron_factors(a, b, c)
    assert f[0] * f[1] * f[2] * f[3] == lhs


@pytest.mark.parametrize("s", CORPUS, ids=lambda s: str(s.height()))
def test_points_on_curve(s):
    inst = build_instance(s)
    assert 4 * inst.k == -inst.sixteen_s2
    assert len(inst.points) == 5
    assert all(inst.curve.on_curve(p) for p in inst.points)


def test_point_x_coordinates():
    s = QuarticSolution(21, 20, 7, 19)
    xs = [p.x for p in build_points(s)]
    assert xs == [21**2 * 20**2, 21**2 * 7**2, 20**2 * 7**2, 20**2 * 19**2, 7**2 * 19**2]


def test_invalid_and_degenerate():
    with pytest.raises(DegenerateSolution):
        build_instance(QuarticSolution(2, 1, 1, 1))
    with pytest.raises(DegenerateSolution):
        build_instance(QuarticSolution(1, 1, 1, 1))


def test_printed_point_list_transcription():
    # two entries of the printed n = 2 point list lost digits in typesetting
    inst = build_instance(parametrized_solution(2))
    c = inst.curve
    p23, p25 = inst.points[2], inst.points[4]
    printed_x23, printed_y25 = 23710164715943220558400, 141744467546800549687092185696272575
    assert str(p23.x) == str(printed_x23)[:2] + "3" + str(printed_x23)[2:]
    assert str(p25.y) == str(printed_y25) + "59"
    assert not c.on_curve(point(printed_x23, p23.y))
    assert not c.on_curve(point(p25.x, printed_y25))
