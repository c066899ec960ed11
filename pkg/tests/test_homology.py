"""Shear star-actions on the punctured torus and the fixing-word audit."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eatonflow.errors import InputError, SingularPointError
from eatonflow.homology import (
    Point,
    apply_matrix,
    build_fixing_word,
    in_central_strip,
    negation_symmetry_check,
    reduce_point,
    slit_point,
    star_power,
    star_step,
    star_word,
    verify_fixing_word,
)
from eatonflow.mat2 import Gen, IDENTITY, SHEAR_X, is_proj_identity, shear_power

coords = st.fractions(min_value=-F(1, 2), max_value=F(1, 2), max_denominator=64)


def torus_points():
    def build(x, y):
        try:
            return reduce_point(x, y)
        except SingularPointError:
            return reduce_point(x + F(1, 128), y + F(3, 128))
    return st.builds(build, coords, coords)


def test_point_validation():
    Point(F(1, 4), F(-1, 2))
    with pytest.raises(InputError):
        Point(F(1, 2), F(0))      # right edge excluded
    with pytest.raises(SingularPointError):
        Point(F(0), F(0))
    with pytest.raises(SingularPointError):
        Point(F(-1, 2), F(-1, 2))
    assert tuple(Point(F(1, 8), F(1, 4))) == (F(1, 8), F(1, 4))


def test_reduce_point_wraps():
    assert reduce_point(F(3, 4), F(0)) == Point(F(-1, 4), F(0))
    assert reduce_point(F(-1, 2), F(9, 4)) == Point(F(-1, 2), F(1, 4))
    assert reduce_point(F(7, 2) + F(1, 8), F(1, 8)) == Point(F(-3, 8), F(1, 8))


def test_negation():
    z = Point(F(1, 4), F(-3, 8))
    assert -z == Point(F(-1, 4), F(3, 8))
    edge = Point(F(-1, 2), F(1, 4))
    assert (-edge).x == F(-1, 2)  # -1/2 negates back onto itself mod 1


def test_apply_matrix_wraps():
    z = Point(F(3, 8), F(1, 4))
    assert apply_matrix(SHEAR_X, z) == Point(F(-3, 8), F(1, 4))


def test_central_strip():
    assert in_central_strip(Point(F(1, 8), F(1, 8)))
    assert not in_central_strip(Point(F(3, 8), F(1, 4)))
    assert in_central_strip(Point(F(-1, 2), F(1, 4)))  # sum -1/4, no wrap
    assert not in_central_strip(Point(F(-1, 2), F(-1, 4)))


def test_star_step_sign():
    z = Point(F(1, 8), F(1, 8))
    img, t = star_step(Gen.X, z)
    assert img == Point(F(1, 4), F(1, 8)) and t == 1
    w = Point(F(3, 8), F(1, 4))
    img, t = star_step(Gen.X, w)
    assert img == Point(F(-3, 8), F(1, 4)) and t == -1


@settings(max_examples=60)
@given(st.sampled_from(list(Gen)), st.integers(min_value=0, max_value=80), torus_points())
def test_star_power_matches_iterated_steps(gen, n, z):
    pt, t = star_power(gen, n, z)
    cur, total = z, IDENTITY
    for _ in range(n):
        cur, step = star_step(gen, cur)
        total = shear_power(gen, step) @ total
    assert pt == cur
    assert shear_power(gen, t) == total
    assert (t - n) % 2 == 0


def test_star_power_rejects_negative():
    with pytest.raises(InputError):
        star_power(Gen.X, -1, Point(F(1, 8), F(1, 8)))


@settings(max_examples=40)
@given(torus_points(),
       st.lists(st.tuples(st.sampled_from(list(Gen)), st.integers(0, 30)),
                min_size=2, max_size=6))
def test_star_word_chain_rule(z, letters):
    word = tuple(letters)
    cut = len(word) // 2
    left, right = word[:cut], word[cut:]
    full = star_word(word, z)
    first = star_word(right, z)
    second = star_word(left, first.point)
    assert full.point == second.point
    assert full.action == second.action @ first.action


def test_star_word_trace_order():
    word = ((Gen.X, 2), (Gen.Y, 3))
    res = star_word(word, Point(F(1, 8), F(1, 8)))
    assert [e.gen for e in res.trace] == [Gen.Y, Gen.X]  # rightmost applied first
    assert res.trace[-1].point == res.point
    with pytest.raises(InputError):
        star_word((), Point(F(1, 8), F(1, 8)))
    with pytest.raises(InputError):
        star_word(((Gen.X, -2),), Point(F(1, 8), F(1, 8)))


def test_build_fixing_word_frozen():
    word = build_fixing_word(14, 16, 24)
    assert [n for _, n in word] == [15, 1, 1, 16, 24, 13, 1, 1, 14, 24]
    assert [g for g, _ in word] == [Gen.X, Gen.Y] * 5
    with pytest.raises(InputError):
        verify_fixing_word(1, 1, 3, 0)


def test_slit_point():
    assert slit_point(0, 1, 2) == Point(F(0), F(1, 4))
    assert slit_point(1, 1, 3) == Point(F(1, 6), F(1, 6))
    assert slit_point(1, -1, 3) == Point(F(1, 6), F(-1, 6))
    with pytest.raises(InputError):
        slit_point(0, 2, 4)


def test_verify_fixing_word_frozen_cases():
    rep = verify_fixing_word(0, 1, 2, 1)
    assert (rep.a, rep.d, rep.n) == (10, 10, 16)
    assert rep.fixed_point and rep.action_trivial and rep.passed
    assert is_proj_identity(rep.action)

    rep = verify_fixing_word(1, 1, 3, 1)
    assert (rep.a, rep.d, rep.n) == (14, 16, 24)
    assert rep.passed

    rep = verify_fixing_word(1, 1, 3, 2)
    assert rep.n == 48 and rep.passed


def test_verify_fixing_word_mirrored_slope():
    rep = verify_fixing_word(0, -1, 2, 1)
    assert (rep.a, rep.d) == (10, 10)
    assert rep.passed
    rep = verify_fixing_word(-1, -1, 3, 1)
    assert rep.passed


def test_verify_fixing_word_invalid_params():
    with pytest.raises(InputError):
        verify_fixing_word(0, 2, 4, 1)


def test_negation_symmetry():
    z = Point(F(1, 8), F(1, 8))
    assert negation_symmetry_check(((Gen.X, 2),), z)
    assert negation_symmetry_check(((Gen.Y, 2), (Gen.X, 5)), z)
    with pytest.raises(InputError):
        # the image of z under three steps lands on the symmetry locus
        negation_symmetry_check(((Gen.X, 3),), z)
    with pytest.raises(InputError):
        negation_symmetry_check(((Gen.X, 2),), Point(F(-1, 2), F(1, 4)))


@settings(max_examples=40)
@given(torus_points(),
       st.lists(st.tuples(st.sampled_from(list(Gen)), st.integers(0, 20)),
                min_size=1, max_size=4))
def test_negation_symmetry_generic(z, letters):
    if not z.in_smooth_part():
        return
    try:
        assert negation_symmetry_check(tuple(letters), z)
    except InputError:
        pass  # image landed on the symmetry locus; precondition, not failure
