"""Continued fractions, shear words, and the ergodic block patterns."""

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eatonflow.cf import (
    Convergent,
    block_exponents,
    block_lower_bounds_hold,
    cf_value,
    convergents,
    direction_enclosure,
    ergodic_quotients,
    solve_block_pair,
    validate_quotients,
    validate_slit_params,
    word_matrix,
)
from eatonflow.errors import InputError
from eatonflow.mat2 import IDENTITY

quotient_lists = st.lists(st.integers(min_value=1, max_value=30), min_size=1, max_size=14)


def test_convergent_recurrence_frozen():
    cs = convergents([9, 1, 1, 10])
    assert [(c.index, c.p, c.q) for c in cs] == [
        (1, 1, 9), (2, 1, 10), (3, 2, 19), (4, 21, 200)]
    assert cs[-1].value == F(21, 200)
    assert cf_value([9, 1, 1, 10]) == F(21, 200)


def test_convergents_prefix():
    assert convergents([2, 3, 4], 2) == convergents([2, 3])
    with pytest.raises(InputError):
        convergents([2, 3], 5)
    with pytest.raises(InputError):
        convergents([2, 3], 0)


def test_quotient_validation():
    with pytest.raises(InputError):
        validate_quotients([])
    with pytest.raises(InputError):
        validate_quotients([1, 0, 2])
    with pytest.raises(InputError):
        validate_quotients([1, -3])
    with pytest.raises(InputError):
        cf_value([F(1, 2)])


@given(quotient_lists)
def test_cf_value_by_backward_evaluation(quots):
    # independent route: fold the fraction from the tail
    val = F(0)
    for a in reversed(quots):
        val = 1 / (a + val)
    assert cf_value(quots) == val


@given(quotient_lists)
def test_neighbor_convergents_are_unimodular(quots):
    cs = convergents(quots)
    p_prev, q_prev = 0, 1
    for c in cs:
        assert c.p * q_prev - c.q * p_prev in (1, -1)
        p_prev, q_prev = c.p, c.q


@given(quotient_lists)
def test_word_matrix_columns_are_convergents(quots):
    k = len(quots) - (len(quots) % 2)
    if k == 0:
        return
    m = word_matrix(quots, k)
    cs = convergents(quots, k)
    assert (m.a, m.c) == (cs[-1].q, cs[-1].p)
    assert (m.b, m.d) == (cs[-2].q, cs[-2].p)
    assert m.det() == 1


def test_word_matrix_edges():
    assert word_matrix([5, 2], 0) == IDENTITY
    with pytest.raises(InputError):
        word_matrix([5, 2], 1)  # odd prefix
    with pytest.raises(InputError):
        word_matrix([5, 2], 4)


def test_direction_enclosure_endpoints():
    br = direction_enclosure([9, 1, 1, 10, 16, 9, 1, 1, 10, 16], 160)
    assert br.lo == F(1095120, 10429561)   # p10/q10
    assert br.hi == F(1163161, 11077561)   # mediant with p9/q9
    assert br.width < F(1, 10 ** 13)
    # the enclosure traps every continuation of the prefix
    for nxt in (1, 7, 200):
        assert cf_value([9, 1, 1, 10, 16, 9, 1, 1, 10, 16, nxt]) in br


@given(quotient_lists, st.integers(min_value=1, max_value=50))
def test_direction_enclosure_contains_continuations(quots, nxt):
    br = direction_enclosure(quots, 4096)
    assert cf_value(quots) in br
    assert cf_value(list(quots) + [nxt]) in br


def test_direction_enclosure_early_stop():
    # a loose precision request stops at a short prefix
    wide = direction_enclosure([2, 2, 2, 2, 2, 2], 2)
    tight = direction_enclosure([2, 2, 2, 2, 2, 2], 128)
    assert wide.width <= F(1, 4)
    assert tight.width < wide.width
    assert tight.lo >= wide.lo and tight.hi <= wide.hi


def test_slit_param_validation():
    validate_slit_params(0, 1, 2)
    validate_slit_params(1, 1, 3)
    validate_slit_params(-2, 3, 5)
    with pytest.raises(InputError):
        validate_slit_params(0, 1, 1)     # q too small
    with pytest.raises(InputError):
        validate_slit_params(0, 0, 2)     # s zero
    with pytest.raises(InputError):
        validate_slit_params(3, 1, 3)     # |r| not < q
    with pytest.raises(InputError):
        validate_slit_params(0, 2, 4)     # gcd(s,q) > 1
    with pytest.raises(InputError):
        validate_slit_params(2, 3, 9)     # gcd(3,9)=3
    with pytest.raises(InputError):
        validate_slit_params(0, 2, 5)     # r,s both even


def test_solve_block_pair_frozen():
    assert solve_block_pair(0, 1, 2) == (10, 10)
    assert solve_block_pair(1, 1, 3) == (14, 16)


@given(st.integers(min_value=2, max_value=9))
def test_solve_block_pair_congruences(q):
    from math import gcd

    for r in range(-q + 1, q):
        for s in range(-q + 1, q):
            if s == 0 or gcd(s, q) != 1 or (r % 2 == 0 and s % 2 == 0):
                continue
            a, d = solve_block_pair(r, s, q)
            m = 2 * q
            assert (r + a * s) % m == (-q) % m
            assert (d * s - r) % m == (-q) % m
            assert 4 * q < a <= 6 * q and 4 * q < d <= 6 * q


def test_block_exponents_shape():
    assert block_exponents(14, 16, 24) == (15, 1, 1, 16, 24, 13, 1, 1, 14, 24)
    assert block_exponents(10, 10, 16) == (9, 1, 1, 10, 16, 9, 1, 1, 10, 16)


def test_ergodic_quotients_frozen():
    assert ergodic_quotients(0, 1, 2, [16], 1) == (9, 1, 1, 10, 16, 9, 1, 1, 10, 16)
    two = ergodic_quotients(0, 1, 2, [16, 32], 2)
    assert two[:10] == (9, 1, 1, 10, 16, 9, 1, 1, 10, 16)
    assert two[10:] == (9, 1, 1, 10, 32, 9, 1, 1, 10, 32)


def test_ergodic_quotients_validation():
    with pytest.raises(InputError):
        ergodic_quotients(0, 1, 2, [16], 0)        # no blocks
    with pytest.raises(InputError):
        ergodic_quotients(0, 1, 2, [], 1)          # n_seq too short
    with pytest.raises(InputError):
        ergodic_quotients(0, 1, 2, [8], 1)         # not a multiple of 8q
    with pytest.raises(InputError):
        ergodic_quotients(0, 1, 2, [24], 1)        # multiple of 8, not of 16


def test_block_lower_bounds():
    quots = ergodic_quotients(0, 1, 2, [16, 16], 2)
    assert block_lower_bounds_hold(0, 1, 2, quots)
    broken = list(quots)
    broken[9] = 1  # kill the first n-position
    assert not block_lower_bounds_hold(0, 1, 2, broken), broken
