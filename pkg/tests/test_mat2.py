"""Integer matrix algebra and the quarter-turn conjugation identities."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eatonflow.errors import InputError
from eatonflow.mat2 import (
    Gen,
    IDENTITY,
    IMat,
    QUARTER_TURN,
    SHEAR_X,
    SHEAR_Y,
    is_proj_identity,
    proj_equal,
    shear_power,
)

exponents = st.integers(min_value=-40, max_value=40)


def test_matmul_and_det():
    m = IMat(2, 1, 1, 1)
    assert m @ IDENTITY == m
    assert m.det() == 1
    assert (m @ m) == IMat(5, 3, 3, 2)
    assert QUARTER_TURN.det() == 1


def test_inverse():
    m = SHEAR_X @ SHEAR_Y @ SHEAR_X
    assert m @ m.inverse() == IDENTITY
    assert m.inverse() @ m == IDENTITY
    with pytest.raises(InputError):
        IMat(2, 0, 0, 2).inverse()


@given(exponents)
def test_shear_power_closed_form(n):
    assert shear_power(Gen.X, n) == SHEAR_X ** n
    assert shear_power(Gen.Y, n) == SHEAR_Y ** n


def test_pow_edge_cases():
    assert SHEAR_X ** 0 == IDENTITY
    assert QUARTER_TURN ** 4 == IDENTITY
    assert QUARTER_TURN ** -1 == QUARTER_TURN.inverse()


def test_apply_is_column_action():
    assert SHEAR_X.apply(3, 5) == (8, 5)
    assert SHEAR_Y.apply(3, 5) == (3, 8)
    assert QUARTER_TURN.apply(1, 0) == (0, -1)


def test_quarter_turn_conjugates_shears():
    w = QUARTER_TURN
    wi = w.inverse()
    assert w @ SHEAR_X @ wi == SHEAR_Y.inverse()
    assert w @ SHEAR_Y @ wi == SHEAR_X.inverse()


def test_shear_braid_identities():
    # the two triple products land on the quarter turn and its inverse
    assert SHEAR_Y @ SHEAR_X.inverse() @ SHEAR_Y == QUARTER_TURN.inverse()
    assert SHEAR_X @ SHEAR_Y.inverse() @ SHEAR_X == QUARTER_TURN


def test_proj_equality():
    assert proj_equal(SHEAR_X, -SHEAR_X)
    assert not proj_equal(SHEAR_X, SHEAR_Y)
    assert is_proj_identity(-IDENTITY)
    assert not is_proj_identity(QUARTER_TURN)


def test_gen_enum():
    assert Gen.X.other is Gen.Y and Gen.Y.other is Gen.X
    assert Gen.X.matrix == SHEAR_X and Gen.Y.matrix == SHEAR_Y
