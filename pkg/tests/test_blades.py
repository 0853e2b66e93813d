"""Blade table construction: signs, grades, canonical order."""
import pytest

from zbwsim.blades import (BLADE_MASKS, BLADE_NAMES, BLADE_SQUARES, EVEN_INDICES,
                           GRADES, MULT_INDEX, MULT_SIGN, REVERSION_SIGNS,
                           blade_product)


def test_canonical_order_is_grade_sorted():
    assert list(GRADES) == sorted(GRADES)
    assert BLADE_NAMES[0] == "1"
    assert BLADE_NAMES[15] == "g0123"
    assert len(set(BLADE_MASKS)) == 16


def test_vector_squares_follow_signature():
    # g0^2 = +1, gi^2 = -1
    assert BLADE_SQUARES[1] == 1.0
    assert BLADE_SQUARES[2] == BLADE_SQUARES[3] == BLADE_SQUARES[4] == -1.0


def test_anticommutation_of_orthogonal_vectors():
    for a in range(1, 5):
        for b in range(1, 5):
            if a == b:
                continue
            idx_ab, sign_ab = MULT_INDEX[a, b], MULT_SIGN[a, b]
            idx_ba, sign_ba = MULT_INDEX[b, a], MULT_SIGN[b, a]
            assert idx_ab == idx_ba
            assert sign_ab == -sign_ba


def test_g2_g1_is_minus_g12():
    # blade indices: g1 -> 2, g2 -> 3, g12 -> 8
    assert MULT_INDEX[3, 2] == 8
    assert MULT_SIGN[3, 2] == -1.0


def test_blade_product_closure():
    for a in BLADE_MASKS:
        for b in BLADE_MASKS:
            mask, sign = blade_product(a, b)
            assert mask in BLADE_MASKS
            assert sign in (-1.0, 1.0)


def test_reversion_signs_by_grade():
    expected = {0: 1.0, 1: 1.0, 2: -1.0, 3: -1.0, 4: 1.0}
    for i in range(16):
        assert REVERSION_SIGNS[i] == expected[int(GRADES[i])]


def test_even_indices():
    assert list(GRADES[EVEN_INDICES] % 2) == [0] * 8
    assert len(EVEN_INDICES) == 8


@pytest.mark.parametrize("i", range(16))
def test_blades_square_to_plus_minus_one(i):
    assert MULT_INDEX[i, i] == 0
    assert MULT_SIGN[i, i] in (-1.0, 1.0)
