"""Matrix-element tables against the independent quadrature oracle."""

import math

import numpy as np
import pytest

from ellipalign import AXES, BasisIndex, cos2_elements, quadrature_oracle

J_ORACLE = 8


@pytest.mark.parametrize("axis", AXES)
def test_tables_match_quadrature_oracle(axis):
    """Every tabulated element up to J = 8 agrees with brute force to 1e-10."""
    table = cos2_elements(axis, J_ORACLE)
    checked = 0
    for (J, M, Jp, Mp), value in table.entries.items():
        if (J, M) > (Jp, Mp):
            continue  # symmetric partner
        oracle = quadrature_oracle(axis, J, M, Jp, Mp)
        assert value == pytest.approx(oracle, abs=1e-10), (J, M, Jp, Mp)
        checked += 1
    assert checked > 100


@pytest.mark.parametrize("axis", AXES)
def test_selection_rule_zeros(axis):
    """Elements absent from the table really vanish."""
    table = cos2_elements(axis, J_ORACLE)
    # dJ = 1, dM = 1, dM = 4: all forbidden for cos^2 operators
    forbidden = [
        (2, 0, 3, 0),
        (2, 0, 2, 1),
        (4, 0, 4, 4),
        (1, 1, 2, -1),
        (3, -1, 5, 3),
    ]
    for J, M, Jp, Mp in forbidden:
        assert (J, M, Jp, Mp) not in table.entries
        assert quadrature_oracle(axis, J, M, Jp, Mp) == pytest.approx(0.0, abs=1e-10)


def test_tables_are_symmetric():
    for axis in AXES:
        table = cos2_elements(axis, 10)
        for (J, M, Jp, Mp), value in table.entries.items():
            assert table.entries[(Jp, Mp, J, M)] == value


def test_three_axes_sum_to_identity():
    """cos2x + cos2y + cos2z = 1 exactly, element by element."""
    tabs = {axis: cos2_elements(axis, 12) for axis in AXES}
    keys = set()
    for t in tabs.values():
        keys.update(t.entries)
    for key in keys:
        total = sum(t.get(*key) for t in tabs.values())
        expected = 1.0 if (key[0], key[1]) == (key[2], key[3]) else 0.0
        assert total == pytest.approx(expected, abs=1e-14), key


def test_known_diagonal_values():
    tz = cos2_elements("z", 6)
    assert tz.get(0, 0, 0, 0) == pytest.approx(1.0 / 3.0)
    # <1,0|cos^2 z|1,0> = 3/5, <1,1|..|1,1> = 1/5
    assert tz.get(1, 0, 1, 0) == pytest.approx(3.0 / 5.0)
    assert tz.get(1, 1, 1, 1) == pytest.approx(1.0 / 5.0)
    assert tz.get(2, 0, 2, 0) == pytest.approx(11.0 / 21.0)
    # <0,0|cos^2 z|2,0> = 2/(3 sqrt(5))
    assert tz.get(0, 0, 2, 0) == pytest.approx(2.0 / (3.0 * math.sqrt(5.0)))


def test_x_plus_y_from_z():
    """x and y diagonals are (1 - z)/2 plus/minus the same tensor part."""
    tx = cos2_elements("x", 8)
    ty = cos2_elements("y", 8)
    tz = cos2_elements("z", 8)
    for J in range(9):
        for M in range(-J, J + 1):
            dx = tx.get(J, M, J, M)
            dy = ty.get(J, M, J, M)
            dz = tz.get(J, M, J, M)
            assert dx == pytest.approx(dy, abs=1e-14)  # dM = 0 part is shared
            assert dx + dy + dz == pytest.approx(1.0, abs=1e-14)
    # the dM = 2 parts are opposite
    for (J, M, Jp, Mp), v in tx.entries.items():
        if M != Mp:
            assert ty.get(J, M, Jp, Mp) == pytest.approx(-v, abs=1e-15)


def test_m_reflection_symmetry():
    """Elements are invariant under (M, M') -> (-M, -M')."""
    for axis in AXES:
        table = cos2_elements(axis, 8)
        for (J, M, Jp, Mp), v in table.entries.items():
            assert table.get(J, -M, Jp, -Mp) == pytest.approx(v, abs=1e-15)


def test_basis_index_validation():
    with pytest.raises(ValueError):
        BasisIndex(-1, 0)
    with pytest.raises(ValueError):
        BasisIndex(2, 3)
    assert BasisIndex(3, -3).J == 3


def test_cos2_elements_validation():
    with pytest.raises(ValueError):
        cos2_elements("w", 8)
    with pytest.raises(ValueError):
        cos2_elements("x", 1)


def test_table_caching():
    assert cos2_elements("z", 20) is cos2_elements("z", 20)
