"""Butcher tableau construction, composition, and hat coefficients."""

import numpy as np
import pytest

from liesymp.errors import InvalidInput
from liesymp.tableaux import (
    YOSHIDA6_GAMMA,
    check_order_conditions,
    compose_chain,
    compose_tableaux,
    format_tableau,
    gauss_tableau,
    hat_coefficients,
    kutta3_tableau,
    make_tableau,
    midpoint_tableau,
    yoshida_dirk,
)


def test_gauss1_coefficients():
    t = gauss_tableau(1)
    assert t.a.tolist() == [[0.5]]
    assert t.b.tolist() == [1.0]
    assert t.cutoff_r == 0


def test_gauss2_coefficients():
    t = gauss_tableau(2)
    r3 = np.sqrt(3.0)
    assert t.a[0, 1] == pytest.approx(0.25 - r3 / 6.0, abs=0.0)
    assert t.a[1, 0] == pytest.approx(0.25 + r3 / 6.0, abs=0.0)
    assert t.b.tolist() == [0.5, 0.5]
    assert t.c[0] == pytest.approx(0.5 - r3 / 6.0, abs=1e-16)
    assert t.c[1] == pytest.approx(0.5 + r3 / 6.0, abs=1e-16)
    assert t.cutoff_r == 2


def test_gauss3_coefficients():
    t = gauss_tableau(3)
    r15 = np.sqrt(15.0)
    assert t.b.tolist() == [5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0]
    assert t.a[0, 0] == 5.0 / 36.0
    assert t.a[1, 1] == 2.0 / 9.0
    assert t.a[2, 1] == pytest.approx(2.0 / 9.0 + r15 / 15.0, abs=0.0)
    assert t.c[1] == pytest.approx(0.5, abs=1e-15)
    assert t.cutoff_r == 4


def test_gauss_invalid_stage_count():
    with pytest.raises(InvalidInput):
        gauss_tableau(4)


def test_kutta3():
    t = kutta3_tableau()
    assert t.a.tolist() == [[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [-1.0, 2.0, 0.0]]
    assert np.sum(t.b) == pytest.approx(1.0, abs=1e-15)
    assert t.c.tolist() == [0.0, 0.5, 1.0]
    assert t.b @ t.c == pytest.approx(0.5, abs=1e-16)
    assert t.b @ (t.c * t.c) == pytest.approx(1.0 / 3.0, abs=1e-16)
    assert t.cutoff_r == 1


def test_yoshida4():
    t = yoshida_dirk(4)
    cbrt2 = 2.0 ** (1.0 / 3.0)
    g1 = 1.0 / (2.0 - cbrt2)
    g2 = -cbrt2 / (2.0 - cbrt2)
    assert np.allclose(t.b, [g1, g2, g1], atol=0.0)
    assert np.sum(t.b) == pytest.approx(1.0, abs=1e-15)
    assert t.c[1] == pytest.approx(0.5, abs=1e-15)


def test_yoshida6_constants():
    t = yoshida_dirk(6)
    assert t.s == 7
    assert t.b[0] == 0.78451361047755726381949763
    g1, g2, g3, g4 = YOSHIDA6_GAMMA
    assert 2.0 * (g1 + g2 + g3) + g4 == pytest.approx(1.0, abs=1e-14)
    assert np.allclose(t.b, [g1, g2, g3, g4, g3, g2, g1], atol=0.0)


def test_yoshida_invalid_order():
    with pytest.raises(InvalidInput):
        yoshida_dirk(3)


def test_yoshida2_is_midpoint():
    t = yoshida_dirk(2)
    assert t.a.tolist() == [[0.5]]
    assert t.b.tolist() == [1.0]


def test_compose_two_midpoints():
    t = compose_tableaux(midpoint_tableau(), midpoint_tableau(), 0.5)
    assert np.allclose(t.a, [[0.25, 0.0], [0.5, 0.25]], atol=0.0)
    assert t.b.tolist() == [0.5, 0.5]
    assert t.c.tolist() == [0.25, 0.75]


def test_compose_weight_linearity(rng):
    t1, t2 = gauss_tableau(2), kutta3_tableau()
    gamma = 0.3
    t = compose_tableaux(t1, t2, gamma)
    assert np.sum(t.b) == pytest.approx(
        gamma * np.sum(t1.b) + (1 - gamma) * np.sum(t2.b), abs=1e-15)
    # composed tableau is valid: c equals row sums by construction
    assert np.allclose(t.c, t.a.sum(axis=1), atol=0.0)


def test_triple_jump_reproduces_yoshida4():
    cbrt2 = 2.0 ** (1.0 / 3.0)
    g1 = 1.0 / (2.0 - cbrt2)
    g2 = -cbrt2 / (2.0 - cbrt2)
    t = compose_chain(midpoint_tableau(), [g1, g2, g1])
    ref = yoshida_dirk(4)
    assert np.max(np.abs(t.a - ref.a)) <= 1e-14
    assert np.max(np.abs(t.b - ref.b)) <= 1e-14


def test_sevenfold_composition_reproduces_yoshida6():
    g1, g2, g3, g4 = YOSHIDA6_GAMMA
    t = compose_chain(midpoint_tableau(), [g1, g2, g3, g4, g3, g2, g1])
    ref = yoshida_dirk(6)
    assert np.max(np.abs(t.a - ref.a)) <= 1e-14
    assert np.max(np.abs(t.b - ref.b)) <= 1e-14


def test_compose_chain_rejects_bad_weights():
    with pytest.raises(InvalidInput):
        compose_chain(midpoint_tableau(), [0.5, 0.25])


def test_hat_gauss_is_self():
    for s in (1, 2, 3):
        t = gauss_tableau(s)
        hat = hat_coefficients(t)
        assert np.max(np.abs(hat.a - t.a)) <= 1e-15
        assert np.array_equal(hat.b, t.b)


def test_hat_midpoint():
    hat = hat_coefficients(midpoint_tableau())
    assert hat.a[0, 0] == pytest.approx(0.5, abs=0.0)


def test_hat_symplecticity_identity_kutta3():
    t = kutta3_tableau()
    hat = hat_coefficients(t)
    for i in range(3):
        for j in range(3):
            lhs = t.b[i] * hat.a[i, j] + t.b[j] * t.a[j, i]
            assert lhs == pytest.approx(t.b[i] * t.b[j], abs=1e-15)


def test_hat_is_involution():
    for t in (kutta3_tableau(), yoshida_dirk(4), gauss_tableau(3)):
        back = hat_coefficients(hat_coefficients(t))
        assert np.max(np.abs(back.a - t.a)) <= 1e-13
        assert np.array_equal(back.b, t.b)


def test_hat_rejects_zero_weights():
    t = make_tableau([[0.0, 0.0], [0.5, 0.5]], [0.0, 1.0])
    with pytest.raises(InvalidInput):
        hat_coefficients(t)


def test_order_conditions_midpoint():
    t = midpoint_tableau()
    assert check_order_conditions(t, 2).passed
    assert not check_order_conditions(t, 3).passed
    # failing condition is sum b c^2 = 1/3 (midpoint gives 1/4)
    labels = {name: ok for name, _, ok in check_order_conditions(t, 3).conditions}
    assert not labels["sum(b c^2) = 1/3"]


def test_order_conditions_kutta3_and_gauss3():
    assert check_order_conditions(kutta3_tableau(), 3).passed
    assert check_order_conditions(gauss_tableau(3), 3).passed


def test_order_conditions_invalid_p():
    with pytest.raises(InvalidInput):
        check_order_conditions(midpoint_tableau(), 4)


def test_format_tableau_mentions_everything():
    text = format_tableau(gauss_tableau(2))
    assert "stages: 2" in text
    assert "cutoff_r: 2" in text
    assert "b:" in text


def test_make_tableau_shape_check():
    with pytest.raises(InvalidInput):
        make_tableau([[0.0, 0.0]], [1.0])
