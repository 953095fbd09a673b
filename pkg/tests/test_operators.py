import math

import numpy as np
import pytest

from fraclip.operators import (box_function, bump_function, constant_symbol, eval_I_alpha, eval_I_alpha_detail,
                               eval_product_commutator, eval_sum_commutator, eval_T_alpha,
                               kernel_condition_check, kernel_from_json, linear_symbol, modulated_kernel,
                               pointwise_domination_check, power_symbol, scaled_kernel, sinusoid_symbol,
                               standard_kernel, standard_smoothness_constant, symbol_constant_estimate,
                               symbol_from_json, test_function_from_json, violating_kernel, zero_function)
from fraclip.quadrature import (QuadratureConfig, gauss_jacobi01, gauss_legendre01, graded_cells, interval_rule,
                                snap_to_marks)

# Frozen from an mpmath tanh-sinh oracle (30 digits) after the polar change of
# variables u = r t, v = r (1 - t) around (x, x); bump = (1 - y^2)^4 on [-1, 1].
ORACLE_I1_A05_X03 = 2.05276796163469639592750453439
ORACLE_I1_A07_X15 = 0.72570458717441552275484386128
ORACLE_I2_A12_X02 = 1.35278377635928039594010255888
ORACLE_PROD_LINEAR_A12_X02 = 0.0269372985287588473530940186228  # b_1 = b_2 = y
ORACLE_SUM_LINEAR_A12_X02 = 0.518264520523991460072232255618    # b_1 = y, b_2 = 2 y


# -- quadrature building blocks --------------------------------------------------

def test_gauss_legendre01_exact_for_polynomials():
    x, w = gauss_legendre01(6)
    for k in range(12):
        assert np.dot(w, x ** k) == pytest.approx(1 / (k + 1), rel=1e-13)


def test_gauss_jacobi01_weight():
    # int_0^1 t^(a-1) t^k dt = 1/(a+k)
    a = 0.35
    x, w = gauss_jacobi01(8, a)
    for k in range(10):
        assert np.dot(w, x ** k) == pytest.approx(1 / (a + k), rel=1e-12)


def test_graded_cells_cover_interval():
    cells = graded_cells(-1.0, 2.0, "kernel", "kink", QuadratureConfig(depth=5))
    assert cells[0][0] == -1.0 and cells[-1][1] == 2.0
    for (a, b, *_), (c, *_) in zip(cells[:-1], cells[1:]):
        assert b == c and b > a


def test_interval_rule_kink():
    nodes, weights = interval_rule(-1.0, 1.0, [0.3], QuadratureConfig())
    f = np.abs(nodes - 0.3) ** 0.5
    exact = (1.3 ** 1.5 + 0.7 ** 1.5) / 1.5
    assert np.dot(weights, f) == pytest.approx(exact, rel=1e-9)


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(order=0)
    with pytest.raises(ValueError):
        QuadratureConfig(grading=-1.0)
    cfg = QuadratureConfig().replace(order=5)
    assert cfg.order == 5 and cfg.as_json()["order"] == 5


# -- fractional integral ---------------------------------------------------------

def test_I_alpha_closed_forms():
    box = box_function(0.0, 1.0)
    assert eval_I_alpha([box], 0.5, 0.0) == pytest.approx(2.0, rel=1e-12)
    assert eval_I_alpha([box, box], 1.0, 0.0) == pytest.approx(2 * math.log(2), rel=1e-12)


@pytest.mark.parametrize("fs, alpha, x, expected", [
    (1, 0.5, 0.3, ORACLE_I1_A05_X03),
    (1, 0.7, 1.5, ORACLE_I1_A07_X15),
    (2, 1.2, 0.2, ORACLE_I2_A12_X02),
])
def test_I_alpha_against_oracle(fs, alpha, x, expected):
    f = bump_function()
    assert eval_I_alpha([f] * fs, alpha, x) == pytest.approx(expected, rel=1e-10)


def test_I_alpha_detail_reports_corner():
    res = eval_I_alpha_detail([box_function()], 0.5, 0.5)
    lo, hi = res.interval
    assert lo <= res.value <= hi
    assert res.nodes > 0


def test_I_alpha_input_validation():
    f = bump_function()
    with pytest.raises(ValueError):
        eval_I_alpha([f], 1.5, 0.0)
    with pytest.raises(ValueError):
        eval_I_alpha([], 0.5, 0.0)
    with pytest.raises(ValueError):
        eval_I_alpha([f] * 5, 1.0, 0.0)


def test_I_alpha_zero_input():
    assert eval_I_alpha([zero_function(), bump_function()], 1.0, 0.2) == 0.0


def test_standard_kernel_matches_I_alpha():
    f = bump_function(0.1, 0.8)
    K = standard_kernel(1.2, 1, 2)
    assert eval_T_alpha(K, [f, f], 0.3) == pytest.approx(eval_I_alpha([f, f], 1.2, 0.3), rel=1e-14)
    K2 = scaled_kernel(K, -2.0)
    assert eval_T_alpha(K2, [f, f], 0.3) == pytest.approx(-2 * eval_I_alpha([f, f], 1.2, 0.3), rel=1e-13)


# -- commutators -----------------------------------------------------------------

@pytest.mark.parametrize("mode", ["direct", "expansion", "iterative"])
def test_product_commutator_against_oracle(mode):
    f = bump_function()
    b = linear_symbol(1.0)
    val = eval_product_commutator([b, b], standard_kernel(1.2, 1, 2), [f, f], 0.2, mode=mode)
    assert val == pytest.approx(ORACLE_PROD_LINEAR_A12_X02, rel=1e-10)


@pytest.mark.parametrize("mode", ["direct", "iterative"])
def test_sum_commutator_against_oracle(mode):
    f = bump_function()
    bs = [linear_symbol(1.0), linear_symbol(2.0)]
    val = eval_sum_commutator(bs, standard_kernel(1.2, 1, 2), [f, f], 0.2, mode=mode)
    assert val == pytest.approx(ORACLE_SUM_LINEAR_A12_X02, rel=1e-10)


def test_commutator_with_constant_symbols_vanishes():
    f = bump_function()
    bs = [constant_symbol(1.5), constant_symbol(-0.5)]
    K = standard_kernel(0.8, 1, 2)
    assert eval_sum_commutator(bs, K, [f, f], 0.4) == 0.0
    assert eval_product_commutator(bs, K, [f, f], 0.4) == 0.0


def test_commutator_modes_agree_with_kinked_symbols():
    f = bump_function(0.1, 0.9)
    g = bump_function(-0.2, 1.1)
    bs = [power_symbol(0.3), power_symbol(0.6, 0.25)]
    K = standard_kernel(0.9, 1, 2)
    for x in (0.0, 0.25, 0.7):
        d = eval_product_commutator(bs, K, [f, g], x, mode="direct")
        e = eval_product_commutator(bs, K, [f, g], x, mode="expansion")
        it = eval_product_commutator(bs, K, [f, g], x, mode="iterative")
        assert e == pytest.approx(d, rel=1e-8) and it == pytest.approx(d, rel=1e-8)
        sd = eval_sum_commutator(bs, K, [f, g], x, mode="direct")
        si = eval_sum_commutator(bs, K, [f, g], x, mode="iterative")
        assert si == pytest.approx(sd, rel=1e-8)


def test_single_slot_commutators_coincide():
    f = bump_function()
    b = sinusoid_symbol(1.0, 2.0, 0.3)
    K = standard_kernel(0.6, 1, 1)
    s = eval_sum_commutator([b], K, [f], 0.1)
    p = eval_product_commutator([b], K, [f], 0.1)
    assert s == pytest.approx(p, rel=1e-12)


def test_unknown_modes_rejected():
    f = bump_function()
    K = standard_kernel(0.6, 1, 1)
    with pytest.raises(ValueError):
        eval_sum_commutator([linear_symbol()], K, [f], 0.0, mode="x")
    with pytest.raises(ValueError):
        eval_product_commutator([linear_symbol()], K, [f], 0.0, mode="x")
    with pytest.raises(ValueError):
        eval_sum_commutator([linear_symbol()] * 2, K, [f], 0.0)


# -- kernel and symbol checks ----------------------------------------------------

def test_standard_kernel_single_slot_passes():
    rep = kernel_condition_check(standard_kernel(0.5, 1, 1), samples=4000)
    assert rep.passed
    assert rep.size_ratio == pytest.approx(1.0)


def test_standard_kernel_smoothness_needs_wider_separation():
    K = standard_kernel(0.8, 1, 2)
    narrow = kernel_condition_check(K, samples=4000, separation=2.0)
    wide = kernel_condition_check(K, samples=4000, separation=4.0)
    # with sum |x - y_i| > 2|x - x'| only, one |x - y_i| can be arbitrarily small
    assert not narrow.passed and narrow.smooth_ratio > 1e3 * K.c_smooth
    assert wide.passed and wide.smooth_ratio <= K.c_smooth
    assert standard_smoothness_constant(0.8, 1, 2) == pytest.approx(1.2 * 2 * 2 ** 2.2)


def test_violating_kernel_fails_size():
    rep = kernel_condition_check(violating_kernel(0.8, 1, 2), samples=2000, separation=4.0)
    assert not rep.passed and rep.size_ratio > 100


def test_modulated_kernel_passes_within_reach():
    rep = kernel_condition_check(modulated_kernel(0.5, 1, 1), samples=4000, box=1.0)
    assert rep.passed


def test_pointwise_domination():
    K = modulated_kernel(0.8, 1, 2)
    f = bump_function()
    g = box_function(-0.5, 0.5, -1.0)
    rep = pointwise_domination_check(K, [f, g], [-0.5, 0.0, 0.3, 1.5])
    assert rep.passed
    assert all(row[1] <= row[2] * (1 + 1e-8) for row in rep.rows)


def test_symbol_constant_estimates():
    assert symbol_constant_estimate(power_symbol(0.3)).passed
    est = symbol_constant_estimate(linear_symbol(1.0, delta=0.3, constant=1.0))
    # y is not 0.3-Hoelder with constant 1 on [-1, 1]: 2 / 2^0.3 = 1.6245
    assert not est.passed and est.estimate == pytest.approx(2 ** 0.7, rel=1e-12)
    assert symbol_constant_estimate(sinusoid_symbol(1.0, 3.0, delta=0.5)).passed
    with pytest.raises(ValueError):
        symbol_constant_estimate(power_symbol(0.3), grid=1)


def test_test_function_algebra():
    f = bump_function()
    g = box_function(0.0, 2.0, 3.0)
    y = np.array([-0.5, 0.5, 1.5])
    assert np.allclose(f.times(g).at(y), f.at(y) * g.at(y))
    assert np.allclose(f.plus(g).at(y), f.at(y) + g.at(y))
    assert np.allclose(g.scaled(-2).absolute().at(y), np.abs(-2 * g.at(y)))
    assert f.integral == pytest.approx(256 / 315)
    with pytest.raises(ValueError):
        box_function(1.0, 1.0)


def test_catalog_parsers():
    f = test_function_from_json({"name": "bump", "center": 0.5, "radius": 2.0})
    assert f.box == ((-1.5, 2.5),)
    assert test_function_from_json({"name": "zero"}).at(np.array([0.0]))[0] == 0.0
    b = symbol_from_json({"name": "power", "delta": 0.3, "scale": 2.0})
    assert b.constant == 2.0 and b.kinks == ((0.0,),)
    K = kernel_from_json({"name": "standard", "alpha": 0.8, "factor": 3.0}, 1, 2)
    assert K.c_size == 3.0 and not K.is_standard
    for bad in ({"name": "bump", "width": 1}, {"name": "nope"}):
        with pytest.raises(ValueError):
            test_function_from_json(bad)
    with pytest.raises(ValueError):
        symbol_from_json({"name": "power", "delta": 0.3, "extra": 1})
    with pytest.raises(ValueError):
        kernel_from_json({"name": "standard"}, 1, 2)
    with pytest.raises(ValueError):
        kernel_from_json({"name": "standard", "alpha": 0.8, "bogus": 1}, 1, 2)


@pytest.mark.parametrize("alpha", [0.2, 0.5])
@pytest.mark.parametrize("gap", [1e-3, 1e-9, 1e-13, 1e-16])
def test_I_alpha_next_to_support_edge(alpha, gap):
    # int_0^1 |x - y|^(alpha-1) dy = (x^alpha + (1-x)^alpha) / alpha; nodes crowd x near the edge
    x = 1.0 - gap
    ref = (x ** alpha + (1.0 - x) ** alpha) / alpha
    assert eval_I_alpha([box_function(0.0, 1.0)], alpha, x) == pytest.approx(ref, rel=1e-12)


def test_snap_only_below_rounding_scale():
    boxes, kinks = [((-1.0, 1.0),)], [((0.0,),)]
    assert snap_to_marks([1e-300], boxes, kinks, 0.9)[0] == 0.0
    assert snap_to_marks([1e-12], boxes, kinks, 0.9)[0] == 1e-12
    assert snap_to_marks([1.0 - 1e-16], boxes, kinks, 0.5)[0] == 1.0 - 1e-16


def test_subnormal_point_next_to_kink_is_finite():
    f = bump_function()
    K = standard_kernel(0.9, 1, 2)
    bs = [power_symbol(0.4), power_symbol(0.4)]
    at_zero = eval_sum_commutator(bs, K, [f, f], 0.0)
    assert eval_sum_commutator(bs, K, [f, f], 2.2250738585e-313) == pytest.approx(at_zero, rel=1e-12)


def test_dilated_test_function():
    f = bump_function(0.5, 1.0)
    g = f.dilated(3.0)
    assert g.box == ((-1.5, 4.5),)
    assert g.integral == pytest.approx(3.0 * f.integral)
    assert float(g.at(np.array([2.4]))[0]) == pytest.approx(float(f.at(np.array([0.8]))[0]))
    with pytest.raises(ValueError):
        f.dilated(0.0)
