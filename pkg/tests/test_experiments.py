import math

import numpy as np
import pytest

from fraclip.experiments import (DEGENERATE, FAIL, PASS, difference_of_products, flatness, forced_local_exponent,
                                 identity_difference_of_products, restrict, run_boundedness_experiment,
                                 run_corollary_equivalence, run_local_lemma_experiment, run_power_asymptotic,
                                 run_triviality_probe, verify_identity_suites, weighted_norm)
from fraclip.geometry import centered_family, standard_family
from fraclip.operators import bump_function, constant_symbol, power_symbol, standard_kernel, zero_function
from fraclip.params import INF, ExponentVector, ParameterPoint
from fraclip.weights.forms import Constant, Power, WeightVector


def bump_power_integral(k):
    """int_{-1}^{1} (1 - y^2)^k dy."""
    return math.sqrt(math.pi) * math.gamma(k + 1) / math.gamma(k + 1.5)


def test_flatness_rules():
    r = np.array([1.0, 2.0, 4.0])
    assert flatness(r, [1.0, 1.0, 1.0])["flat"]
    tilted = flatness(r, r ** 0.2)
    assert tilted["slope"] == pytest.approx(0.2) and not tilted["flat"]
    assert not flatness(r, [1.0, 20.0, 1.0])["flat"]
    assert flatness(r, [0.0, 0.0, 0.0])["flat"]
    assert not flatness(r, [1.0, INF, 1.0])["flat"]


def test_weighted_norm_closed_forms():
    f = bump_function()
    assert weighted_norm(f, Constant(1.0), 2.0) == pytest.approx(math.sqrt(bump_power_integral(8)), rel=1e-12)
    assert weighted_norm(f, Constant(3.0), 1.0) == pytest.approx(3 * bump_power_integral(4), rel=1e-12)
    assert weighted_norm(f, Constant(1.0), INF) == pytest.approx(1.0)
    # |y|^(-1/2) against the bump: singular but integrable
    val = weighted_norm(f, Power(-0.25), 2.0) ** 2
    ref = math.gamma(0.25) * math.gamma(9) / math.gamma(9.25)  # int_{-1}^1 |y|^(-1/2) (1-y^2)^8
    assert val == pytest.approx(ref, rel=1e-9)


def test_restrict():
    f = bump_function()
    g = restrict(f, 0.5, 3.0)
    assert g.box == ((0.5, 1.0),)
    assert restrict(f, 2.0, 3.0) is None


def test_difference_of_products_small_case():
    lhs, rhs, scale = difference_of_products([3.0, 5.0], [1.0, 2.0], [2.0, 4.0])
    assert lhs == rhs == 2 * 3 - 1 * 2
    assert scale > 0
    res = identity_difference_of_products(np.random.default_rng(1), 200)
    assert res["max_rel"] < 1e-13


def test_identity_suite_small():
    rep = verify_identity_suites(seed=3, trials=100, commutator_instances=3, transform_instances=2,
                                 transform_balls=5)
    assert rep.status == PASS
    assert len(rep.profile) == 3


def test_power_asymptotic_exact_center_case():
    rep = run_power_asymptotic(-0.5, radii=[1e-2, 1.0, 1e2])
    zero = [row["ratio"] for row in rep.profile if row["offset"] == 0.0]
    # int_{-R}^{R} |x|^{-1/2} = 4 R^{1/2}
    assert zero == pytest.approx([4.0] * 3, rel=1e-12)
    assert rep.status == PASS
    with pytest.raises(ValueError):
        run_power_asymptotic(-1.0)


def test_forced_exponent_and_probe():
    p = ExponentVector([2, 2])
    pt = ParameterPoint(n=1, m=2, beta=1.3, delta=0.3, delta_tilde=0.4)
    pair = WeightVector(Constant(1.0), [Constant(1.0)] * 2)
    assert forced_local_exponent(pair, p, pt) == pytest.approx(-0.1)
    rep = run_triviality_probe(pair, p, pt, decades=2, per_decade=2)
    assert rep.status == PASS
    assert rep.summary["slope"] == pytest.approx(-0.1, rel=1e-9)
    with pytest.raises(ValueError):
        run_triviality_probe(pair, p, pt, direction="sideways")
    nontrivial = ParameterPoint(n=1, m=2, beta=0.9, delta=0.3, delta_tilde=-0.2)
    with pytest.raises(ValueError):
        run_triviality_probe(pair, p, nontrivial)


def test_probe_degenerate_for_zero_w():
    p = ExponentVector([2, 2])
    pt = ParameterPoint(n=1, m=2, beta=1.3, delta=0.3, delta_tilde=0.4)
    pair = WeightVector(Constant(0.0), [Constant(1.0)] * 2)
    assert run_triviality_probe(pair, p, pt, decades=1, per_decade=2).status == DEGENERATE


def test_probe_without_blow_up_fails():
    # item (c) with R -> 0 has a positive forced exponent: no blow-up there
    p = ExponentVector([2, 2])
    pt = ParameterPoint(n=1, m=2, beta=0.9, delta=0.3, delta_tilde=-1.5)
    pair = WeightVector(Constant(1.0), [Constant(1.0)] * 2)
    rep = run_triviality_probe(pair, p, pt, decades=1, per_decade=2)
    assert rep.status == FAIL and rep.summary["blows_up"] is False


def _boundedness_inputs():
    K = standard_kernel(0.8, 1, 2)
    f = bump_function()
    p = ExponentVector([2, 2])
    pt = ParameterPoint(n=1, m=2, beta=1.1, delta=0.3, delta_tilde=0.1)
    pair = WeightVector(Power(0.4), [Power(0.2)] * 2)
    return K, f, p, pt, pair


def test_boundedness_degenerate_and_zero_profile():
    K, f, p, pt, pair = _boundedness_inputs()
    fam = centered_family([0.5])
    rep = run_boundedness_experiment("sum", K, [power_symbol(0.3)] * 2, [f, zero_function()], pair, p, pt, fam)
    assert rep.status == DEGENERATE
    rep = run_boundedness_experiment("sum", K, [constant_symbol(1.0, 0.3)] * 2, [f, f], pair, p, pt, fam,
                                     evidence=False)
    assert rep.status == PASS and rep.summary["zero_profile"]


def test_boundedness_preconditions():
    K, f, p, pt, pair = _boundedness_inputs()
    fam = centered_family([0.5])
    bs = [power_symbol(0.3)] * 2
    with pytest.raises(ValueError, match="alpha~"):
        run_boundedness_experiment("product", K, bs, [f, f], pair, p, pt, fam)
    with pytest.raises(ValueError, match="inadmissible"):
        run_boundedness_experiment("sum", K, bs, [f, f], pair, ExponentVector([1, 1]), pt, fam)


def test_local_lemma_small_family():
    _, f, p, pt, pair = _boundedness_inputs()
    rep = run_local_lemma_experiment([f, f], 1.1, pair, p, pt, centered_family([0.25, 1.0, 4.0]))
    assert rep.status == PASS
    assert all(0 < row["ratio"] < INF for row in rep.profile)
    rep0 = run_local_lemma_experiment([f, zero_function()], 1.1, pair, p, pt, centered_family([1.0]))
    assert rep0.status == DEGENERATE


def test_corollary_with_consistent_constants():
    p = ExponentVector([1, 1])
    pt = ParameterPoint(n=1, m=2, beta=1.0, delta=0.3, delta_tilde=-1.0)
    fam = standard_family(r_min=0.1, r_max=10.0, per_decade=1)
    rep = run_corollary_equivalence([Constant(1.0)] * 2, p, pt, fam)
    assert rep.status == PASS and rep.summary["hm_bounded"] and rep.summary["apq_bounded"]
    with pytest.raises(ValueError):
        run_corollary_equivalence([Constant(1.0)] * 2, p, pt.replace(delta_tilde=0.0), fam)


def test_boundedness_with_dilated_inputs_is_scale_free():
    # power symbols, kernel and weights are homogeneous and balanced: dilating the inputs
    # with the ball leaves the ratio unchanged
    K, f, p, pt, pair = _boundedness_inputs()
    bs = [power_symbol(0.3)] * 2
    rep = run_boundedness_experiment("sum", K, bs, [f, f], pair, p, pt, centered_family([0.5, 2.0]),
                                     evidence=False, inputs="dilated")
    a, b = (row["ratio"] for row in rep.profile)
    assert a == pytest.approx(b, rel=1e-9) and a > 0
    with pytest.raises(ValueError, match="inputs"):
        run_boundedness_experiment("sum", K, bs, [f, f], pair, p, pt, centered_family([1.0]), inputs="scaled")
