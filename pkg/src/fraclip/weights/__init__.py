"""Weights, their ball statistics, class quantities and explicit constructions."""

from .forms import (Constant, Exponential, GridWeight1D, Power, RadialForm, ShiftedPowerInverse,
                    WeightSpec, WeightVector, product, weight_from_json)
from .stats import (ball_integral, ball_inf, ball_power_average, ball_sup, lebesgue_norm_on_ball,
                    tail_integral, tail_sup)
from .classes import (ClassSweep, SigmaPattern, a_p_quantity, a_pq_quantity, apq_to_ap_transform,
                      doubling_quantity, doubling_ratio, empirical_class_sup, fit_loglog_slope,
                      hm_full_quantity, hm_global_quantity, hm_local_quantity, hm_sigma_quantity,
                      rh_quantity, rh_ratio, sigma_domination_constant)
