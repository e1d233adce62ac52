from __future__ import annotations

from fractions import Fraction
import math

import pytest

from siegel_volume.errors import DomainError
from siegel_volume.forms import CHI10_2, DELTA_1, E4_1, E6_1
from siegel_volume.numerics import combo_eval
from siegel_volume.quadrature import (
    DivisorPoint,
    IntegrationConfig,
    constant_integrand,
    elliptic_divisor,
    integrate_A1,
    log_norm_integrand,
    rohrlich_rhs,
    rohrlich_rhs_from_divisor,
    term_B_numeric,
)
from siegel_volume.volume import term_B


@pytest.mark.parametrize(
    "kwargs",
    [
        {"cusp_cutoff": 2.0},
        {"singularity_exclusion_radius": 0.2},
        {"singularity_exclusion_radius": 0.0},
        {"mode": "simpson"},
        {"target_tolerance": 0.0},
        {"monte_carlo_samples": 0},
    ],
)
def test_integration_config_validation(kwargs):
    with pytest.raises(DomainError):
        IntegrationConfig(**kwargs)


def test_constant_integral_is_the_area():
    result = integrate_A1(constant_integrand(1.0), IntegrationConfig())
    assert result.value == pytest.approx(1 / 12, abs=1e-6)
    assert result.tail_contribution == pytest.approx(1 / (80 * math.pi))
    assert result.singular_contribution_bound == 0


def test_constant_integral_monte_carlo():
    cfg = IntegrationConfig(mode="monte_carlo", monte_carlo_samples=200_000, rng_seed=3)
    result = integrate_A1(constant_integrand(1.0), cfg)
    assert abs(result.value - 1 / 12) < 2 * result.error_estimate
    assert result.evaluations == 200_000


def test_log_norm_integrand_domain(cfg):
    with pytest.raises(DomainError):
        log_norm_integrand(DELTA_1, cfg)
    with pytest.raises(DomainError):
        log_norm_integrand(CHI10_2, cfg)


def test_singularities_follow_vanishing_orders(cfg):
    e6 = log_norm_integrand(E6_1, cfg)
    assert [(s.x, s.fraction, s.order) for s in e6.singularities] == [(0.0, 0.5, 1)]
    e4 = log_norm_integrand(E4_1, cfg)
    assert sorted(s.x for s in e4.singularities) == [-0.5, 0.5]
    assert sum(s.fraction for s in e4.singularities) == pytest.approx(1 / 3)


def test_rohrlich_empty_divisor_weight_zero(cfg):
    assert rohrlich_rhs_from_divisor(0, [], cfg) == 0


def test_rohrlich_needs_delta_norm_off_elliptic_points(cfg):
    with pytest.raises(DomainError):
        rohrlich_rhs_from_divisor(12, [DivisorPoint(0.1 + 2j, Fraction(1))], cfg)
    value = rohrlich_rhs_from_divisor(12, [DivisorPoint(0.1 + 2j, Fraction(1), log_norm_delta=1.2)], cfg)
    assert float(rohrlich_rhs_from_divisor(12, [], cfg) - value) == pytest.approx(0.1)


def test_elliptic_divisor(cfg):
    assert elliptic_divisor(E6_1, cfg) == [DivisorPoint(1j, Fraction(1, 2))]
    assert [p.order for p in elliptic_divisor(E4_1, cfg)] == [Fraction(1, 3)]
    with pytest.raises(DomainError):
        elliptic_divisor(DELTA_1, cfg)


@pytest.mark.slow
@pytest.mark.parametrize("form", [E4_1, E6_1])
def test_integral_matches_rohrlich(cfg, form):
    result = integrate_A1(log_norm_integrand(form, cfg), IntegrationConfig())
    assert result.value == pytest.approx(float(rohrlich_rhs(form, cfg)), abs=1e-4)


@pytest.mark.slow
def test_term_b_numeric(cfg):
    numeric = term_B_numeric(cfg)
    assert numeric.total == pytest.approx(float(combo_eval(term_B(), cfg)), abs=1e-3)


def test_constant_integral_does_not_depend_on_the_cusp_cutoff():
    values = [integrate_A1(constant_integrand(1.0), IntegrationConfig(cusp_cutoff=c)).value for c in (10.0, 20.0, 40.0)]
    for value in values:
        assert value == pytest.approx(1 / 12, abs=1e-7)
    assert max(values) - min(values) < 1e-7


@pytest.mark.slow
@pytest.mark.parametrize("form", [E4_1, E6_1])
def test_log_norm_tail_is_stable_in_the_cutoff(cfg, form):
    integrand = log_norm_integrand(form, cfg)
    results = [integrate_A1(integrand, IntegrationConfig(cusp_cutoff=c)) for c in (10.0, 20.0, 40.0)]
    spread = max(r.value for r in results) - min(r.value for r in results)
    assert spread < 2 * max(r.error_estimate for r in results)


@pytest.mark.slow
@pytest.mark.parametrize("form", [E4_1, E6_1])
def test_error_estimate_bounds_the_true_error(cfg, form):
    result = integrate_A1(log_norm_integrand(form, cfg), IntegrationConfig())
    exact = float(rohrlich_rhs(form, cfg))
    assert abs(result.value - exact) <= result.error_estimate + 1e-9
