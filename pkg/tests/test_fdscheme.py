import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracline.errors import ConfigError, DomainError, StabilityError
from fracline.fdscheme import (SchemeConfig, TruncationWarning, cross_validate,
                               exact_solution_step_check, grunwald_weights, limit_stencil_report,
                               row_sums, run, step, weight_invariants)
from fracline.fracops import GridFunction
from fracline.kernel import kernel_model
from fracline.profiles import gauss_bump
from fracline.solvers import InitialData


def bump_data(h=0.01):
    return InitialData(GridFunction.sample(gauss_bump, h, int(round(1 / h)), compact=True))


def test_first_weights():
    g = grunwald_weights(0.5, 3).g
    assert g[0] == 1.0
    assert g[1] == -0.5
    assert g[2] == -0.125
    assert g[3] == pytest.approx(-0.0625, rel=1e-15)


def test_weights_match_binomial_coefficients():
    # g_k = (-1)^k binom(a, k); the stencil differences them into order 1+a
    a = 0.3
    g = grunwald_weights(a, 12).g
    ref = [(-1) ** k * math.gamma(1 + a) / (math.gamma(k + 1) * math.gamma(1 + a - k)) for k in range(13)]
    np.testing.assert_allclose(g, ref, rtol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.99))
def test_weight_invariants_hold(a):
    inv = weight_invariants(a, n=500, n_rows=32)
    for key in ("g0_is_one", "g1_is_minus_alpha", "tail_negative",
                "partial_sums_in_unit_interval", "partial_sums_decreasing"):
        assert inv[key], key
    assert inv["max_row_sum_deviation_telescoped"] <= 1e-15


def test_heat_weights_are_the_second_difference():
    g = grunwald_weights(1.0, 6).g
    np.testing.assert_array_equal(g, [1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    np.testing.assert_array_equal(row_sums(grunwald_weights(1.0, 40), 0.5, 30), 1.0)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
def test_row_sums_telescope(a):
    w = grunwald_weights(a, 70)
    rs = row_sums(w, 0.4, 60)
    np.testing.assert_allclose(rs, 1.0 + 0.4 * w.g[2:61], rtol=0, atol=4e-16)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75,
                               pytest.param(1.0, marks=pytest.mark.xfail(strict=True, reason="no leak at alpha = 1"))])
def test_interior_rows_lose_mass(a):
    # the weight tail reaching past the frozen left end makes every row sum fall short of 1
    rs = row_sums(grunwald_weights(a, 70), 0.4, 60)
    assert np.all(rs < 1.0)


@pytest.mark.parametrize("a", [pytest.param(0.5, marks=pytest.mark.xfail(
    strict=True, reason="row sums are 1 + beta g_(i+1) < 1, so constants are not preserved")), 1.0])
def test_constant_state_is_fixed(a):
    cfg = SchemeConfig.from_ratio(a, 0.05, 2.0, 0.01, 0.4)
    u = GridFunction(cfg.dx, np.full(cfg.n_cells + 1, 3.0))
    out = step(cfg, grunwald_weights(a, cfg.n_cells + 1), u).values
    np.testing.assert_allclose(out, 3.0, rtol=1e-14)


def test_zero_stays_zero_and_ends_frozen():
    cfg = SchemeConfig.from_ratio(0.5, 0.05, 2.0, 0.1, 0.4)
    w = grunwald_weights(0.5, cfg.n_cells + 1)
    z = step(cfg, w, GridFunction(cfg.dx, np.zeros(cfg.n_cells + 1)))
    assert np.all(z.values == 0.0)
    u = np.linspace(1.0, 2.0, cfg.n_cells + 1)
    out = step(cfg, w, GridFunction(cfg.dx, u)).values
    assert out[0] == 1.0 and out[-1] == 2.0


def test_config_validation():
    with pytest.raises(ConfigError):
        SchemeConfig(0.5, 0.0, 0.1, 10, 1)
    with pytest.raises(ConfigError):
        SchemeConfig(0.5, 0.1, 0.1, 1, 1)
    with pytest.raises(ConfigError):
        # dt/dx^(1.5) = 1 > 1/1.5
        SchemeConfig(0.5, 0.01, 0.001, 10, 1)
    with pytest.raises(DomainError):
        SchemeConfig(1.5, 0.1, 0.001, 10, 1)
    cfg = SchemeConfig.from_ratio(0.5, 0.1, 3.0, 1.0, 0.5)
    assert cfg.n_steps * cfg.dt == pytest.approx(1.0, rel=1e-14)
    assert cfg.beta_ratio <= 0.5 * (1 + 1e-12)


def test_short_weights_and_wrong_length():
    cfg = SchemeConfig.from_ratio(0.5, 0.1, 3.0, 0.1, 0.5)
    u = GridFunction(cfg.dx, np.zeros(cfg.n_cells + 1))
    with pytest.raises(DomainError):
        step(cfg, grunwald_weights(0.5, 5), u)
    with pytest.raises(DomainError):
        step(cfg, grunwald_weights(0.5, 40), GridFunction(cfg.dx, np.zeros(5)))


def test_growth_guard_raises():
    cfg = SchemeConfig.from_ratio(0.5, 0.05, 4.0, 0.2, 0.5)
    # bypass the ratio check to force an unstable step size
    object.__setattr__(cfg, "dt", 5.0 * cfg.dt)
    u0 = GridFunction.sample(lambda x: gauss_bump(x - 1.0), cfg.dx, cfg.n_cells)
    with pytest.raises(StabilityError):
        run(cfg, u0)


def test_fft_path_matches_direct_sum():
    a, n = 0.6, 400
    cfg = SchemeConfig.from_ratio(a, 0.01, n * 0.01, 0.01, 0.5)
    g = grunwald_weights(a, n + 1).g
    rng = np.random.default_rng(7)
    u = rng.standard_normal(n + 1)
    out = step(cfg, grunwald_weights(a, n + 1), GridFunction(cfg.dx, u)).values
    b = cfg.beta_ratio
    ref = u.copy()
    for i in range(1, n):
        s = math.fsum((g[i + 1 - j] - g[i - j]) * u[j] for j in range(i))
        ref[i] = b * s + (1 + b * (g[1] - g[0])) * u[i] + b * u[i + 1]
    np.testing.assert_allclose(out, ref, rtol=0, atol=1e-12)


@pytest.mark.parametrize("a", [0.3, 0.5, 0.7, 1.0])
def test_exact_solution_single_step(a):
    rep = exact_solution_step_check(a)
    assert rep.passed, rep.lines()


def test_run_records_and_meta():
    cfg = SchemeConfig.from_ratio(0.5, 0.05, 5.0, 0.5, 0.5)
    u0 = GridFunction.sample(lambda x: gauss_bump(x - 1.0), cfg.dx, cfg.n_cells)
    f = run(cfg, u0, [0.0, 0.25, 0.5])
    assert f.values.shape == (3, cfg.n_cells + 1)
    np.testing.assert_array_equal(f.values[0], u0.values)
    assert f.meta["n_steps"] == cfg.n_steps
    with pytest.raises(DomainError):
        run(cfg, GridFunction(cfg.dx, np.zeros(4)))


def test_neumann_variant_reflects():
    cfg = SchemeConfig.from_ratio(1.0, 0.05, 5.0, 0.5, 0.4)
    u0 = GridFunction.sample(gauss_bump, cfg.dx, cfg.n_cells)
    f = run(cfg, u0, neumann=True)
    assert f.boundary_kind == "neumann"
    assert f.meta["variant"] == "neumann-reflection"
    assert f.meta["extension"] is True
    # the even extension makes the slope at 0 vanish to first order
    assert abs(f.values[-1][1] - f.values[-1][0]) < 1e-2 * f.values[-1][0]


def test_cross_validate_heat_case():
    cfg = SchemeConfig.from_ratio(1.0, 0.04, 8.0, 0.5, 0.45)
    rep = cross_validate(cfg, kernel_model(1.0), bump_data(), levels=3)
    assert rep.passed, rep.lines()
    assert min(rep.values["order"]) >= 1.5


def test_cross_validate_argument_checks():
    cfg = SchemeConfig.from_ratio(0.5, 0.04, 8.0, 0.2, 0.5)
    with pytest.raises(DomainError):
        cross_validate(cfg, kernel_model(1.0), bump_data())
    bad = InitialData(GridFunction.sample(lambda x: 1.0 - x, 0.01, 100, compact=True))
    with pytest.raises(DomainError):
        cross_validate(cfg, kernel_model(0.5), bad)


def test_truncation_warning_on_short_domain():
    cfg = SchemeConfig.from_ratio(0.5, 0.05, 1.5, 0.5, 0.5)
    with pytest.warns(TruncationWarning):
        cross_validate(cfg, kernel_model(0.5), bump_data(), levels=2)


def test_limit_stencils():
    rep = limit_stencil_report()
    assert rep.passed
    assert rep.values["alpha_0.01.reference"] == "upwind"
    assert rep.values["alpha_0.99.distance"] <= 1e-2
    # near alpha = 0 the row approaches one-sided transport
    assert rep.values["alpha_0.01.distance"] <= 2e-2
