import math

import numpy as np
import pytest

from neelwall import (
    el_residual,
    energy,
    energy_gradient,
    make_grid,
    make_initial_profile,
    make_operator,
    make_params,
)
from neelwall.energy import trapezoid_weights


def test_trapezoid_weights_sum():
    w = trapezoid_weights(101, 0.25)
    assert np.sum(w) == pytest.approx(0.25 * 100)
    assert w[0] == w[-1] == pytest.approx(0.125)


def test_kink_energy_is_two():
    # sine-Gordon: theta = 2 arctan(e^{-x}) has E = 2 at nu = 0, h = 0
    params = make_params(0.0, 0.0)
    grid = make_grid(2049, 40.0)
    op = make_operator(grid)
    p = make_initial_profile(grid, params, kind="kink")
    eb = energy(p, op)
    assert eb.stray == 0.0
    # forward-difference exchange and trapezoid potential are O(dx^2)
    assert eb.total == pytest.approx(2.0, abs=1e-4)
    assert eb.exchange == pytest.approx(1.0, abs=1e-4)
    assert eb.potential == pytest.approx(1.0, abs=1e-4)


def test_stray_term_nonnegative(rng):
    params = make_params(1.0, 0.3)
    grid = make_grid(257, 40.0)
    op = make_operator(grid)
    for seed in range(3):
        p = make_initial_profile(grid, params, kind="perturbed", seed=seed)
        assert energy(p, op).stray >= 0.0


def test_vacuum_has_zero_energy():
    params = make_params(1.0, 0.3)
    grid = make_grid(257, 40.0)
    op = make_operator(grid)
    p = make_initial_profile(grid, params, kind="kink").with_theta(
        np.full(grid.n, params.theta_h)
    )
    eb = energy(p, op)
    assert eb.total == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("nu,h", [(0.0, 0.0), (1.0, 0.3), (2.0, 0.0)])
def test_gradient_matches_finite_differences(nu, h, rng):
    params = make_params(nu, h)
    grid = make_grid(257, 40.0)
    op = make_operator(grid)
    p = make_initial_profile(grid, params, kind="perturbed", seed=2)
    g = energy_gradient(p, op)
    assert g[0] == g[-1] == 0.0
    eps = 1e-6
    for _ in range(5):
        d = rng.standard_normal(grid.n)
        d[0] = d[-1] = 0.0
        ep = energy(p.with_theta(p.theta + eps * d), op).total
        em = energy(p.with_theta(p.theta - eps * d), op).total
        fd = (ep - em) / (2.0 * eps)
        dg = float(np.dot(g, d))
        assert abs(fd - dg) <= 1e-6 * max(abs(dg), 1e-3)


def test_el_residual_small_on_minimizer(solved, operators):
    p, report = solved(1.0, 0.0)
    _, op = operators()
    assert report.converged
    res = el_residual(p, op)
    assert np.max(np.abs(res)) <= 1e-5


def test_el_residual_large_off_minimizer(operators):
    grid, op = operators()
    params = make_params(1.0, 0.0)
    p = make_initial_profile(grid, params, kind="kink")
    assert np.max(np.abs(el_residual(p, op))) > 1e-2
