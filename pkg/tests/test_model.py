import math

import numpy as np
import pytest

from neelwall import (
    MultipleCrossingsError,
    NoCrossingError,
    load_profile,
    make_grid,
    make_initial_profile,
    make_params,
    recenter,
    reflect_compose,
    save_profile,
)


def test_params_validation():
    p = make_params(1.0, 0.5)
    assert p.theta_h == pytest.approx(math.asin(0.5))
    assert make_params(0.0, 0.0).nu == 0.0
    with pytest.raises(ValueError):
        make_params(-1.0, 0.0)
    with pytest.raises(ValueError):
        make_params(1.0, 1.0)
    with pytest.raises(ValueError):
        make_params(1.0, -0.1)


def test_grid_construction():
    g = make_grid(101, 20.0)
    assert g.n == 101
    assert g.nodes[g.center_index] == 0.0
    assert np.array_equal(g.nodes, -g.nodes[::-1])
    assert g.spacing == pytest.approx(40.0 / 100)
    with pytest.raises(ValueError):
        make_grid(100, 20.0)
    with pytest.raises(ValueError):
        make_grid(7, 20.0)
    with pytest.raises(ValueError):
        make_grid(101, -1.0)


@pytest.mark.parametrize("kind", ["template", "kink", "perturbed"])
def test_initial_profiles_admissible(kind):
    params = make_params(1.0, 0.3)
    grid = make_grid(257, 40.0)
    p = make_initial_profile(grid, params, kind=kind)
    assert p.theta[0] == pytest.approx(math.pi - params.theta_h)
    assert p.theta[-1] == pytest.approx(params.theta_h)
    z = p.theta - math.pi / 2
    assert np.sum(np.sign(z[:-1]) != np.sign(z[1:])) >= 1


def test_perturbed_profile_seeded():
    params = make_params(1.0, 0.0)
    grid = make_grid(257, 40.0)
    a = make_initial_profile(grid, params, kind="perturbed", seed=3)
    b = make_initial_profile(grid, params, kind="perturbed", seed=3)
    c = make_initial_profile(grid, params, kind="perturbed", seed=4)
    assert np.array_equal(a.theta, b.theta)
    assert not np.array_equal(a.theta, c.theta)


def test_recenter_moves_crossing_to_origin():
    params = make_params(0.0, 0.0)
    grid = make_grid(513, 40.0)
    shift = 1.7
    theta = 2.0 * np.arctan(np.exp(-(grid.nodes - shift)))
    p = make_initial_profile(grid, params, kind="kink").with_theta(theta)
    q = recenter(p)
    assert q.theta[grid.center_index] == pytest.approx(math.pi / 2, abs=1e-12)


def test_recenter_errors():
    params = make_params(1.0, 0.3)
    grid = make_grid(257, 40.0)
    base = make_initial_profile(grid, params, kind="kink")
    flat = base.with_theta(np.full(grid.n, params.theta_h))
    with pytest.raises(NoCrossingError):
        recenter(flat)
    wiggly = base.with_theta(math.pi / 2 + np.sin(grid.nodes))
    with pytest.raises(MultipleCrossingsError):
        recenter(wiggly)


def test_reflect_compose_involution():
    params = make_params(1.0, 0.3)
    grid = make_grid(257, 40.0)
    p = make_initial_profile(grid, params, kind="perturbed", seed=1)
    q = reflect_compose(reflect_compose(p))
    # pi - (pi - theta) rounds within one ulp of pi
    assert np.allclose(q.theta, p.theta, atol=1e-15, rtol=0)


def test_save_load_round_trip(tmp_path):
    params = make_params(2.0, 0.25)
    grid = make_grid(257, 40.0)
    p = make_initial_profile(grid, params, kind="perturbed", seed=5)
    path = tmp_path / "profile.txt"
    save_profile(path, p)
    q = load_profile(path)
    assert q.params == p.params
    assert q.grid.n == p.grid.n
    assert q.grid.half_width == p.grid.half_width
    assert np.array_equal(q.theta, p.theta)
