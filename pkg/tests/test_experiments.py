import numpy as np
import pytest

from coevonet import (
    CoevolState,
    FlowParams,
    PayoffSpec,
    Stability,
    basin_sample,
    cycle_state,
    flow_residual,
    jacobian_numeric,
    motif_census,
    pair_plus_isolated_state,
    star_state,
    sweep_plane,
    sweep_temperature,
    uniform_symmetric_state,
    validate,
)
from coevonet.analysis import Configuration
from coevonet.state import random_interior


def test_census_pair_plus_isolated():
    census = motif_census(pair_plus_isolated_state(0.0, 0.3))
    assert census.counts == {"Pair": 1, "Isolated": 1}
    assert census.total_agents() == 3


def test_census_star():
    for n in (3, 4):
        census = motif_census(star_state(n, center=0, p=0.0))
        if n == 3:
            # equal center split at n=3: products 1/2 each
            assert census.counts == {f"Star({n})": 1}
        else:
            assert census.counts == {f"Star({n})": 1}


def test_census_cycle_is_single_component():
    census = motif_census(cycle_state(3))
    assert census.counts == {"Cyclic": 1}
    assert census.total_agents() == 3
    census = motif_census(cycle_state(3, reverse=True))
    assert census.counts == {"Cyclic": 1}


def test_census_symmetric_uniform():
    census = motif_census(uniform_symmetric_state(3, 0.5))
    assert census.counts == {"Symmetric": 1}


def test_census_relabeling_invariance():
    rng = np.random.default_rng(0)
    s = pair_plus_isolated_state(0.0, 0.7, weight=0.4)
    base = motif_census(s).signature()
    for _ in range(6):
        perm = rng.permutation(3)
        sp = CoevolState(s.p[perm], s.c[np.ix_(perm, perm)])
        assert motif_census(sp).signature() == base


def test_sweep_temperature_coordination_flip(coordination_sweep_game):
    t_grid = np.array([0.2, 0.28, 0.34, 0.38, 0.44, 0.5])
    result = sweep_temperature(coordination_sweep_game, 3, t_grid, starts=16, seed=0)
    assert result.symmetric_stable == [False, False, False, True, True, True]
    assert result.critical_temperature_estimate == pytest.approx(0.36, abs=0.01)
    assert result.fold_temperature == pytest.approx(result.critical_temperature_estimate, abs=0.01)


def test_sweep_temperature_pd_branches(pd_game):
    t_grid = np.array([0.02, 0.5])
    result = sweep_temperature(pd_game, 3, t_grid, starts=24, seed=1)
    # low exploration: stable outcomes are perturbed pair/star motifs only
    low = result.stable_branches(0)
    assert low, "expected stable branches at low exploration"
    for rp, rep in low:
        assert rep.matched_configuration in (
            Configuration.PAIR_PLUS_ISOLATED,
            Configuration.STAR,
        )
    # high exploration: a single stable branch, the uniform network
    high = result.stable_branches(1)
    assert len(high) == 1
    assert high[0][1].matched_configuration is Configuration.SYMMETRIC_UNIFORM


def test_sweep_plane_region_geometry(coordination_sweep_game):
    t_grid = np.array([0.02, 0.1, 0.2, 0.3, 0.4, 0.5])
    ci_grid = np.linspace(-5.0, -2.0, 61)
    result = sweep_plane(coordination_sweep_game, 3, t_grid, ci_grid, starts=12, seed=0)
    boundary = result.boundary()
    by_t = {t: (lo, hi) for t, lo, hi in boundary}
    assert 0.5 in by_t and 0.02 in by_t
    # the isolation-payoff window shrinks toward low exploration
    assert by_t[0.02][1] - by_t[0.02][0] < by_t[0.5][1] - by_t[0.5][0]
    # region present above the critical temperature
    assert 0.4 in by_t
    # rows of the mask are single intervals (connected region)
    for i in range(t_grid.size):
        idx = np.nonzero(result.stable[i])[0]
        if idx.size:
            assert np.array_equal(idx, np.arange(idx[0], idx[-1] + 1))
    assert result.spot_check_max_deviation < 1e-6


def test_sweep_plane_pinch_point_location(coordination_sweep_game):
    # toward zero exploration the window collapses onto the point where the
    # isolation payoff cancels the equilibrium reward (b11 = 4)
    t_grid = np.array([0.02])
    ci_grid = np.linspace(-4.5, -3.5, 101)
    result = sweep_plane(coordination_sweep_game, 3, t_grid, ci_grid)
    idx = np.nonzero(result.stable[0])[0]
    assert idx.size
    window = result.c_iso_values[idx]
    assert window.min() > -4.2 and window.max() < -3.8


def test_basin_sample_deterministic(pd_game):
    a = basin_sample(pd_game, 3, 0.05, trials=3, seed=42)
    b = basin_sample(pd_game, 3, 0.05, trials=3, seed=42)
    assert a.counts == b.counts
    for sa, sb in zip(a.final_states, b.final_states):
        assert sa.distance(sb) == 0.0


def test_basin_sample_worker_count_invariance(pd_game):
    a = basin_sample(pd_game, 3, 0.05, trials=4, seed=7, workers=1)
    b = basin_sample(pd_game, 3, 0.05, trials=4, seed=7, workers=3)
    assert a.counts == b.counts
    for sa, sb in zip(a.final_states, b.final_states):
        assert sa.distance(sb) == 0.0


def test_basin_sample_finals_are_near_rest(pd_game):
    fp = FlowParams.from_payoff(pd_game, temperature=0.05)
    result = basin_sample(pd_game, 3, 0.05, trials=6, seed=3)
    for s in result.final_states:
        assert not validate(s, tol=1e-8)
        assert flow_residual(s, fp) < 1e-6


def test_basin_sample_star_frequencies_decrease(pd_game):
    result = basin_sample(pd_game, 5, 0.01, trials=60, seed=11)
    assert result.converged >= 55
    counts = result.counts
    sizes = {"Pair": 2, "Star(3)": 3, "Star(4)": 4, "Star(5)": 5}
    observed = [(sz, counts[lbl]) for lbl, sz in sizes.items() if lbl in counts]
    assert len(observed) >= 2
    for (s1, c1), (s2, c2) in zip(observed, observed[1:]):
        assert c1 > c2, f"motif of size {s1} should outnumber size {s2}"


def test_basin_sample_cyclic_dominates_when_isolation_pays():
    spec = PayoffSpec(3, 0, 5, 1, c_iso=-3.0)  # -c_iso above the equilibrium reward
    result = basin_sample(spec, 3, 0.05, trials=20, seed=5)
    assert result.converged >= 18
    assert result.counts.get("Cyclic", 0) > result.converged / 2
