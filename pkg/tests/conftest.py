import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from coevonet import PayoffSpec


def eig_mismatch(got, expected) -> float:
    """Largest distance in the optimal matching of two eigenvalue multisets."""
    got = np.atleast_1d(np.asarray(got, dtype=complex))
    expected = np.atleast_1d(np.asarray(expected, dtype=complex))
    assert got.shape == expected.shape, (got.shape, expected.shape)
    cost = np.abs(got[:, None] - expected[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


@pytest.fixture
def pd_game() -> PayoffSpec:
    """Canonical defection game: b21 > b11 > b22 > b12, zero isolation payoff."""
    return PayoffSpec(3.0, 0.0, 5.0, 1.0, c_iso=0.0)


@pytest.fixture
def coordination_game() -> PayoffSpec:
    """Canonical coordination game with reduced form (5, -2, 1)."""
    return PayoffSpec(4.0, -2.0, 1.0, 0.0, c_iso=1.0)


@pytest.fixture
def coordination_sweep_game() -> PayoffSpec:
    """Same game with the isolation payoff inside the uniform-network
    stability window near the critical temperature."""
    return PayoffSpec(4.0, -2.0, 1.0, 0.0, c_iso=-3.5)
