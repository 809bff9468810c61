"""Coupled replicator dynamics of strategies and link weights in networks of
reinforcement-learning agents: flows, rest points, stability, and sweeps."""

from .errors import (
    ChartDomainError,
    CoevonetError,
    ConfigError,
    ConfigurationMismatchError,
    InvalidInputError,
    NotARestPointError,
    NumericalError,
    StiffnessError,
)
from .games import (
    GameClass,
    PayoffSpec,
    ReducedGame,
    classify,
    effective_matrix,
    mixed_ne,
    reduce_matrix,
)
from .state import (
    CoevolState,
    JointStrategy,
    clamp_interior,
    cycle_state,
    from_logits,
    pair_plus_isolated_state,
    random_interior,
    star_state,
    state_from_json,
    state_to_json,
    to_logits,
    uniform_symmetric_state,
    validate,
)
from .dynamics import (
    FlowParams,
    Trajectory,
    flow_joint,
    flow_three_player,
    flow_two_action,
    integrate,
    integrate_joint,
)
from .qlearning import (
    LearningRun,
    QState,
    expected_reward,
    expected_rewards,
    policies,
    policy,
    project_policies,
    random_qstate,
    run,
    step,
)
from .analysis import (
    Configuration,
    RestPoint,
    Stability,
    StabilityReport,
    StarSpectrum,
    classify_stability,
    critical_temperature,
    find_rest_points,
    flow_residual,
    jacobian_numeric,
    match_configuration,
    pair_plus_isolated_eigenvalues,
    star_stability,
    symmetric_eigenvalues_n3,
    symmetric_fixed_points,
)
from .experiments import (
    BasinResult,
    MotifCensus,
    PlaneResult,
    SweepResult,
    basin_sample,
    motif_census,
    sweep_plane,
    sweep_temperature,
)
from .seeding import derive_seed

__version__ = "0.1.0"
