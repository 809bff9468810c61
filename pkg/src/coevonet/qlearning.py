"""Discrete-time value learning over (partner, action) pairs.

Agents keep a table of estimated utilities, pick partners and actions
through a softmax over that table, and relax every entry toward the current
expected reward.  Updates are synchronous and deterministic (expected-update
semantics): the derivation of the continuous limit averages over opponents'
strategies before updating, and a sampled-play mode would only blur the
comparison against the flow.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, NumericalError
from .state import CoevolState, JointStrategy, clamp_interior

__all__ = [
    "QState",
    "LearningRun",
    "random_qstate",
    "policy",
    "policies",
    "expected_reward",
    "expected_rewards",
    "step",
    "run",
    "project_policies",
]

DIVERGENCE_LIMIT = 1e12


@dataclass(frozen=True)
class QState:
    """Utility table q[x, y, i] for partner y != x and action i, plus the
    learning rate and exploration temperature.

    The softmax selection map is undefined at T = 0 (greedy selection is a
    different object, studied through the flow instead), so T must be
    positive here.
    """

    q: np.ndarray
    alpha: float
    temperature: float

    def __post_init__(self) -> None:
        q = np.asarray(self.q, dtype=float)
        object.__setattr__(self, "q", q)
        if q.ndim != 3 or q.shape[0] != q.shape[1] or q.shape[2] != 2:
            raise InvalidInputError(f"q table must have shape (n, n, 2), got {q.shape}")
        if not np.all(np.isfinite(q)):
            raise InvalidInputError("q table entries must be finite")
        if not 0.0 < self.alpha <= 1.0:
            raise InvalidInputError(f"learning rate must be in (0, 1], got {self.alpha}")
        if not self.temperature > 0.0:
            raise InvalidInputError(
                f"softmax selection needs T > 0, got {self.temperature}"
            )

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature


def random_qstate(n: int, alpha: float, temperature: float, seed: int) -> QState:
    """Fresh table with entries uniform in [-0.1, 0.1], diagonal zeroed."""
    rng = np.random.default_rng(seed)
    q = rng.uniform(-0.1, 0.1, size=(n, n, 2))
    q[np.eye(n, dtype=bool)] = 0.0
    return QState(q, alpha, temperature)


def policies(qs: QState) -> JointStrategy:
    """Softmax policies of every agent over its 2(n-1) (partner, action) slots."""
    n = qs.n
    mask = ~np.eye(n, dtype=bool)
    z = qs.beta * qs.q
    z = np.where(mask[:, :, None], z, -np.inf)
    zmax = z.reshape(n, -1).max(axis=1)
    e = np.exp(z - zmax[:, None, None])
    e[~mask] = 0.0
    probs = e / e.reshape(n, -1).sum(axis=1)[:, None, None]
    return JointStrategy(probs)


def policy(qs: QState, x: int) -> np.ndarray:
    """Agent x's joint distribution, shape (n, 2) with row x all zero."""
    return policies(qs).q[x]


def expected_rewards(pol: JointStrategy, payoff: np.ndarray) -> np.ndarray:
    """R[x, y, i] = sum_j payoff[i, j] * q_yx^j for every slot at once.

    An agent whose prospective partner never plays back earns exactly zero
    from that partner; no isolation bonus appears here because the payoff
    matrix already carries the shift.
    """
    a = np.asarray(payoff, dtype=float)
    if a.shape != (2, 2):
        raise InvalidInputError(f"payoff must be 2x2, got {a.shape}")
    return np.einsum("ij,yxj->xyi", a, pol.q)


def expected_reward(pol: JointStrategy, x: int, y: int, i: int, payoff: np.ndarray) -> float:
    return float(expected_rewards(pol, payoff)[x, y, i])


def step(qs: QState, payoff: np.ndarray) -> QState:
    """One synchronous relaxation of every entry toward its expected reward."""
    pol = policies(qs)
    r = expected_rewards(pol, payoff)
    mask = ~np.eye(qs.n, dtype=bool)
    q_new = qs.q + qs.alpha * (np.where(mask[:, :, None], r, 0.0) - qs.q)
    return QState(q_new, qs.alpha, qs.temperature)


@dataclass
class LearningRun:
    """Policy trace of a learning run plus its factorized projections."""

    steps_recorded: list[int] = field(default_factory=list)
    policies: list[JointStrategy] = field(default_factory=list)
    projected: list[CoevolState] = field(default_factory=list)
    alpha: float = 0.0
    temperature: float = 0.0

    @property
    def final_projection(self) -> CoevolState:
        return self.projected[-1]

    def scaled_times(self) -> np.ndarray:
        """Scaled continuous time of each record: t = step * alpha / T."""
        return np.array(self.steps_recorded) * self.alpha / self.temperature

    def to_csv(self) -> str:
        from .state import flat_header, flatten_state

        n = self.projected[0].n
        lines = ["step,t," + ",".join(flat_header(n))]
        for k, s in zip(self.steps_recorded, self.projected):
            t = k * self.alpha / self.temperature
            vals = np.concatenate([[k, t], flatten_state(s)])
            lines.append(",".join(f"{v:.17g}" for v in vals))
        return "\n".join(lines) + "\n"


def project_policies(pol: JointStrategy) -> CoevolState:
    """Marginals of the factorized form: c_xy = sum_i q, p_x = sum_y q[..0]."""
    p, c = pol.marginals()
    return CoevolState(p, c)


def run(qs0: QState, payoff: np.ndarray, steps: int, stride: int = 1) -> LearningRun:
    """Iterate the synchronous update, recording every ``stride``-th policy.

    The projection of each recorded policy onto (p, c) marginals is what the
    continuous-flow comparisons consume.  Raises NumericalError, naming the
    step, if any utility exceeds the divergence limit.
    """
    if steps < 0:
        raise InvalidInputError(f"steps must be nonnegative, got {steps}")
    if stride < 1:
        raise InvalidInputError(f"stride must be positive, got {stride}")
    out = LearningRun(alpha=qs0.alpha, temperature=qs0.temperature)
    qs = qs0
    for k in range(steps + 1):
        if k % stride == 0 or k == steps:
            pol = policies(qs)
            out.steps_recorded.append(k)
            out.policies.append(pol)
            out.projected.append(clamp_interior(project_policies(pol)))
        if k == steps:
            break
        qs = step(qs, payoff)
        if np.abs(qs.q).max() > DIVERGENCE_LIMIT:
            raise NumericalError(f"q values diverged at step {k + 1}")
    return out
