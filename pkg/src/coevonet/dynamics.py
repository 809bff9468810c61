"""Replicator vector fields for strategies and link weights, and an adaptive
embedded Runge-Kutta integrator for their trajectories.

Three views of the same dynamics live here.  ``flow_two_action`` is the
production field for any number of agents.  ``flow_three_player`` writes the
n=3 system out longhand in its six independent coordinates and serves as an
independent cross-check.  ``flow_joint`` is the parent replicator over full
(partner, action) distributions, used only for consistency tests against the
factorized construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ChartDomainError,
    InvalidInputError,
    NumericalError,
    StiffnessError,
)
from .games import PayoffSpec, ReducedGame, effective_matrix, reduce_matrix
from .state import (
    CoevolState,
    JointStrategy,
    clamp_interior,
    from_logits,
    to_logits,
    unpack_independent,
)

__all__ = [
    "FlowParams",
    "Trajectory",
    "flow_two_action",
    "flow_three_player",
    "flow_joint",
    "flow_independent",
    "logit_field",
    "state_field_from_logit",
    "integrate",
    "integrate_joint",
]

DEFAULT_LOCAL_TOL = 1e-9
DEFAULT_EQUILIBRIUM_TOL = 1e-10
MIN_STEP = 1e-14


@dataclass(frozen=True)
class FlowParams:
    """Reduced game plus the effective a22 entry and the exploration rate.

    ``a22`` is the bottom-right entry of the effective matrix (base b22 plus
    the isolation payoff); it does not cancel out of the link dynamics the
    way it does for the strategy dynamics, so it travels alongside the
    shift-invariant ReducedGame.
    """

    game: ReducedGame
    a22: float
    temperature: float = 0.0

    def __post_init__(self) -> None:
        vals = (self.game.a, self.game.b, self.game.d, self.a22, self.temperature)
        if not all(np.isfinite(v) for v in vals):
            raise InvalidInputError(f"flow parameters must be finite, got {vals}")
        if self.temperature < 0:
            raise InvalidInputError(f"temperature must be nonnegative, got {self.temperature}")

    @classmethod
    def from_payoff(cls, spec: PayoffSpec, temperature: float = 0.0) -> "FlowParams":
        a = effective_matrix(spec)
        return cls(game=reduce_matrix(a), a22=float(a[1, 1]), temperature=temperature)


def _require_interior(state: CoevolState, what: str) -> None:
    off = ~np.eye(state.n, dtype=bool)
    if (
        np.any(state.p <= 0.0)
        or np.any(state.p >= 1.0)
        or np.any(state.c[off] <= 0.0)
    ):
        raise ChartDomainError(f"{what} requires a strictly interior state when T > 0")


def _payoff_matrix_field(p: np.ndarray, fp: FlowParams) -> np.ndarray:
    """Pairwise expected payoffs Pi[x, y] = a p_x p_y + b p_x + d p_y + a22."""
    g = fp.game
    return g.a * np.outer(p, p) + g.b * p[:, None] + g.d * p[None, :] + fp.a22


def flow_two_action(state: CoevolState, fp: FlowParams) -> tuple[np.ndarray, np.ndarray]:
    """Time derivative (dp, dc) of the factorized two-action dynamics.

    Strategies grow with their payoff advantage weighted by reciprocity
    products c_xy*c_yx; link weights grow with the advantage of the partner
    they point at over the agent's current average.  For T > 0 both gain an
    entropic pull toward the uniform distribution, and the state must be
    strictly interior.  Row sums of dc vanish identically.
    """
    n, p, c = state.n, state.p, state.c
    g, T = fp.game, fp.temperature
    if T > 0:
        _require_interior(state, "flow_two_action")
    W = c * c.T
    drive = W @ (g.a * p + g.b)
    if T > 0:
        drive = drive + T * np.log((1.0 - p) / p)
    dp = p * (1.0 - p) * drive

    pi = _payoff_matrix_field(p, fp)
    r = c.T * pi  # r[x, y] = c_yx * Pi[x, y]
    np.fill_diagonal(r, 0.0)
    avg = (r * c).sum(axis=1)
    gain = r - avg[:, None]
    if T > 0:
        logc = np.zeros_like(c)
        off = ~np.eye(n, dtype=bool)
        logc[off] = np.log(c[off])
        row_ent = (c * logc).sum(axis=1)
        gain = gain + T * (row_ent[:, None] - logc)
    dc = c * gain
    np.fill_diagonal(dc, 0.0)
    return dp, dc


def flow_three_player(state: CoevolState, fp: FlowParams) -> np.ndarray:
    """The n=3 system written out explicitly in its six independent variables.

    Coordinates are (p_x, p_y, p_z, c_xy, c_yz, c_zx) for agents (x, y, z) =
    (0, 1, 2); the complementary weights are c_xz = 1 - c_xy, c_yx = 1 - c_yz
    and c_zy = 1 - c_zx.  Deliberately written longhand, term by term, as an
    independent check on :func:`flow_two_action`.
    """
    if state.n != 3:
        raise InvalidInputError(f"flow_three_player needs n=3, got n={state.n}")
    g, T = fp.game, fp.temperature
    a, b, d, a22 = g.a, g.b, g.d, fp.a22
    if T > 0:
        _require_interior(state, "flow_three_player")
    px, py, pz = state.p
    cxy, cyz, czx = state.c[0, 1], state.c[1, 2], state.c[2, 0]
    cxz, cyx, czy = 1.0 - cxy, 1.0 - cyz, 1.0 - czx

    wxy = cxy * cyx
    wxz = cxz * czx
    wyz = cyz * czy

    def ent(q: float) -> float:
        return T * np.log((1.0 - q) / q) if T > 0 else 0.0

    dpx = px * (1 - px) * ((a * py + b) * wxy + (a * pz + b) * wxz + ent(px))
    dpy = py * (1 - py) * ((a * pz + b) * wyz + (a * px + b) * wxy + ent(py))
    dpz = pz * (1 - pz) * ((a * px + b) * wxz + (a * py + b) * wyz + ent(pz))

    def pi(pa: float, pb: float) -> float:
        return a * pa * pb + b * pa + d * pb + a22

    rxy, rxz = cyx * pi(px, py), czx * pi(px, pz)
    ryz, ryx = czy * pi(py, pz), cxy * pi(py, px)
    rzx, rzy = cxz * pi(pz, px), cyz * pi(pz, py)

    dcxy = cxy * (1 - cxy) * (rxy - rxz + ent(cxy))
    dcyz = cyz * (1 - cyz) * (ryz - ryx + ent(cyz))
    dczx = czx * (1 - czx) * (rzx - rzy + ent(czx))
    return np.array([dpx, dpy, dpz, dcxy, dcyz, dczx])


def flow_joint(q: JointStrategy, payoff: np.ndarray, temperature: float) -> np.ndarray:
    """Parent replicator field over joint (partner, action) distributions.

    dq/q is the expected reward of the (partner, action) pair against the
    co-players' joint strategies, minus the agent's average reward, plus the
    exploration term.  Kept for consistency checks only; the production
    dynamics evolve the factorized state.
    """
    a = np.asarray(payoff, dtype=float)
    if a.shape != (2, 2):
        raise InvalidInputError(f"payoff must be 2x2, got {a.shape}")
    n = q.n
    mask = ~np.eye(n, dtype=bool)
    if temperature > 0 and np.any(q.q[mask] <= 0.0):
        raise ChartDomainError("flow_joint requires interior joint strategies when T > 0")
    reward = np.einsum("ij,yxj->xyi", a, q.q)
    avg = (q.q * reward).reshape(n, -1).sum(axis=1)
    gain = reward - avg[:, None, None]
    if temperature > 0:
        logq = np.zeros_like(q.q)
        logq[mask] = np.log(q.q[mask])
        s = (q.q * logq).reshape(n, -1).sum(axis=1)
        gain = gain + temperature * (s[:, None, None] - logq)
    dq = q.q * gain
    dq[~mask] = 0.0
    return dq


# ---------------------------------------------------------------------------
# Independent-coordinate and logit-chart views


def flow_independent(u: np.ndarray, n: int, fp: FlowParams) -> np.ndarray:
    """Field in the independent coordinates of ``pack_independent``."""
    state = unpack_independent(u, n)
    dp, dc = flow_two_action(state, fp)
    return _pack_field(dp, dc, n)


def _pack_field(dp: np.ndarray, dc: np.ndarray, n: int) -> np.ndarray:
    parts = []
    for x in range(n):
        cols = [y for y in range(n) if y != x]
        parts.append(dc[x, cols[:-1]])
    parts.append(dp)
    return np.concatenate(parts)


def logit_field(z: np.ndarray, n: int, fp: FlowParams) -> np.ndarray:
    """Field in logit coordinates; smooth on all of R^d, no boundary terms.

    In this chart the replicator form collapses to payoff differences minus
    T times the coordinate itself, so no logarithms of near-zero weights are
    ever taken: dz_p = drive - T z_p, dz_c = (r_xy - r_xlast) - T z_c.
    """
    state = from_logits(z, n)
    g, T = fp.game, fp.temperature
    p, c = state.p, state.c
    W = c * c.T
    drive = W @ (g.a * p + g.b)
    pi = _payoff_matrix_field(p, fp)
    r = c.T * pi
    np.fill_diagonal(r, 0.0)
    dz = np.empty_like(z)
    k = 0
    for x in range(n):
        cols = [y for y in range(n) if y != x]
        r_last = r[x, cols[-1]]
        dz[k : k + n - 2] = r[x, cols[:-1]] - r_last - T * z[k : k + n - 2]
        k += n - 2
    dz[k:] = drive - T * z[k:]
    return dz


def state_field_from_logit(z: np.ndarray, dz: np.ndarray, n: int) -> np.ndarray:
    """Convert a logit-chart field to the raw state derivative, log-free.

    For each link row, dc_k = c_k (dz_k - sum_j c_j dz_j) over the free
    entries; the dependent entry follows from conservation.  Used for
    equilibrium detection in the raw state's units even when weights have
    underflowed to zero.
    """
    state = from_logits(z, n)
    out = np.empty_like(z)
    k = 0
    for x in range(n):
        cols = [y for y in range(n) if y != x]
        cf = state.c[x, cols[:-1]]
        zz = dz[k : k + n - 2]
        mean = float(cf @ zz)  # dependent entry's share: -sum c_j dz_j
        out[k : k + n - 2] = cf * (zz - mean)
        k += n - 2
    p = state.p
    out[k:] = p * (1.0 - p) * dz[k:]
    return out


# ---------------------------------------------------------------------------
# Adaptive integrator


@dataclass
class Trajectory:
    """Sampled trajectory with integrator metadata.

    ``times`` are the scaled time of the continuous limit; one discrete
    learning step corresponds to alpha*beta units of it.
    """

    times: list[float] = field(default_factory=list)
    states: list[CoevolState] = field(default_factory=list)
    steps: int = 0
    rejected: int = 0
    final_step: float = 0.0
    converged: bool = False

    @property
    def final_state(self) -> CoevolState:
        return self.states[-1]

    def to_csv(self) -> str:
        from .state import flat_header, flatten_state

        n = self.states[0].n
        lines = ["t," + ",".join(flat_header(n))]
        for t, s in zip(self.times, self.states):
            vals = np.concatenate([[t], flatten_state(s)])
            lines.append(",".join(f"{v:.17g}" for v in vals))
        return "\n".join(lines) + "\n"

    def metadata(self) -> dict:
        return {
            "samples": len(self.times),
            "steps": self.steps,
            "rejected": self.rejected,
            "final_step": self.final_step,
            "converged": self.converged,
            "t_final": self.times[-1] if self.times else 0.0,
        }


# Dormand-Prince 5(4) tableau
_DP_A = (
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
)
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


def _rk45_run(
    f,
    y0: np.ndarray,
    horizon: float,
    local_tol: float,
    stop_norm,
    on_accept,
    max_steps: int = 10_000_000,
):
    """Generic embedded RK 5(4) driver.

    ``stop_norm(y, fy)`` returns the scalar used for equilibrium detection
    (None disables it); ``on_accept(t, y)`` may post-process the accepted
    state (projection) and must return the possibly adjusted y.

    While chasing an equilibrium, the error scale tightens to stay two
    orders below the current field norm (floored at 1% of the stop
    tolerance).  Without this, mode amplitudes that drop under the plain
    tolerance stop being resolved, the step settles on the stability
    boundary where they neither grow nor decay, and the field norm stalls
    just above the stop tolerance indefinitely.
    """
    t = 0.0
    y = y0.copy()
    h = min(1e-2, horizon)
    steps = rejected = 0
    converged = False
    fy = f(y)
    tol_eff = local_tol
    while True:
        if not np.all(np.isfinite(fy)):
            raise NumericalError(f"vector field is not finite at t={t}")
        if stop_norm is not None:
            norm = stop_norm(y, fy)
            if norm < stop_norm.tol:
                converged = True
                break
            tol_eff = min(local_tol, max(0.01 * norm, 0.01 * stop_norm.tol))
        if t >= horizon:
            break
        h = min(h, horizon - t)
        k = [fy]
        for row in _DP_A:
            k.append(f(y + h * np.tensordot(row, k[: len(row)], axes=1)))
        karr = np.array(k)
        y5 = y + h * (_DP_B5 @ karr)
        y4 = y + h * (_DP_B4 @ karr)
        scale = tol_eff + tol_eff * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.max(np.abs(y5 - y4) / scale))
        if err <= 1.0:
            t += h
            y = on_accept(t, y5) if on_accept is not None else y5
            steps += 1
            fy = f(y)
        else:
            rejected += 1
        grow = 0.9 * err ** -0.2 if err > 0 else 5.0
        h *= min(5.0, max(0.2, grow))
        if h < MIN_STEP:
            raise StiffnessError(
                f"step size underflowed below {MIN_STEP} at t={t}; state {np.array2string(y, precision=6)}"
            )
        if steps + rejected > max_steps:
            raise NumericalError(f"step budget exhausted at t={t}")
    return y, t, steps, rejected, h, converged


class _FieldNorm:
    def __init__(self, fn, tol):
        self.fn = fn
        self.tol = tol

    def __call__(self, y, fy):
        return self.fn(y, fy)


def integrate(
    state0: CoevolState,
    fp: FlowParams,
    horizon: float,
    *,
    local_tol: float = DEFAULT_LOCAL_TOL,
    equilibrium_tol: float = DEFAULT_EQUILIBRIUM_TOL,
    sample_every: float | None = None,
    max_steps: int = 10_000_000,
) -> Trajectory:
    """Integrate the factorized dynamics from ``state0`` for ``horizon`` time.

    With exploration (T > 0) the integration runs in logit coordinates,
    where the interior is invariant and the field has no boundary
    singularities; at T = 0 it runs on the raw state with a nonnegativity
    projection, since simplex vertices are then legitimate rest points.

    Integration stops early and flags convergence when the max-norm of the
    raw state derivative drops below ``equilibrium_tol``.  States are
    sampled at multiples of ``sample_every`` scaled-time units (every
    accepted step when None), plus the initial and final states.

    Raises StiffnessError if the step size underflows and NumericalError on
    NaNs in the field.
    """
    if horizon <= 0:
        raise InvalidInputError(f"horizon must be positive, got {horizon}")
    n = state0.n
    traj = Trajectory()

    sample_next = [sample_every if sample_every is not None else None]

    def want_sample(t: float) -> bool:
        if sample_next[0] is None:
            return True
        if t + 1e-12 >= sample_next[0]:
            sample_next[0] += sample_every
            return True
        return False

    if fp.temperature > 0:
        s0 = clamp_interior(state0)
        z0 = to_logits(s0)

        def f(z):
            return logit_field(z, n, fp)

        def raw_norm(z, dz):
            return float(np.abs(state_field_from_logit(z, dz, n)).max())

        traj.times.append(0.0)
        traj.states.append(from_logits(z0, n))

        def on_accept(t, z):
            if want_sample(t):
                traj.times.append(t)
                traj.states.append(from_logits(z, n))
            return z

        y, t, steps, rejected, h, converged = _rk45_run(
            f, z0, horizon, local_tol, _FieldNorm(raw_norm, equilibrium_tol), on_accept, max_steps
        )
        final_state = from_logits(y, n)
    else:
        mask = ~np.eye(n, dtype=bool)

        def pack(s: CoevolState) -> np.ndarray:
            return np.concatenate([s.p, s.c[mask]])

        def unpack(y: np.ndarray) -> CoevolState:
            c = np.zeros((n, n))
            c[mask] = y[n:]
            return CoevolState(y[:n], c)

        def f(y):
            s = unpack(y)
            dp, dc = flow_two_action(s, fp)
            return np.concatenate([dp, dc[mask]])

        def raw_norm(y, fy):
            return float(np.abs(fy).max())

        def project(y: np.ndarray) -> np.ndarray:
            p = np.clip(y[:n], 0.0, 1.0)
            c = np.clip(y[n:], 0.0, None).reshape(n, n - 1)
            c /= c.sum(axis=1, keepdims=True)
            return np.concatenate([p, c.ravel()])

        y0 = pack(state0)
        traj.times.append(0.0)
        traj.states.append(unpack(y0))

        def on_accept(t, y):
            y = project(y)
            if want_sample(t):
                traj.times.append(t)
                traj.states.append(unpack(y))
            return y

        y, t, steps, rejected, h, converged = _rk45_run(
            f, y0, horizon, local_tol, _FieldNorm(raw_norm, equilibrium_tol), on_accept, max_steps
        )
        final_state = unpack(y)

    if not traj.times or traj.times[-1] < t:
        traj.times.append(t)
        traj.states.append(final_state)
    traj.steps = steps
    traj.rejected = rejected
    traj.final_step = h
    traj.converged = converged
    return traj


def integrate_joint(
    q0: JointStrategy,
    payoff: np.ndarray,
    temperature: float,
    sample_times: np.ndarray,
    *,
    local_tol: float = DEFAULT_LOCAL_TOL,
) -> list[JointStrategy]:
    """Integrate the parent joint replicator, sampling at given times.

    Runs in per-agent log-ratio coordinates (reference: the last off-diagonal
    (partner, action) slot), so the interior is preserved exactly.  Used by
    the discrete-learning consistency checks.
    """
    if temperature <= 0:
        raise InvalidInputError("integrate_joint supports T > 0 only")
    n = q0.n
    mask = ~np.eye(n, dtype=bool)
    if np.any(q0.q[mask] <= 0.0):
        raise ChartDomainError("integrate_joint requires an interior initial strategy")
    a = np.asarray(payoff, dtype=float)

    flat_idx = [(x, y, i) for x in range(n) for y in range(n) if y != x for i in (0, 1)]
    per_agent = 2 * (n - 1)

    def to_z(q: np.ndarray) -> np.ndarray:
        z = np.empty(n * (per_agent - 1))
        k = 0
        for x in range(n):
            vals = np.array([q[x, y, i] for (xx, y, i) in flat_idx if xx == x])
            z[k : k + per_agent - 1] = np.log(vals[:-1] / vals[-1])
            k += per_agent - 1
        return z

    def from_z(z: np.ndarray) -> np.ndarray:
        q = np.zeros((n, n, 2))
        k = 0
        for x in range(n):
            zz = np.concatenate([z[k : k + per_agent - 1], [0.0]])
            k += per_agent - 1
            zz -= zz.max()
            e = np.exp(zz)
            e /= e.sum()
            for val, (xx, y, i) in zip(e, [t for t in flat_idx if t[0] == x]):
                q[x, y, i] = val
        return q

    def f(z):
        q = from_z(z)
        reward = np.einsum("ij,yxj->xyi", a, q)
        dz = np.empty_like(z)
        k = 0
        for x in range(n):
            slots = [t for t in flat_idx if t[0] == x]
            vals = np.array([reward[x, y, i] for (_, y, i) in slots])
            dz[k : k + per_agent - 1] = (
                vals[:-1] - vals[-1] - temperature * z[k : k + per_agent - 1]
            )
            k += per_agent - 1
        return dz

    out: list[JointStrategy] = []
    z = to_z(q0.q)
    t = 0.0
    times = np.asarray(sample_times, dtype=float)
    if times[0] == 0.0:
        out.append(JointStrategy(from_z(z)))
        times = times[1:]
    for t_target in times:
        def capped(zz):
            return f(zz)

        span = t_target - t
        y, tt, *_ = _rk45_run(capped, z, span, local_tol, None, None)
        z = y
        t = t_target
        out.append(JointStrategy(from_z(z)))
    return out
