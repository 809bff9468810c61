"""Rest points of the coupled dynamics and their stability.

Numeric Jacobians by central differences in the independent coordinates,
closed-form eigenvalues for the special configurations that admit them
(uniform symmetric network at n=3, pair-plus-isolated, star motifs), a
multi-start damped Newton search for rest points, and classification of the
spectrum and network topology.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    ConfigurationMismatchError,
    InvalidInputError,
    NotARestPointError,
)
from .dynamics import (
    FlowParams,
    flow_independent,
    flow_two_action,
    logit_field,
    state_field_from_logit,
)
from .games import GameClass, ReducedGame, classify, mixed_ne
from .state import (
    CoevolState,
    cycle_state,
    from_logits,
    independent_dim,
    pack_independent,
    pair_plus_isolated_state,
    star_state,
    to_logits,
    uniform_symmetric_state,
    unpack_independent,
    validate,
)

__all__ = [
    "RestPoint",
    "Stability",
    "Configuration",
    "StabilityReport",
    "flow_residual",
    "jacobian_numeric",
    "symmetric_eigenvalues_n3",
    "pair_plus_isolated_eigenvalues",
    "star_stability",
    "StarSpectrum",
    "find_rest_points",
    "symmetric_fixed_points",
    "critical_temperature",
    "classify_stability",
    "match_configuration",
]

REST_POINT_TOL = 1e-9
STABILITY_TOL = 1e-8
DEDUP_DISTANCE = 1e-6
RECIPROCATED_THRESHOLD = 0.99
ABSENT_THRESHOLD = 1e-2


@dataclass(frozen=True)
class RestPoint:
    """A state where the flow vanishes, with the residual it was verified at."""

    state: CoevolState
    residual: float
    params: FlowParams


class Stability(Enum):
    STABLE = "stable"
    MARGINALLY_STABLE = "marginally_stable"
    UNSTABLE = "unstable"


class Configuration(Enum):
    PAIR_PLUS_ISOLATED = "pair_plus_isolated"
    STAR = "star"
    SYMMETRIC_UNIFORM = "symmetric_uniform"
    CYCLIC_NON_RECIPROCATED = "cyclic_non_reciprocated"
    OTHER = "other"


@dataclass
class StabilityReport:
    """Jacobian spectrum in independent coordinates plus its verdict."""

    eigenvalues: np.ndarray
    classification: Stability
    matched_configuration: Configuration

    @property
    def max_real_part(self) -> float:
        return float(self.eigenvalues.real.max())

    def to_json(self) -> str:
        return json.dumps(
            {
                "eigenvalues": [[float(ev.real), float(ev.imag)] for ev in self.eigenvalues],
                "classification": self.classification.value,
                "configuration": self.matched_configuration.value,
            }
        )


def flow_residual(state: CoevolState, fp: FlowParams) -> float:
    """Max-norm of the raw flow; boundary-safe for any temperature."""
    if fp.temperature > 0:
        off = ~np.eye(state.n, dtype=bool)
        interior = (
            np.all(state.p > 0.0)
            and np.all(state.p < 1.0)
            and np.all(state.c[off] > 0.0)
        )
        if not interior:
            return float("inf")  # T > 0 rest points are interior; boundary cannot rest
        z = to_logits(state)
        dz = logit_field(z, state.n, fp)
        return float(np.abs(state_field_from_logit(z, dz, state.n)).max())
    dp, dc = flow_two_action(state, fp)
    return float(max(np.abs(dp).max(), np.abs(dc).max()))


# ---------------------------------------------------------------------------
# Jacobians


def jacobian_numeric(
    point: RestPoint | CoevolState,
    fp: FlowParams,
    *,
    h: float = 1e-6,
    check_residual: bool = True,
) -> np.ndarray:
    """Central-difference Jacobian of the independent-coordinate flow.

    Coordinates are ordered links-first, so the matrix splits into the block
    layout [[J11, J12], [J21, J22]] with J11 the n(n-2) link block and J22
    the n-strategy block.  At T = 0 differences are taken on the raw chart;
    at T > 0 on the logit chart, whose per-row change of coordinates
    conjugates the Jacobian blockwise, leaving the spectrum, the block
    traces, and zero off-diagonal blocks intact while keeping every
    evaluation clear of the boundary.
    """
    state = point.state if isinstance(point, RestPoint) else point
    n = state.n
    if check_residual:
        res = flow_residual(state, fp)
        if not res < REST_POINT_TOL:
            raise NotARestPointError(f"residual {res:.3e} exceeds {REST_POINT_TOL}")
    if fp.temperature > 0:
        u0 = to_logits(state)

        def f(u):
            return logit_field(u, n, fp)

    else:
        u0 = pack_independent(state)

        def f(u):
            return flow_independent(u, n, fp)

    m = u0.shape[0]
    jac = np.empty((m, m))
    for j in range(m):
        hj = h * max(1.0, abs(u0[j]))
        up = u0.copy()
        um = u0.copy()
        up[j] += hj
        um[j] -= hj
        jac[:, j] = (f(up) - f(um)) / (2.0 * hj)
    return jac


def symmetric_eigenvalues_n3(
    p: float, game: ReducedGame, b22: float, c_iso: float, temperature: float
) -> np.ndarray:
    """Closed-form spectrum at the uniform 3-player network, common strategy p.

    The Jacobian splits into circulant blocks built from
    v = (a p^2 + (b + d) p + b22 + c_iso)/4, m = (a p + d)/8,
    g = p(1-p)(a p + b)/2 and k = a p (1-p)/4, giving six eigenvalues:
    2k - T, -T - 2v, and two conjugate pairs
    (-k - 2T + v -/+ sqrt(12 g m + (k + v)^2))/2, each doubled.  The square
    root is taken complex when the radicand is negative.
    """
    if not 0.0 < p < 1.0:
        raise InvalidInputError(f"common strategy must be interior, got {p}")
    a, b, d = game.a, game.b, game.d
    T = temperature
    v = (a * p * p + b * p + d * p + b22 + c_iso) / 4.0
    m = (a * p + d) / 8.0
    g = p * (1.0 - p) * (a * p + b) / 2.0
    k = a * p * (1.0 - p) / 4.0
    root = np.sqrt(complex(12.0 * g * m + (k + v) ** 2))
    lam1 = 2.0 * k - T
    lam2 = -T - 2.0 * v
    lam34 = 0.5 * (-k - 2.0 * T + v - root)
    lam56 = 0.5 * (-k - 2.0 * T + v + root)
    return np.array([lam1, lam2, lam34, lam34, lam56, lam56], dtype=complex)


def _reciprocity(state: CoevolState) -> np.ndarray:
    return state.c * state.c.T


def _pure_action_rewards(state: CoevolState, fp: FlowParams) -> np.ndarray:
    """rows[x] = (r_x^1, r_x^2): expected reward of each pure action against
    the realized (reciprocity-weighted) partner profile."""
    g = fp.game
    a11 = g.a + g.b + g.d + fp.a22
    a12 = g.b + fp.a22
    a21 = g.d + fp.a22
    a22 = fp.a22
    w = _reciprocity(state)
    p = state.p
    r1 = w @ (a11 * p + a12 * (1.0 - p))
    r2 = w @ (a21 * p + a22 * (1.0 - p))
    return np.stack([r1, r2], axis=1)


def pair_plus_isolated_eigenvalues(point: RestPoint) -> np.ndarray:
    """Closed-form spectrum at the n=3 pair-plus-isolated configuration.

    With agents x, y fully reciprocated and z isolated, the Jacobian is
    triangular and its eigenvalues read off directly: the link eigenvalues
    r_xz - r_xy, r_yz - r_yx and 0 (the isolated agent's free split), and
    the strategy eigenvalues (1 - 2 p_x)(r_x^1 - r_x^2),
    (1 - 2 p_y)(r_y^1 - r_y^2) and 0 (the isolated agent's frozen strategy).
    """
    state = point.state
    fp = point.params
    if state.n != 3:
        raise ConfigurationMismatchError("pair-plus-isolated analysis needs n=3")
    w = _reciprocity(state)
    pair = None
    for x in range(3):
        for y in range(x + 1, 3):
            if abs(state.c[x, y] - 1.0) <= 1e-8 and abs(state.c[y, x] - 1.0) <= 1e-8:
                pair = (x, y)
    if pair is None:
        raise ConfigurationMismatchError(
            "no fully reciprocated pair found (tolerance 1e-8)"
        )
    x, y = pair
    z = 3 - x - y
    if max(w[x, z], w[y, z]) > 1e-8:
        raise ConfigurationMismatchError("third agent is not isolated (tolerance 1e-8)")
    g = fp.game
    pi = lambda pa, pb: g.a * pa * pb + g.b * pa + g.d * pb + fp.a22
    p = state.p
    c = state.c
    r_xy = c[y, x] * pi(p[x], p[y])
    r_xz = c[z, x] * pi(p[x], p[z])
    r_yx = c[x, y] * pi(p[y], p[x])
    r_yz = c[z, y] * pi(p[y], p[z])
    pure = _pure_action_rewards(state, fp)
    lam4 = (1.0 - 2.0 * p[x]) * (pure[x, 0] - pure[x, 1])
    lam5 = (1.0 - 2.0 * p[y]) * (pure[y, 0] - pure[y, 1])
    return np.array(
        [r_xz - r_xy, r_yz - r_yx, 0.0, lam4, lam5, 0.0], dtype=complex
    )


@dataclass
class StarSpectrum:
    """Analytic diagonal entries of the star Jacobian blocks.

    ``strategy_diag`` holds the n strategy-block entries (center first) and
    ``link_diag`` the n(n-2) link-block entries; ``zero_count`` counts the
    structural zeros among the latter, one per free center weight.
    """

    strategy_diag: np.ndarray
    link_diag: np.ndarray
    zero_count: int

    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([self.link_diag, self.strategy_diag]).astype(complex)

    @property
    def max_real_part(self) -> float:
        return float(self.eigenvalues().real.max())


def star_stability(
    n: int,
    game: ReducedGame,
    a22: float,
    p_common: float,
    center_weights: np.ndarray | None = None,
) -> StarSpectrum:
    """Analytic Jacobian diagonals for a star on a common pure strategy.

    The strategy block is diagonal with entries
    (1 - 2 p) * sum_y (a p + b) c_xy c_yx: for the center that sum covers
    all spokes (weights summing to one), for spoke s it is the single term
    times the center weight w_s.  The link block is triangular; each spoke
    contributes n-2 diagonal entries -pi(p, p) * w_s, and the center's n-2
    free weights are neutral directions (zero eigenvalues, the continuous
    degeneracy of the motif).
    """
    if p_common not in (0.0, 1.0):
        raise InvalidInputError(f"star analysis needs a pure common strategy, got {p_common}")
    if n < 3:
        raise InvalidInputError(f"star motif needs n >= 3, got n={n}")
    if center_weights is None:
        center_weights = np.full(n - 1, 1.0 / (n - 1))
    w = np.asarray(center_weights, dtype=float)
    if w.shape != (n - 1,) or abs(w.sum() - 1.0) > 1e-12 or np.any(w < 0):
        raise InvalidInputError("center weights must be a distribution over the spokes")
    p = p_common
    slope = game.a * p + game.b  # r^1 - r^2 against strategy p
    pi_pp = game.a * p * p + (game.b + game.d) * p + a22
    strat = np.empty(n)
    strat[0] = (1.0 - 2.0 * p) * slope  # center: weights sum to one
    strat[1:] = (1.0 - 2.0 * p) * slope * w
    link = np.concatenate([np.repeat(-pi_pp * w, n - 2), np.zeros(n - 2)])
    return StarSpectrum(strategy_diag=strat, link_diag=link, zero_count=n - 2)


# ---------------------------------------------------------------------------
# Fixed-point equations of the uniform symmetric network


def _symmetric_balance(p: np.ndarray, game: ReducedGame, n: int, temperature: float):
    """(a p + b)/(n-1) - T log(p/(1-p)); zero at uniform-network rest points."""
    return (game.a * p + game.b) / (n - 1) - temperature * np.log(p / (1.0 - p))


def symmetric_fixed_points(
    game: ReducedGame, n: int, temperature: float, grid_points: int = 10_000
) -> list[float]:
    """Common strategies at which the uniform network is at rest.

    Solves (a p + b)/(n-1) = T log(p/(1-p)) by bracketing on a grid and
    bisection.  The grid is uniform in the log-odds of p with an adaptive
    range wide enough to bracket roots exponentially close to the vertices
    (|log-odds| of any root is bounded by (|a|+|b|)/(T (n-1)) + 1).  At
    T = 0 the balance reduces to a p + b = 0: the interior root -b/a when it
    exists, plus the two vertex limits.
    """
    if temperature < 0:
        raise InvalidInputError(f"temperature must be nonnegative, got {temperature}")
    if temperature == 0.0:
        roots = []
        p_star = mixed_ne(game)
        if p_star is not None:
            roots.append(p_star)
        return sorted([0.0, 1.0] + roots)
    zmax = (abs(game.a) + abs(game.b)) / (temperature * (n - 1)) + 1.0
    zgrid = np.linspace(-zmax, zmax, grid_points)
    ez = np.exp(-np.abs(zgrid))  # overflow-free logistic
    pgrid = np.where(zgrid >= 0, 1.0 / (1.0 + ez), ez / (1.0 + ez))
    vals = (game.a * pgrid + game.b) / (n - 1) - temperature * zgrid
    roots: list[float] = []
    sign = np.sign(vals)
    for i in np.nonzero(sign[:-1] * sign[1:] <= 0)[0]:
        if sign[i] == 0.0 and i > 0:
            continue  # counted by the previous bracket
        lo, hi = zgrid[i], zgrid[i + 1]
        flo = vals[i]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fmid = (game.a / (1.0 + np.exp(-mid)) + game.b) / (n - 1) - temperature * mid
            if flo * fmid <= 0:
                hi = mid
            else:
                lo, flo = mid, fmid
            if hi - lo < 1e-15 * max(1.0, abs(lo)):
                break
        z = 0.5 * (lo + hi)
        roots.append(1.0 / (1.0 + np.exp(-z)))
    dedup: list[float] = []
    for r in sorted(roots):
        if not dedup or abs(r - dedup[-1]) > 1e-10:
            dedup.append(r)
    return dedup


def critical_temperature(game: ReducedGame, n: int) -> float | None:
    """Exploration rate at which the symmetric root count drops from 3 to 1.

    Solves the tangency system
    (a p + b)/(n-1) = T log(p/(1-p)),  a/(n-1) = T/(p(1-p))
    with a 2x2 Newton iteration from a grid of seeds, then confirms the root
    count actually changes across each candidate.  Games with a single
    equilibrium (including anti-coordination under the all-equal-strategies
    reduction, where the balance is monotone) have no tangency with T > 0
    and yield None.
    """
    if classify(game) not in (GameClass.COORDINATION, GameClass.ANTI_COORDINATION):
        return None
    a, b = game.a, game.b
    if a <= 0:
        return None  # balance monotone in p: single root at every T
    candidates: list[float] = []
    for p0 in np.linspace(0.02, 0.98, 49):
        p, t = p0, a * p0 * (1.0 - p0) / (n - 1)
        ok = True
        for _ in range(100):
            logit = np.log(p / (1.0 - p))
            f1 = (a * p + b) / (n - 1) - t * logit
            f2 = a / (n - 1) - t / (p * (1.0 - p))
            j11 = a / (n - 1) - t / (p * (1.0 - p))
            j12 = -logit
            j21 = t * (1.0 - 2.0 * p) / (p * (1.0 - p)) ** 2
            j22 = -1.0 / (p * (1.0 - p))
            det = j11 * j22 - j12 * j21
            if det == 0.0 or not np.isfinite(det):
                ok = False
                break
            dp = (-f1 * j22 + f2 * j12) / det
            dt = (-j11 * f2 + j21 * f1) / det
            p_new, t_new = p + dp, t + dt
            if not (0.0 < p_new < 1.0) or not np.isfinite(t_new):
                ok = False
                break
            p, t = p_new, t_new
            if abs(f1) < 1e-14 and abs(f2) < 1e-14:
                break
        if ok and t > 1e-12 and 0.0 < p < 1.0:
            candidates.append(t)
    found: list[float] = []
    for t in sorted(set(round(t, 12) for t in candidates), reverse=True):
        below = len(symmetric_fixed_points(game, n, t * (1.0 - 1e-3)))
        above = len(symmetric_fixed_points(game, n, t * (1.0 + 1e-3)))
        if below == 3 and above == 1:
            found.append(t)
    return found[0] if found else None


# ---------------------------------------------------------------------------
# Rest-point search


def _structured_seeds(fp: FlowParams, n: int) -> list[CoevolState]:
    seeds: list[CoevolState] = []
    roots = symmetric_fixed_points(fp.game, n, fp.temperature)
    for r in roots:
        seeds.append(uniform_symmetric_state(n, r))
    p_star = mixed_ne(fp.game)
    if p_star is not None:
        seeds.append(uniform_symmetric_state(n, p_star))
    vertices = (
        [np.array(bits, dtype=float) for bits in np.ndindex(*(2,) * n)] if n <= 6 else []
    )
    topologies: list[CoevolState] = []
    if n == 3:
        for x, y in ((0, 1), (0, 2), (1, 2)):
            c = np.zeros((3, 3))
            z = 3 - x - y
            c[x, y] = c[y, x] = 1.0
            c[z, x] = c[z, y] = 0.5
            topologies.append(CoevolState(np.zeros(3), c))
        for center in range(3):
            topologies.append(star_state(3, center=center))
        topologies.append(uniform_symmetric_state(3, 0.0))
        topologies.append(cycle_state(3))
        topologies.append(cycle_state(3, reverse=True))
    else:
        for center in range(n):
            topologies.append(star_state(n, center=center))
        topologies.append(uniform_symmetric_state(n, 0.0))
        topologies.append(cycle_state(n))
    for topo in topologies:
        for pv in vertices:
            seeds.append(CoevolState(pv.copy(), topo.c.copy()))
    return seeds


def _newton(fp: FlowParams, n: int, state0: CoevolState, max_iter: int = 80):
    """Damped Newton on the independent-coordinate flow (logit chart for T>0)."""
    T = fp.temperature
    if T > 0:
        from .state import clamp_interior

        u = to_logits(clamp_interior(state0, margin=1e-6))

        def f(uu):
            return logit_field(uu, n, fp)

        def to_state(uu):
            return from_logits(uu, n)

        clamp = None
    else:
        u = pack_independent(state0)

        def f(uu):
            return flow_independent(uu, n, fp)

        def to_state(uu):
            return unpack_independent(uu, n)

        def clamp(uu):
            out = uu.copy()
            k = 0
            for x in range(n):
                free = np.clip(out[k : k + n - 2], 0.0, 1.0)
                s = free.sum()
                if s > 1.0:
                    free *= 1.0 / s
                out[k : k + n - 2] = free
                k += n - 2
            out[k:] = np.clip(out[k:], 0.0, 1.0)
            return out

    fu = f(u)
    norm = np.linalg.norm(fu)
    for _ in range(max_iter):
        if norm < 1e-13:
            break
        jac = np.empty((u.size, u.size))
        for j in range(u.size):
            hj = 1e-7 * max(1.0, abs(u[j]))
            up, um = u.copy(), u.copy()
            up[j] += hj
            um[j] -= hj
            jac[:, j] = (f(up) - f(um)) / (2.0 * hj)
        try:
            step, *_ = np.linalg.lstsq(jac, -fu, rcond=None)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        accepted = False
        scale = 1.0
        for _ in range(50):  # step halving
            u_try = u + scale * step
            if clamp is not None:
                u_try = clamp(u_try)
            f_try = f(u_try)
            norm_try = np.linalg.norm(f_try)
            if np.isfinite(norm_try) and norm_try < norm:
                u, fu, norm = u_try, f_try, norm_try
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            break
    state = to_state(u)
    res = flow_residual(state, fp)
    return state, res


def _canonicalize(state: CoevolState, fp: FlowParams) -> CoevolState:
    """Snap a converged T=0 rest point to its canonical family member.

    Coordinates within 1e-7 of the vertices snap exactly, and fully isolated
    agents (every reciprocity product below 1e-6), whose strategies are
    dynamically frozen and payoff-irrelevant, are reported at the nearest
    strategy vertex.  Families of rest points that differ only in those
    frozen coordinates then deduplicate to one representative.  The snap is
    kept only if the snapped state still rests.
    """
    snapped = state.copy()
    snapped.p[np.abs(snapped.p) < 1e-7] = 0.0
    snapped.p[np.abs(snapped.p - 1.0) < 1e-7] = 1.0
    snapped.c[np.abs(snapped.c) < 1e-7] = 0.0
    snapped.c[np.abs(snapped.c - 1.0) < 1e-7] = 1.0
    snapped.c /= snapped.c.sum(axis=1, keepdims=True)
    w = _reciprocity(snapped)
    isolated = w.max(axis=1) < 1e-6
    snapped.p[isolated] = np.round(snapped.p[isolated])
    if flow_residual(snapped, fp) < REST_POINT_TOL:
        return snapped
    return state


def find_rest_points(
    fp: FlowParams, n: int, starts: int = 64, seed: int = 0
) -> list[RestPoint]:
    """Multi-start damped Newton search for rest points of the flow.

    Newton runs from ``starts`` random interior states plus structured
    seeds: every strategy vertex combined with the canonical three-player
    topologies (reciprocated pair, stars, uniform network, cycles), the
    uniform-network states at each symmetric fixed point, and the mixed
    equilibrium.  Non-convergent starts are dropped; survivors must rest to
    residual 1e-9 and are deduplicated at max-norm distance 1e-6.
    """
    from .state import random_interior

    if starts < 1:
        raise InvalidInputError(f"starts must be >= 1, got {starts}")
    seeds = _structured_seeds(fp, n)
    seeds += [random_interior(n, seed=seed + i, margin=0.02) for i in range(starts)]
    accepted: list[RestPoint] = []
    for s0 in seeds:
        result = _newton(fp, n, s0)
        if result is None:
            continue
        state, res = result
        if not res < REST_POINT_TOL:
            continue
        if fp.temperature == 0.0:
            state = _canonicalize(state, fp)
            res = flow_residual(state, fp)
        if validate(state, tol=1e-8):
            continue
        if any(state.distance(rp.state) < DEDUP_DISTANCE for rp in accepted):
            continue
        accepted.append(RestPoint(state=state, residual=res, params=fp))
    return accepted


# ---------------------------------------------------------------------------
# Classification


def match_configuration(state: CoevolState) -> Configuration:
    """Name the network topology of a (typically converged) state.

    The uniform network is matched on the raw weights; otherwise agents
    count as committed to a partner above the reciprocated threshold on
    c_xy * c_yx products (0.99), absent below 1e-2.  A star needs every
    non-center agent fully committed to the center and no reciprocation
    among the spokes; the no-reciprocation outcome requires concentrated
    outgoing links forming no mutual pair.
    """
    n = state.n
    c = state.c
    off = ~np.eye(n, dtype=bool)
    if np.abs(c[off] - 1.0 / (n - 1)).max() < 1e-2:
        return Configuration.SYMMETRIC_UNIFORM
    w = c * c.T
    pairs = [(x, y) for x in range(n) for y in range(x + 1, n) if w[x, y] > RECIPROCATED_THRESHOLD]
    if len(pairs) == 1:
        x, y = pairs[0]
        others = [z for z in range(n) if z not in (x, y)]
        if all(w[z].max() < ABSENT_THRESHOLD for z in others):
            return Configuration.PAIR_PLUS_ISOLATED
    for center in range(n):
        spokes = [x for x in range(n) if x != center]
        committed = all(c[s, center] > RECIPROCATED_THRESHOLD for s in spokes)
        no_spoke_links = all(
            w[s, t] < ABSENT_THRESHOLD for s in spokes for t in spokes if s < t
        )
        if committed and no_spoke_links and len(spokes) >= 2:
            return Configuration.STAR
    if np.all(w[off] < ABSENT_THRESHOLD) and np.all(c.max(axis=1) > 0.9):
        return Configuration.CYCLIC_NON_RECIPROCATED
    return Configuration.OTHER


def classify_stability(
    point: RestPoint, fp: FlowParams | None = None, tol: float = STABILITY_TOL
) -> StabilityReport:
    """Spectrum-based verdict for a rest point plus its topology label.

    Eigenvalues come from the QR algorithm on the numeric Jacobian; the rest
    point is stable when every real part is below -tol, marginally stable
    when the largest sits within the +/-tol band, unstable otherwise.
    Complex eigenvalues are judged by real part only.
    """
    fp = fp or point.params
    jac = jacobian_numeric(point, fp)
    eigenvalues = np.linalg.eigvals(jac)
    max_re = float(eigenvalues.real.max())
    if max_re < -tol:
        verdict = Stability.STABLE
    elif max_re <= tol:
        verdict = Stability.MARGINALLY_STABLE
    else:
        verdict = Stability.UNSTABLE
    return StabilityReport(
        eigenvalues=eigenvalues,
        classification=verdict,
        matched_configuration=match_configuration(point.state),
    )
