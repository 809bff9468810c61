"""Parameter sweeps, motif censuses and basin-of-attraction sampling built
on the rest-point and stability machinery."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .analysis import (
    Configuration,
    RestPoint,
    Stability,
    StabilityReport,
    classify_stability,
    critical_temperature,
    find_rest_points,
    flow_residual,
    jacobian_numeric,
    symmetric_eigenvalues_n3,
    symmetric_fixed_points,
)
from .dynamics import FlowParams, integrate
from .errors import InvalidInputError
from .games import PayoffSpec, effective_matrix, reduce_matrix
from .seeding import derive_seed
from .state import CoevolState, random_interior, uniform_symmetric_state, validate

__all__ = [
    "MotifCensus",
    "SweepResult",
    "PlaneResult",
    "BasinResult",
    "motif_census",
    "sweep_temperature",
    "sweep_plane",
    "basin_sample",
]

DEFAULT_RECIPROCITY_THRESHOLD = 0.25
BASIN_HORIZON = 1e5
BASIN_EQUILIBRIUM_TOL = 1e-7


def _ordered_map(fn, count: int, workers: int) -> list:
    """Map fn over range(count), optionally on a thread pool.

    Work items carry their own derived seeds, so the result list (always in
    index order) is identical for any worker count.
    """
    if workers <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


@dataclass
class MotifCensus:
    """Partition of the agents into reciprocated-link components with labels.

    ``components`` holds (label, members) in discovery order; ``counts``
    aggregates labels.  Star(k) means k nodes: a center of degree k-1 and
    spokes of degree one with no spoke-spoke reciprocation.
    """

    components: list[tuple[str, list[int]]] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)

    def total_agents(self) -> int:
        return sum(len(m) for _, m in self.components)

    def labels(self) -> list[str]:
        return [label for label, _ in self.components]

    def signature(self) -> tuple[str, ...]:
        return tuple(sorted(self.labels()))


def motif_census(
    state: CoevolState, reciprocity_threshold: float = DEFAULT_RECIPROCITY_THRESHOLD
) -> MotifCensus:
    """Label the components of the reciprocated-link graph of a state.

    An undirected edge joins x and y when c_xy * c_yx reaches the threshold
    (boundary inclusive, so the uniform n=3 network's exact 1/4 products
    count).  Components are labeled Isolated, Pair, Star(k), Symmetric
    (complete, size >= 3) or Other.  When no edge exists anywhere and every
    agent concentrates its outgoing weight on a non-reciprocating partner,
    the whole network is the no-play outcome: one Cyclic component.
    """
    n = state.n
    w = state.c * state.c.T
    adj = w >= reciprocity_threshold
    np.fill_diagonal(adj, False)
    seen = np.zeros(n, dtype=bool)
    comps: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in np.nonzero(adj[v])[0]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(int(u))
        comps.append(sorted(comp))
    if (
        n >= 2
        and all(len(c) == 1 for c in comps)
        and np.all(state.c.max(axis=1) > 0.9)
    ):
        census = MotifCensus(components=[("Cyclic", list(range(n)))])
        census.counts = {"Cyclic": 1}
        return census
    census = MotifCensus()
    for comp in comps:
        k = len(comp)
        if k == 1:
            label = "Isolated"
        elif k == 2:
            label = "Pair"
        else:
            degrees = {v: int(adj[v, comp].sum()) for v in comp}
            ordered = sorted(degrees.values())
            if ordered == [1] * (k - 1) + [k - 1]:
                label = f"Star({k})"
            elif all(d == k - 1 for d in degrees.values()):
                label = "Symmetric"
            else:
                label = "Other"
        census.components.append((label, comp))
        census.counts[label] = census.counts.get(label, 0) + 1
    return census


# ---------------------------------------------------------------------------
# Temperature sweep


@dataclass
class SweepResult:
    """Rest points and verdicts over a one-dimensional temperature grid."""

    temperatures: np.ndarray
    records: list[list[tuple[RestPoint, StabilityReport]]]
    symmetric_stable: list[bool]
    critical_temperature_estimate: float | None
    fold_temperature: float | None

    def stable_branches(self, index: int) -> list[tuple[RestPoint, StabilityReport]]:
        return [
            (rp, rep)
            for rp, rep in self.records[index]
            if rep.classification is Stability.STABLE
        ]

    def to_csv(self) -> str:
        lines = ["T,rest_point_id,classification,configuration,max_real_eigenvalue,residual,p_mean"]
        for t, recs in zip(self.temperatures, self.records):
            for k, (rp, rep) in enumerate(recs):
                lines.append(
                    f"{t:.17g},{k},{rep.classification.value},{rep.matched_configuration.value},"
                    f"{rep.max_real_part:.17g},{rp.residual:.17g},{rp.state.p.mean():.17g}"
                )
        return "\n".join(lines) + "\n"

    def summary_json(self) -> str:
        return json.dumps(
            {
                "critical_temperature": self.critical_temperature_estimate,
                "fold_temperature": self.fold_temperature,
                "symmetric_stable": list(map(bool, self.symmetric_stable)),
                "temperatures": [float(t) for t in self.temperatures],
            }
        )


def _symmetric_all_stable(spec: PayoffSpec, n: int, temperature: float) -> bool:
    """True when every uniform-network fixed point is strictly stable.

    The uniform configuration counts as stable only when no member of its
    fixed-point family is unstable; below the fold the extra roots carry
    positive eigenvalues, so the flip of this flag lands on the fold.
    """
    a_eff = effective_matrix(spec)
    game = reduce_matrix(a_eff)
    roots = symmetric_fixed_points(game, n, temperature)
    if not roots:
        return False
    for p in roots:
        if not 0.0 < p < 1.0:
            return False
        ev = symmetric_eigenvalues_n3(p, game, spec.b22, spec.c_iso, temperature)
        if ev.real.max() >= -1e-8:
            return False
    return True


def sweep_temperature(
    spec: PayoffSpec,
    n: int,
    t_grid: np.ndarray,
    starts: int = 48,
    seed: int = 0,
    workers: int = 1,
) -> SweepResult:
    """Rest points, classifications, and the symmetric-network flip over T.

    At each grid temperature the multi-start search runs and every rest
    point is classified.  The symmetric-network flag uses the closed-form
    n=3 eigenvalues over all of its fixed-point roots; the reported critical
    temperature estimate is where that flag flips to stable (refined by
    bisection between the bracketing grid points), alongside the tangency
    value of the root-count fold when the game has one.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise InvalidInputError("temperature grid must be nonempty")
    if np.any(np.diff(t_grid) <= 0):
        raise InvalidInputError("temperature grid must be strictly increasing")
    if n != 3:
        raise InvalidInputError("closed-form symmetric classification is n=3 only")
    def solve_point(i: int):
        t = float(t_grid[i])
        fp = FlowParams.from_payoff(spec, temperature=t)
        pts = find_rest_points(fp, n, starts=starts, seed=derive_seed(seed, "sweep-t", i))
        return [(rp, classify_stability(rp)) for rp in pts], _symmetric_all_stable(spec, n, t)

    solved = _ordered_map(solve_point, t_grid.size, workers)
    records = [recs for recs, _ in solved]
    sym_flags = [flag for _, flag in solved]
    estimate = None
    for i in range(1, len(t_grid)):
        if sym_flags[i] and not sym_flags[i - 1]:
            lo, hi = float(t_grid[i - 1]), float(t_grid[i])
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if _symmetric_all_stable(spec, n, mid):
                    hi = mid
                else:
                    lo = mid
            estimate = 0.5 * (lo + hi)
            break
    game = reduce_matrix(effective_matrix(spec))
    return SweepResult(
        temperatures=t_grid,
        records=records,
        symmetric_stable=sym_flags,
        critical_temperature_estimate=estimate,
        fold_temperature=critical_temperature(game, n),
    )


# ---------------------------------------------------------------------------
# (temperature, isolation payoff) plane


@dataclass
class PlaneResult:
    """Stability mask of the uniform network over a (T, c_iso) grid."""

    temperatures: np.ndarray
    c_iso_values: np.ndarray
    stable: np.ndarray  # bool, shape (len(T), len(CI))
    max_real: np.ndarray  # float, same shape: worst eigenvalue over roots
    spot_check_max_deviation: float

    def boundary(self) -> list[tuple[float, float, float]]:
        """Per-temperature extent of the stable region: (T, ci_lo, ci_hi)."""
        out = []
        for i, t in enumerate(self.temperatures):
            idx = np.nonzero(self.stable[i])[0]
            if idx.size:
                out.append(
                    (float(t), float(self.c_iso_values[idx[0]]), float(self.c_iso_values[idx[-1]]))
                )
        return out

    def to_csv(self) -> str:
        lines = ["T,c_iso,stable,max_real_eigenvalue"]
        for i, t in enumerate(self.temperatures):
            for j, ci in enumerate(self.c_iso_values):
                lines.append(
                    f"{t:.17g},{ci:.17g},{int(self.stable[i, j])},{self.max_real[i, j]:.17g}"
                )
        return "\n".join(lines) + "\n"

    def summary_json(self) -> str:
        return json.dumps(
            {
                "boundary": self.boundary(),
                "spot_check_max_deviation": self.spot_check_max_deviation,
            }
        )


def sweep_plane(
    spec: PayoffSpec,
    n: int,
    t_grid: np.ndarray,
    ci_grid: np.ndarray,
    starts: int = 20,
    seed: int = 0,
) -> PlaneResult:
    """Classify the uniform network across a (temperature, c_iso) grid.

    A grid point is stable when some symmetric fixed-point root at that
    temperature is strictly stable by the closed-form n=3 eigenvalues (the
    region extends below the fold, where the extra roots are always
    unstable, and pinches toward the point where the isolation payoff
    cancels the equilibrium reward).  ``max_real`` records the most stable
    root's leading real part.  ``starts`` random stable grid points are then
    re-verified against the numeric Jacobian and the largest eigenvalue
    discrepancy is reported, as a self-consistency figure.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    ci_grid = np.asarray(ci_grid, dtype=float)
    if t_grid.size == 0 or ci_grid.size == 0:
        raise InvalidInputError("grids must be nonempty")
    if n != 3:
        raise InvalidInputError("closed-form plane classification is n=3 only")
    game = reduce_matrix(effective_matrix(spec))  # shift-invariant: same for all c_iso
    stable = np.zeros((t_grid.size, ci_grid.size), dtype=bool)
    max_real = np.full((t_grid.size, ci_grid.size), np.inf)
    # at low temperature the outer roots sit closer to the vertices than a
    # double can represent; the clamped neighbour evaluates to the correct
    # family limit since p(1-p) factors vanish smoothly
    lo, hi = np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0)
    for i, t in enumerate(t_grid):
        roots = [min(max(p, lo), hi) for p in symmetric_fixed_points(game, n, float(t))]
        for j, ci in enumerate(ci_grid):
            best = np.inf
            for p in roots:
                ev = symmetric_eigenvalues_n3(p, game, spec.b22, float(ci), float(t))
                best = min(best, float(ev.real.max()))
            max_real[i, j] = best
            stable[i, j] = best < -1e-8
    # spot-verify against the numeric Jacobian at random stable grid points
    rng = np.random.default_rng(derive_seed(seed, "plane-spot", 0))
    stable_idx = np.argwhere(stable)
    deviation = 0.0
    if stable_idx.size:
        picks = stable_idx[rng.choice(len(stable_idx), size=min(starts, len(stable_idx)), replace=False)]
        for i, j in picks:
            t, ci = float(t_grid[i]), float(ci_grid[j])
            probe = PayoffSpec(spec.b11, spec.b12, spec.b21, spec.b22, c_iso=ci)
            fp = FlowParams.from_payoff(probe, temperature=t)
            for p in symmetric_fixed_points(game, n, t):
                p = min(max(p, lo), hi)
                ev_ana = symmetric_eigenvalues_n3(p, game, spec.b22, ci, t)
                if ev_ana.real.max() >= -1e-8:
                    continue  # verify the roots that carry the stable verdict
                state = uniform_symmetric_state(n, p)
                ev_num = np.linalg.eigvals(jacobian_numeric(state, fp))
                deviation = max(
                    deviation,
                    abs(float(ev_num.real.max()) - float(ev_ana.real.max())),
                )
    return PlaneResult(
        temperatures=t_grid,
        c_iso_values=ci_grid,
        stable=stable,
        max_real=max_real,
        spot_check_max_deviation=deviation,
    )


# ---------------------------------------------------------------------------
# Basin sampling


@dataclass
class BasinResult:
    """Frequencies of motif-census outcomes over random-start trials."""

    counts: dict[str, int]
    trials: int
    converged: int
    non_converged: int
    final_states: list[CoevolState]

    def frequencies(self) -> dict[str, tuple[float, float]]:
        """Label -> (frequency among converged trials, binomial std error)."""
        out = {}
        m = max(self.converged, 1)
        for label, k in sorted(self.counts.items()):
            f = k / m
            out[label] = (f, float(np.sqrt(f * (1.0 - f) / m)))
        return out

    def to_csv(self) -> str:
        lines = ["label,count,frequency,std_error"]
        for label, (f, se) in self.frequencies().items():
            lines.append(f"{label},{self.counts[label]},{f:.17g},{se:.17g}")
        return "\n".join(lines) + "\n"

    def summary_json(self) -> str:
        return json.dumps(
            {
                "trials": self.trials,
                "converged": self.converged,
                "non_converged": self.non_converged,
                "counts": dict(sorted(self.counts.items())),
            }
        )


def basin_sample(
    spec: PayoffSpec,
    n: int,
    temperature: float,
    trials: int,
    seed: int = 0,
    reciprocity_threshold: float = DEFAULT_RECIPROCITY_THRESHOLD,
    workers: int = 1,
) -> BasinResult:
    """Integrate from random interior states and tabulate final motifs.

    Each trial derives its own seed from the master seed, so results do not
    depend on execution order or worker count.  Trials that fail to reach
    the equilibrium tolerance within the horizon are counted separately and
    excluded from the census.
    """
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    fp = FlowParams.from_payoff(spec, temperature=temperature)

    def one_trial(i: int) -> CoevolState | None:
        s0 = random_interior(n, seed=derive_seed(seed, "basin", i), margin=0.02)
        traj = integrate(
            s0,
            fp,
            horizon=BASIN_HORIZON,
            equilibrium_tol=BASIN_EQUILIBRIUM_TOL,
            sample_every=BASIN_HORIZON,  # endpoints only
        )
        if not traj.converged:
            return None
        final = traj.final_state
        if validate(final, tol=1e-8):
            return None
        return final

    outcomes = _ordered_map(one_trial, trials, workers)
    counts: dict[str, int] = {}
    finals: list[CoevolState] = []
    converged = 0
    for final in outcomes:
        if final is None:
            continue
        converged += 1
        finals.append(final)
        census = motif_census(final, reciprocity_threshold)
        for label in census.labels():
            counts[label] = counts.get(label, 0) + 1
    return BasinResult(
        counts=counts,
        trials=trials,
        converged=converged,
        non_converged=trials - converged,
        final_states=finals,
    )
