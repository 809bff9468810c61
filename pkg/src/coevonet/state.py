"""Joint state of the coevolving system: per-agent strategies and the
row-stochastic link matrix, plus the coordinate charts used by the solvers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ChartDomainError, InvalidInputError

__all__ = [
    "CoevolState",
    "JointStrategy",
    "validate",
    "is_valid",
    "random_interior",
    "clamp_interior",
    "to_logits",
    "from_logits",
    "pack_independent",
    "unpack_independent",
    "independent_dim",
    "off_diagonal_pairs",
    "uniform_symmetric_state",
    "pair_plus_isolated_state",
    "star_state",
    "cycle_state",
    "state_to_json",
    "state_from_json",
    "flat_header",
    "flatten_state",
]

SIMPLEX_TOL = 1e-12


@dataclass
class CoevolState:
    """Strategies ``p`` (probability of action 1 per agent) and link weights
    ``c`` (``c[x, y]`` = probability that x initiates a game with y).

    Rows of ``c`` sum to one and the diagonal is structurally zero; agents
    never play themselves.  Instances are treated as immutable values: use
    :meth:`copy` before mutating arrays in place.
    """

    p: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        self.p = np.asarray(self.p, dtype=float).copy()
        self.c = np.asarray(self.c, dtype=float).copy()
        n = self.p.shape[0] if self.p.ndim == 1 else -1
        if n < 2:
            raise InvalidInputError(f"need at least 2 agents, got p of shape {self.p.shape}")
        if self.c.shape != (n, n):
            raise InvalidInputError(f"link matrix shape {self.c.shape} does not match n={n}")
        if not (np.all(np.isfinite(self.p)) and np.all(np.isfinite(self.c))):
            raise InvalidInputError("state entries must be finite")

    @property
    def n(self) -> int:
        return self.p.shape[0]

    def copy(self) -> "CoevolState":
        return CoevolState(self.p.copy(), self.c.copy())

    def distance(self, other: "CoevolState") -> float:
        """Max-norm distance over all strategy and link coordinates."""
        return max(
            float(np.abs(self.p - other.p).max()),
            float(np.abs(self.c - other.c).max()),
        )


@dataclass
class JointStrategy:
    """Per-agent distribution over (partner, action) pairs.

    ``q[x, y, i]`` is the probability that agent x picks partner y and action
    i; for each x the entries sum to one over all (y != x, i).  Used only by
    the unfactorized parent dynamics and its consistency checks.
    """

    q: np.ndarray

    def __post_init__(self) -> None:
        self.q = np.asarray(self.q, dtype=float).copy()
        if self.q.ndim != 3 or self.q.shape[0] != self.q.shape[1] or self.q.shape[2] != 2:
            raise InvalidInputError(f"joint strategy must have shape (n, n, 2), got {self.q.shape}")
        if not np.all(np.isfinite(self.q)):
            raise InvalidInputError("joint strategy entries must be finite")

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @classmethod
    def from_state(cls, state: CoevolState) -> "JointStrategy":
        """Factorized joint strategy q[x, y, i] = c[x, y] * p_x^i."""
        pi = np.stack([state.p, 1.0 - state.p], axis=1)  # (n, 2)
        q = state.c[:, :, None] * pi[:, None, :]
        return cls(q)

    def marginals(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (p, c) marginals: p_x = sum_y q[x, y, 0], c_xy = sum_i q[x, y, i]."""
        return self.q[:, :, 0].sum(axis=1), self.q.sum(axis=2)


def validate(state: CoevolState, tol: float = SIMPLEX_TOL) -> list[str]:
    """List every simplex/diagonal violation exceeding ``tol``.

    Violations are returned as data rather than raised: an empty list means
    the state is valid.
    """
    violations: list[str] = []
    n = state.n
    for x in range(n):
        if state.p[x] < -tol or state.p[x] > 1.0 + tol:
            violations.append(f"p-range: p[{x}]={state.p[x]!r} outside [0, 1]")
    diag = np.abs(np.diag(state.c))
    for x in np.nonzero(diag > tol)[0]:
        violations.append(f"diagonal: c[{x}][{x}]={state.c[x, x]!r} nonzero")
    if np.any(state.c < -tol):
        xs, ys = np.nonzero(state.c < -tol)
        for x, y in zip(xs, ys):
            violations.append(f"negative: c[{x}][{y}]={state.c[x, y]!r}")
    row_sums = state.c.sum(axis=1)
    for x in np.nonzero(np.abs(row_sums - 1.0) > tol)[0]:
        violations.append(f"row-sum: row {x} sums to {row_sums[x]!r}")
    return violations


def is_valid(state: CoevolState, tol: float = SIMPLEX_TOL) -> bool:
    return not validate(state, tol)


def random_interior(n: int, seed: int, margin: float = 0.05) -> CoevolState:
    """Deterministic-per-seed interior state.

    Every strategy lands in [margin, 1-margin]; every off-diagonal link
    weight is at least margin/(n-1) after renormalization, so the state is
    strictly interior and all flows and charts are defined on it.
    """
    if n < 2:
        raise InvalidInputError(f"need at least 2 agents, got n={n}")
    if not 0.0 < margin < 0.5:
        raise InvalidInputError(f"margin must lie in (0, 0.5), got {margin}")
    rng = np.random.default_rng(seed)
    p = margin + (1.0 - 2.0 * margin) * rng.random(n)
    c = np.zeros((n, n))
    if n == 2:
        c[0, 1] = c[1, 0] = 1.0  # no link freedom with a single partner
        return CoevolState(p, c)
    floor = margin / (n - 1)
    for x in range(n):
        cols = [y for y in range(n) if y != x]
        row = rng.dirichlet(np.ones(n - 1))
        c[x, cols] = row * (1.0 - (n - 1) * floor) + floor
    return CoevolState(p, c)


def clamp_interior(state: CoevolState, margin: float = 1e-9) -> CoevolState:
    """Pull a state strictly inside the simplex and renormalize rows.

    The exploration flow's log terms diverge on the boundary; clamping at a
    tiny margin keeps externally supplied states evaluable without visibly
    moving them.
    """
    p = np.clip(state.p, margin, 1.0 - margin)
    c = state.c.copy()
    off = ~np.eye(state.n, dtype=bool)
    c[off] = np.clip(c[off], margin, None)
    np.fill_diagonal(c, 0.0)
    c /= c.sum(axis=1, keepdims=True)
    return CoevolState(p, c)


def off_diagonal_pairs(n: int) -> list[tuple[int, int]]:
    """Row-major (x, y) pairs with x != y; fixes the CSV column order."""
    return [(x, y) for x in range(n) for y in range(n) if y != x]


def independent_dim(n: int) -> int:
    """n strategy coordinates plus n(n-2) free link coordinates."""
    return n + n * (n - 2)


def _free_link_cols(n: int, x: int) -> list[int]:
    cols = [y for y in range(n) if y != x]
    return cols[:-1]


def pack_independent(state: CoevolState) -> np.ndarray:
    """Flatten to independent coordinates: free link weights first, then p.

    Each link row drops its last off-diagonal entry (recovered from the
    row-sum constraint), leaving n-2 free weights per agent.  The link-first
    ordering matches the Jacobian block convention used by the stability
    analysis.
    """
    n = state.n
    parts = []
    for x in range(n):
        parts.append(state.c[x, _free_link_cols(n, x)])
    parts.append(state.p)
    return np.concatenate(parts) if parts else state.p.copy()


def unpack_independent(u: np.ndarray, n: int) -> CoevolState:
    """Inverse of :func:`pack_independent`."""
    u = np.asarray(u, dtype=float)
    if u.shape != (independent_dim(n),):
        raise InvalidInputError(f"expected {independent_dim(n)} coordinates for n={n}, got {u.shape}")
    c = np.zeros((n, n))
    k = 0
    for x in range(n):
        cols = [y for y in range(n) if y != x]
        free = u[k : k + n - 2]
        k += n - 2
        c[x, cols[:-1]] = free
        c[x, cols[-1]] = 1.0 - free.sum()
    p = u[k:]
    return CoevolState(p, c)


def to_logits(state: CoevolState) -> np.ndarray:
    """Map a strictly interior state to unconstrained coordinates.

    Link rows become log-ratios against their last free entry and strategies
    become log(p/(1-p)); ordering matches :func:`pack_independent`.
    """
    n = state.n
    if np.any(state.p <= 0.0) or np.any(state.p >= 1.0):
        raise ChartDomainError("strategy on the simplex boundary; logit chart undefined")
    off = ~np.eye(n, dtype=bool)
    if np.any(state.c[off] <= 0.0):
        raise ChartDomainError("link weight on the simplex boundary; logit chart undefined")
    parts = []
    for x in range(n):
        cols = [y for y in range(n) if y != x]
        last = state.c[x, cols[-1]]
        parts.append(np.log(state.c[x, cols[:-1]] / last))
    parts.append(np.log(state.p / (1.0 - state.p)))
    return np.concatenate(parts)


def from_logits(z: np.ndarray, n: int) -> CoevolState:
    """Inverse of :func:`to_logits`; numerically stable softmax per link row."""
    z = np.asarray(z, dtype=float)
    if z.shape != (independent_dim(n),):
        raise InvalidInputError(f"expected {independent_dim(n)} logit coordinates for n={n}, got {z.shape}")
    c = np.zeros((n, n))
    k = 0
    for x in range(n):
        cols = [y for y in range(n) if y != x]
        zz = z[k : k + n - 2]
        k += n - 2
        zfull = np.concatenate([zz, [0.0]])  # last entry is the reference
        zfull -= zfull.max()
        e = np.exp(zfull)
        c[x, cols] = e / e.sum()
    zp = z[k:]
    e = np.exp(-np.abs(zp))  # overflow-free logistic
    p = np.where(zp >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return CoevolState(p, c)


# ---------------------------------------------------------------------------
# Canonical network configurations


def uniform_symmetric_state(n: int, p: float | np.ndarray) -> CoevolState:
    """All pairs linked with weight 1/(n-1); common or per-agent strategy."""
    c = np.full((n, n), 1.0 / (n - 1))
    np.fill_diagonal(c, 0.0)
    pvec = np.full(n, float(p)) if np.isscalar(p) else np.asarray(p, dtype=float)
    return CoevolState(pvec, c)


def pair_plus_isolated_state(
    p_pair: float, p_rest: float, n: int = 3, weight: float = 0.5
) -> CoevolState:
    """Agents 0 and 1 fully reciprocated; all others split links onto them.

    ``weight`` is each outsider's weight on agent 0 (the rest goes to agent
    1 and, for n > 3, uniformly to the other outsiders is not needed: the
    paper's configuration keeps outsiders aimed at the pair).
    """
    c = np.zeros((n, n))
    c[0, 1] = c[1, 0] = 1.0
    for x in range(2, n):
        c[x, 0] = weight
        c[x, 1] = 1.0 - weight
    p = np.full(n, float(p_rest))
    p[0] = p[1] = p_pair
    return CoevolState(p, c)


def star_state(n: int, center: int = 0, p: float = 0.0, weights: np.ndarray | None = None) -> CoevolState:
    """Star motif: every spoke commits to the center, which splits its weight."""
    c = np.zeros((n, n))
    spokes = [x for x in range(n) if x != center]
    if weights is None:
        weights = np.full(n - 1, 1.0 / (n - 1))
    weights = np.asarray(weights, dtype=float)
    for w, s in zip(weights, spokes):
        c[center, s] = w
        c[s, center] = 1.0
    return CoevolState(np.full(n, float(p)), c)


def cycle_state(n: int, p: float = 0.0, reverse: bool = False) -> CoevolState:
    """Each agent aims fully at its cyclic successor; nothing is reciprocated."""
    c = np.zeros((n, n))
    for x in range(n):
        target = (x - 1) % n if reverse else (x + 1) % n
        c[x, target] = 1.0
    return CoevolState(np.full(n, float(p)), c)


# ---------------------------------------------------------------------------
# Serialization


def state_to_json(state: CoevolState) -> str:
    return json.dumps({"n": state.n, "p": state.p.tolist(), "c": state.c.tolist()})


def state_from_json(text: str) -> CoevolState:
    data = json.loads(text)
    state = CoevolState(np.asarray(data["p"]), np.asarray(data["c"]))
    if state.n != data.get("n", state.n):
        raise InvalidInputError("declared n does not match array shapes")
    return state


def flat_header(n: int) -> list[str]:
    """Column names for flattened states: p_0..p_{n-1}, then c_x_y row-major."""
    return [f"p_{x}" for x in range(n)] + [f"c_{x}_{y}" for x, y in off_diagonal_pairs(n)]


def flatten_state(state: CoevolState) -> np.ndarray:
    """Values matching :func:`flat_header` order."""
    n = state.n
    off = [state.c[x, y] for x, y in off_diagonal_pairs(n)]
    return np.concatenate([state.p, off])
