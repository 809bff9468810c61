"""Two-action symmetric games: payoff matrices, the isolation-payoff shift,
and the reduced three-parameter form that drives all of the dynamics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "GameClass",
    "PayoffSpec",
    "ReducedGame",
    "effective_matrix",
    "reduce_matrix",
    "classify",
    "mixed_ne",
]


class GameClass(Enum):
    """Coarse behavioural class of a two-action symmetric game."""

    DOMINANT_ACTION = "dominant_action"
    COORDINATION = "coordination"
    ANTI_COORDINATION = "anti_coordination"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class PayoffSpec:
    """Base 2x2 payoff matrix B plus the isolation payoff.

    ``c_iso`` is the per-round reward of an agent nobody plays with.  It is
    kept separate from the base entries so that parameter sweeps over the
    isolation payoff never mutate the underlying game; ``effective_matrix``
    folds it in.
    """

    b11: float
    b12: float
    b21: float
    b22: float
    c_iso: float = 0.0

    def __post_init__(self) -> None:
        vals = (self.b11, self.b12, self.b21, self.b22, self.c_iso)
        if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in vals):
            raise InvalidInputError(f"payoff entries must be finite reals, got {vals}")

    @property
    def base_matrix(self) -> np.ndarray:
        return np.array([[self.b11, self.b12], [self.b21, self.b22]], dtype=float)


@dataclass(frozen=True)
class ReducedGame:
    """The three payoff differences that the two-action dynamics depend on.

    ``a = a11 - a21 - a12 + a22``, ``b = a12 - a22``, ``d = a21 - a22``.
    All three are invariant under adding a constant to every matrix entry,
    so the isolation-payoff shift cancels here.
    """

    a: float
    b: float
    d: float


def effective_matrix(spec: PayoffSpec) -> np.ndarray:
    """Payoff matrix with the isolation reward folded in: A = B + c_iso.

    Downstream, an isolated agent earns exactly 0; adding ``c_iso``
    uniformly to the base matrix makes that the reference point.
    """
    return spec.base_matrix + spec.c_iso


def reduce_matrix(matrix: np.ndarray) -> ReducedGame:
    """Collapse an effective 2x2 matrix to its ReducedGame differences."""
    m = np.asarray(matrix, dtype=float)
    if m.shape != (2, 2):
        raise InvalidInputError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"matrix entries must be finite, got {m}")
    a = m[0, 0] - m[1, 0] - m[0, 1] + m[1, 1]
    b = m[0, 1] - m[1, 1]
    d = m[1, 0] - m[1, 1]
    return ReducedGame(a=float(a), b=float(b), d=float(d))


def classify(game: ReducedGame) -> GameClass:
    """Place a game in the (a, b) plane partition.

    The open regions are: dominant-action (-b/a outside [0, 1]),
    coordination (a > 0, b < 0, -b/a inside), anti-coordination
    (a < 0, b > 0, -b/a inside).  Everything on the region boundaries,
    including a == 0, is reported as DEGENERATE rather than silently
    assigned to a neighbour.  Comparisons are exact: the inputs are
    user-given constants, not computed values.
    """
    if game.a == 0.0:
        return GameClass.DEGENERATE
    ratio = -game.b / game.a
    if ratio == 0.0 or ratio == 1.0:
        return GameClass.DEGENERATE
    if ratio < 0.0 or ratio > 1.0:
        return GameClass.DOMINANT_ACTION
    return GameClass.COORDINATION if game.a > 0 else GameClass.ANTI_COORDINATION


def mixed_ne(game: ReducedGame) -> float | None:
    """Interior equilibrium strategy -b/a, or None when it is not in (0, 1)."""
    if game.a == 0.0:
        return None
    p = -game.b / game.a
    if 0.0 < p < 1.0:
        return p
    return None
