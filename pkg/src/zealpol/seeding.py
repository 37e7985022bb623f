"""Initial conditions and zealot assignment."""

from __future__ import annotations

import numpy as np

from .dynamics import STATE_DTYPE
from .graph import Graph, ParameterError

__all__ = ["random_initial", "seed_initial", "uniform_zealots", "degree_zealots"]


def random_initial(n: int, rng: np.random.Generator) -> np.ndarray:
    """Every vertex independently -1 or +1 with probability 1/2."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return (2 * rng.integers(0, 2, size=n) - 1).astype(STATE_DTYPE)


def seed_initial(
    n: int, rng: np.random.Generator, pair: tuple[int, int] | None = None
) -> np.ndarray:
    """All-neutral state except a +1 seed and a distinct -1 seed.

    The ordered pair ``(plus, minus)`` is drawn uniformly unless given.
    """
    if n < 2:
        raise ParameterError(f"seed initial condition needs n >= 2, got {n}")
    if pair is None:
        plus, minus = rng.choice(n, size=2, replace=False)
    else:
        plus, minus = pair
        if plus == minus or not (0 <= plus < n and 0 <= minus < n):
            raise ParameterError(f"invalid seed pair {pair} for n={n}")
    s = np.zeros(n, dtype=STATE_DTYPE)
    s[plus] = 1
    s[minus] = -1
    return s


def _check_fraction(p_z: float) -> None:
    if not 0.0 <= p_z <= 1.0:
        raise ParameterError(f"p_z must lie in [0, 1], got {p_z}")


def uniform_zealots(n: int, p_z: float, rng: np.random.Generator) -> np.ndarray:
    """Independent Bernoulli(``p_z``) zealot flags."""
    _check_fraction(p_z)
    return rng.random(n) < p_z


def degree_zealots(g: Graph, p_z: float, rng: np.random.Generator) -> np.ndarray:
    """Mark the ``round(p_z * n)`` highest-degree vertices as zealots.

    Rounding is half-up. Vertices tied at the threshold degree are chosen
    uniformly at random.
    """
    _check_fraction(p_z)
    n = g.n
    k = min(int(np.floor(p_z * n + 0.5)), n)
    # random permutation first, then a stable sort, gives uniform tie-breaking
    perm = rng.permutation(n)
    order = perm[np.argsort(-g.degrees[perm], kind="stable")]
    mask = np.zeros(n, dtype=bool)
    mask[order[:k]] = True
    return mask
