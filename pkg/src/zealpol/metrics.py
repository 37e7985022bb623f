"""Opinion balance, state assortativity and correlated polarization.

States are the three categories -1, 0, +1; the mixing matrix is indexed in
that order.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .graph import Graph

__all__ = [
    "DegenerateGraphError",
    "PolarizationSummary",
    "fraction_negative",
    "balance_R",
    "mixing_matrix",
    "assortativity_r",
    "correlated_polarization",
]

STATES = (-1, 0, 1)


class DegenerateGraphError(ValueError):
    """The graph has no edges, so assortativity is undefined."""


@dataclass(frozen=True)
class PolarizationSummary:
    n_minus: float
    n_zero: float
    n_plus: float
    R: float
    r: float
    phi: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def fraction_negative(s: np.ndarray) -> float:
    """Fraction of all vertices (neutral ones included) in state -1."""
    s = np.asarray(s)
    return float(np.count_nonzero(s == -1)) / len(s)


def balance_R(s: np.ndarray) -> float:
    return 1.0 - 2.0 * abs(fraction_negative(s) - 0.5)


def _mixing_counts(g: Graph, s: np.ndarray) -> np.ndarray:
    if g.m == 0:
        raise DegenerateGraphError("mixing matrix needs at least one edge")
    s = np.asarray(s, dtype=np.int64)
    code = 3 * (s[g.sources] + 1) + (s[g.indices] + 1)
    return np.bincount(code, minlength=9).reshape(3, 3)


def mixing_matrix(g: Graph, s: np.ndarray) -> np.ndarray:
    """3x3 matrix ``e[x, y]``: fraction of ordered adjacent pairs in states
    ``(x, y)``, rows and columns ordered -1, 0, +1."""
    return _mixing_counts(g, s) / (2.0 * g.m)


def assortativity_r(g: Graph, s: np.ndarray) -> float:
    """Categorical assortativity of the vertex states.

    Defined as 0 when every edge end carries the same state, where the usual
    formula is 0/0.
    """
    counts = _mixing_counts(g, s)
    a = counts.sum(axis=1)
    if np.count_nonzero(a) <= 1:
        return 0.0
    e = counts / (2.0 * g.m)
    a = a / (2.0 * g.m)
    sum_a2 = float(a @ a)
    return (float(np.trace(e)) - sum_a2) / (1.0 - sum_a2)


def correlated_polarization(g: Graph, s: np.ndarray) -> PolarizationSummary:
    s = np.asarray(s)
    n = len(s)
    n_minus = np.count_nonzero(s == -1) / n
    n_zero = np.count_nonzero(s == 0) / n
    n_plus = np.count_nonzero(s == 1) / n
    R = balance_R(s)
    r = assortativity_r(g, s)
    return PolarizationSummary(
        n_minus=float(n_minus),
        n_zero=float(n_zero),
        n_plus=float(n_plus),
        R=R,
        r=r,
        phi=R * r,
    )
