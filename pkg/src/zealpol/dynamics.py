"""Synchronous majority-rule dynamics with zealots."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

__all__ = ["RunOutcome", "local_field", "step", "run_to_equilibrium"]

STATE_DTYPE = np.int8


@dataclass(frozen=True)
class RunOutcome:
    """Result of one run of the dynamics.

    ``steps`` counts the updates that changed the state, so a configuration
    that is already fixed reports ``steps == 0``. When ``period_two`` is set,
    ``final_states`` is the earlier phase of the two-cycle.
    """

    final_states: np.ndarray
    converged: bool
    period_two: bool
    steps: int
    total_flips: int


def local_field(g: Graph, s: np.ndarray, i: int) -> int:
    """Own state plus the sum of neighbor states for vertex ``i``."""
    return int(s[i]) + int(np.sum(s[g.neighbors(i)], dtype=np.int64))


def fields(g: Graph, s: np.ndarray) -> np.ndarray:
    """Local field of every vertex at once."""
    s64 = s.astype(np.int64, copy=False)
    return s64 + g.adjacency @ s64


def step(g: Graph, s: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, int]:
    """One synchronous update. Returns the new states and the flip count.

    A zealot keeps its state unless that state is 0, in which case it
    updates like everyone else.
    """
    new = np.sign(fields(g, s)).astype(STATE_DTYPE)
    frozen = z & (s != 0)
    new[frozen] = s[frozen]
    return new, int(np.count_nonzero(new != s))


def run_to_equilibrium(
    g: Graph, s0: np.ndarray, z: np.ndarray, max_steps: int | None = None
) -> RunOutcome:
    """Iterate :func:`step` until a fixed point, a two-cycle, or ``max_steps``.

    ``max_steps`` bounds the number of updates applied and defaults to
    ``10 * n``. Flips from every applied update are counted, including the
    update that closes a detected cycle.
    """
    if max_steps is None:
        max_steps = max(10 * g.n, 1)
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    z = np.asarray(z, dtype=bool)
    cur = np.asarray(s0, dtype=STATE_DTYPE).copy()
    prev = None
    total = 0
    for applied in range(1, max_steps + 1):
        new, flips = step(g, cur, z)
        total += flips
        if flips == 0:
            return RunOutcome(cur, True, False, applied - 1, total)
        if prev is not None and np.array_equal(new, prev):
            return RunOutcome(cur, False, True, applied, total)
        prev, cur = cur, new
    return RunOutcome(cur, False, False, max_steps, total)
