"""Undirected simple graphs in compressed adjacency form, and their generators.

Graphs are built once and never mutated: the offset and neighbor arrays are
flagged read-only so a single instance can be shared by many realizations.
"""

from __future__ import annotations

import io
from functools import cached_property
from typing import Iterable, TextIO

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

__all__ = [
    "Graph",
    "ParameterError",
    "EdgeListError",
    "sample_poisson_degrees",
    "sample_powerlaw_degrees",
    "fix_parity",
    "configuration_model",
    "largest_component",
    "load_edge_list",
    "write_edge_list",
]


class ParameterError(ValueError):
    """Raised when a generator or seeding routine gets an invalid parameter."""


class EdgeListError(ValueError):
    """Raised for a malformed edge-list line."""

    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``.

    Parameters
    ----------
    indptr : array of int, shape (n + 1,)
        Offsets into ``indices``; neighbors of ``i`` are
        ``indices[indptr[i]:indptr[i + 1]]``, sorted ascending.
    indices : array of int, shape (2m,)
        Concatenated neighbor lists.

    Use :meth:`from_edges` rather than calling the constructor directly
    unless the arrays are already symmetric, sorted and loop-free.
    """

    def __init__(self, indptr: np.ndarray, indices: np.ndarray):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] | np.ndarray) -> "Graph":
        """Build a graph from an edge array, dropping self-loops and repeats."""
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint outside 0..n-1")
        e = e[e[:, 0] != e[:, 1]]
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        if src.size:
            key = np.unique(src * n + dst)
            src, dst = np.divmod(key, n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst)

    @classmethod
    def empty(cls, n: int = 0) -> "Graph":
        return cls(np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.flags.writeable = False
        return d

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @cached_property
    def sources(self) -> np.ndarray:
        """Row index of every entry of ``indices`` (one per directed edge-end)."""
        s = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        s.flags.writeable = False
        return s

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        """0/1 adjacency as a scipy CSR matrix (int8 entries)."""
        data = np.ones(len(self.indices), dtype=np.int8)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def edges(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` array with ``u < v``, sorted lexicographically."""
        mask = self.sources < self.indices
        return np.column_stack([self.sources[mask], self.indices[mask]])

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        a[self.sources, self.indices] = 1
        return a

    def subgraph(self, vertices: np.ndarray) -> "Graph":
        """Induced subgraph on ``vertices``, relabeled by position in that array."""
        vertices = np.asarray(vertices, dtype=np.int64)
        relabel = np.full(self.n, -1, dtype=np.int64)
        relabel[vertices] = np.arange(len(vertices))
        e = self.edges()
        e = relabel[e]
        e = e[(e >= 0).all(axis=1)]
        return Graph.from_edges(len(vertices), e)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.indptr, other.indptr) and np.array_equal(
            self.indices, other.indices
        )

    def __hash__(self):
        return hash((self.indptr.tobytes(), self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def sample_poisson_degrees(n: int, c: float, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` iid Poisson(``c``) degrees. Parity is left as drawn."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if not c > 0:
        raise ParameterError(f"mean degree c must be > 0, got {c}")
    return rng.poisson(c, size=n).astype(np.int64)


def powerlaw_pmf(alpha: float, k_min: int, k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Support and normalized mass of ``p(k) ~ k**-alpha`` on ``k_min..k_max``."""
    k = np.arange(k_min, k_max + 1, dtype=np.int64)
    w = k.astype(float) ** -alpha
    return k, w / w.sum()


def sample_powerlaw_degrees(
    n: int, alpha: float, k_min: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``n`` iid degrees from a discrete power law truncated at ``n - 1``.

    Sampling is by inverse transform on the exact normalized CDF.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if not alpha > 1:
        raise ParameterError(f"alpha must be > 1, got {alpha}")
    if k_min < 1:
        raise ParameterError(f"k_min must be >= 1, got {k_min}")
    k_max = n - 1
    if k_max < k_min:
        raise ParameterError(f"k_min={k_min} exceeds the cutoff n-1={k_max}")
    k, p = powerlaw_pmf(alpha, k_min, k_max)
    cdf = np.cumsum(p)
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    np.minimum(idx, len(k) - 1, out=idx)
    return k[idx]


def fix_parity(seq: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Return a copy of ``seq`` whose sum is even.

    An odd total is repaired by adding one stub to a uniformly chosen vertex.
    """
    out = np.array(seq, dtype=np.int64, copy=True)
    if out.sum() % 2:
        out[rng.integers(len(out))] += 1
    return out


def configuration_model(seq: np.ndarray, rng: np.random.Generator) -> Graph:
    """Erased configuration model: uniform stub matching, then loops and
    multi-edges are removed, so realized degrees never exceed ``seq``."""
    seq = np.asarray(seq, dtype=np.int64)
    if seq.size and seq.min() < 0:
        raise ParameterError("degrees must be non-negative")
    if seq.sum() % 2:
        raise ValueError(f"stub count {seq.sum()} is odd; call fix_parity first")
    stubs = np.repeat(np.arange(len(seq), dtype=np.int64), seq)
    rng.shuffle(stubs)
    return Graph.from_edges(len(seq), stubs.reshape(-1, 2))


def largest_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Largest connected component, relabeled to ``0..n'-1``.

    Returns the subgraph and ``mapping`` with ``mapping[new] = old``
    (ascending in ``old``). Equal-size components are resolved in favor of
    the one holding the smallest vertex id.
    """
    if g.n == 0:
        return Graph.empty(0), np.zeros(0, dtype=np.int64)
    ncomp, labels = csgraph.connected_components(g.adjacency, directed=False)
    sizes = np.bincount(labels, minlength=ncomp)
    first = np.full(ncomp, g.n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(g.n))
    best = min(range(ncomp), key=lambda c: (-sizes[c], first[c]))
    mapping = np.flatnonzero(labels == best)
    if len(mapping) == g.n:
        return g, mapping
    return g.subgraph(mapping), mapping


def load_edge_list(source: str | TextIO) -> tuple[Graph, list[str]]:
    """Parse a whitespace-separated edge list.

    Labels are arbitrary tokens, mapped to dense ids in order of first
    appearance. Lines starting with ``#`` or ``%`` and blank lines are
    skipped; self-loops and repeated edges are dropped.

    Returns
    -------
    graph : Graph
    labels : list of str
        ``labels[i]`` is the token for vertex ``i``.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    ids: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListError(lineno, line, f"expected 2 tokens, got {len(tokens)}")
        u = ids.setdefault(tokens[0], len(ids))
        v = ids.setdefault(tokens[1], len(ids))
        pairs.append((u, v))
    return Graph.from_edges(len(ids), pairs), list(ids)


def write_edge_list(g: Graph, out: TextIO, labels: list[str] | None = None) -> None:
    """Write ``g`` in the format read by :func:`load_edge_list`."""
    for u, v in g.edges():
        if labels is None:
            out.write(f"{u} {v}\n")
        else:
            out.write(f"{labels[u]} {labels[v]}\n")
