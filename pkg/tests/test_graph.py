import io
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from oracles import bfs_reach, dense_from_edges, perfect_matchings
from zealpol.graph import (
    EdgeListError,
    Graph,
    ParameterError,
    configuration_model,
    fix_parity,
    largest_component,
    load_edge_list,
    sample_poisson_degrees,
    sample_powerlaw_degrees,
    write_edge_list,
)


def assert_simple(g: Graph):
    a = g.to_dense()
    assert (a == a.T).all()
    assert not np.diag(a).any()
    for i in range(g.n):
        nb = g.neighbors(i)
        assert len(np.unique(nb)) == len(nb)
    assert g.degrees.sum() == 2 * g.m


edge_lists = st.integers(1, 12).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=40),
    )
)


@given(edge_lists)
def test_from_edges_is_simple_and_matches_dense(data):
    n, edges = data
    g = Graph.from_edges(n, edges)
    assert_simple(g)
    np.testing.assert_array_equal(g.to_dense(), dense_from_edges(n, edges))


def test_graph_arrays_are_read_only(triangle):
    with pytest.raises(ValueError):
        triangle.indices[0] = 2


# --- Poisson degrees -------------------------------------------------------


def test_poisson_mean(rng):
    seq = sample_poisson_degrees(5000, 4, rng)
    assert len(seq) == 5000
    assert abs(seq.mean() - 4) < 3 * np.sqrt(4 / 5000)


def test_poisson_tiny_mean(rng):
    assert list(sample_poisson_degrees(1, 0.0001, rng)) == [0]


def test_poisson_variance(rng):
    seq = sample_poisson_degrees(10_000, 10, rng)
    assert abs(seq.var(ddof=1) - 10) < 1.0


def test_poisson_chi_square(rng):
    c, n = 4.0, 20_000
    seq = sample_poisson_degrees(n, c, rng)
    # bins 0..K-1 plus a pooled tail, each with expected count >= 5
    K = 12
    expected = n * np.append(stats.poisson.pmf(np.arange(K), c), stats.poisson.sf(K - 1, c))
    observed = np.append(np.bincount(np.minimum(seq, K), minlength=K + 1)[:K],
                         np.count_nonzero(seq >= K))
    assert expected.min() >= 5
    _, p = stats.chisquare(observed, expected)
    assert p > 0.001


@pytest.mark.parametrize("n,c", [(0, 4.0), (10, 0.0), (10, -1.0)])
def test_poisson_rejects_bad_parameters(rng, n, c):
    with pytest.raises(ParameterError):
        sample_poisson_degrees(n, c, rng)


# --- power-law degrees ------------------------------------------------------


def test_powerlaw_support(rng):
    seqs = [sample_powerlaw_degrees(5000, 2.5, 2, rng) for _ in range(5)]
    assert all(s.min() >= 2 for s in seqs)
    assert min(s.min() for s in seqs) == 2
    assert all(s.max() <= 4999 for s in seqs)


def test_powerlaw_mean_matches_normalization_sum(rng):
    n, alpha, k_min = 5000, 3.5, 2
    num = sum(k * k ** -alpha for k in range(k_min, n))
    den = sum(k ** -alpha for k in range(k_min, n))
    seq = sample_powerlaw_degrees(n, alpha, k_min, rng)
    assert abs(seq.mean() / (num / den) - 1) < 0.05


def test_powerlaw_small_support_frequencies(rng):
    # k in {1, 2, 3}: exact probabilities are proportional to 1, 2^-2, 3^-2
    seq = sample_powerlaw_degrees(4, 2.0, 1, rng)
    assert set(seq) <= {1, 2, 3}
    draws = np.concatenate([sample_powerlaw_degrees(4, 2.0, 1, rng) for _ in range(5000)])
    w = np.array([1.0, 1 / 4, 1 / 9])
    expected = len(draws) * w / w.sum()
    _, p = stats.chisquare(np.bincount(draws, minlength=4)[1:], expected)
    assert p > 0.001


def test_powerlaw_heavier_tail_for_smaller_alpha(rng):
    heavy = [sample_powerlaw_degrees(5000, 2.1, 2, rng).max() for _ in range(20)]
    light = [sample_powerlaw_degrees(5000, 3.5, 2, rng).max() for _ in range(20)]
    assert np.median(heavy) > np.median(light)
    assert stats.mannwhitneyu(heavy, light, alternative="greater").pvalue < 0.001


@pytest.mark.parametrize("alpha,k_min", [(1.0, 2), (0.5, 2), (2.5, 0)])
def test_powerlaw_rejects_bad_parameters(rng, alpha, k_min):
    with pytest.raises(ParameterError):
        sample_powerlaw_degrees(100, alpha, k_min, rng)


# --- parity -----------------------------------------------------------------


def test_fix_parity_even_untouched(rng):
    assert list(fix_parity([1, 1], rng)) == [1, 1]
    assert list(fix_parity([0, 0], rng)) == [0, 0]


def test_fix_parity_odd(rng):
    out = fix_parity([1, 1, 1], rng)
    assert out.sum() == 4
    assert sorted(out) == [1, 1, 2]


def test_fix_parity_does_not_mutate_input(rng):
    seq = np.array([1, 2, 2])
    fix_parity(seq, rng)
    assert list(seq) == [1, 2, 2]


# --- configuration model ----------------------------------------------------


def test_configuration_model_single_edge(rng):
    g = configuration_model([1, 1], rng)
    assert g.n == 2 and g.m == 1
    assert list(g.neighbors(0)) == [1]


def test_configuration_model_triangle_probability(rng):
    # Enumerate the 15 pairings of stubs [0,0,1,1,2,2]; a triangle results
    # when no vertex is paired with itself.
    owners = [0, 0, 1, 1, 2, 2]
    matchings = list(perfect_matchings(list(range(6))))
    tri = sum(all(owners[a] != owners[b] for a, b in mt) for mt in matchings)
    p_tri = Fraction(tri, len(matchings))
    assert p_tri == Fraction(8, 15)

    trials = 6000
    hits = 0
    for _ in range(trials):
        g = configuration_model([2, 2, 2], rng)
        assert_simple(g)
        hits += g.m == 3
    sigma = np.sqrt(trials * float(p_tri) * (1 - float(p_tri)))
    assert abs(hits - trials * float(p_tri)) < 5 * sigma


def test_configuration_model_rejects_odd(rng):
    with pytest.raises(ValueError):
        configuration_model([1, 1, 1], rng)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=30), st.integers(0, 2**32 - 1))
def test_configuration_model_erasure_only_removes(seq, seed):
    rng = np.random.default_rng(seed)
    seq = fix_parity(seq, rng)
    g = configuration_model(seq, rng)
    assert_simple(g)
    assert (g.degrees <= seq).all()


@given(st.lists(st.integers(0, 1), min_size=2, max_size=40), st.integers(0, 2**32 - 1))
def test_configuration_model_preserves_matching_sequences(seq, seed):
    rng = np.random.default_rng(seed)
    seq = np.array(seq)
    if seq.sum() % 2:
        seq[np.flatnonzero(seq)[0]] = 0
    g = configuration_model(seq, rng)
    np.testing.assert_array_equal(g.degrees, seq)


# --- largest component ------------------------------------------------------


def test_largest_component_drops_isolated():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2)])
    lc, mapping = largest_component(g)
    assert lc.n == 3 and lc.m == 3
    assert list(mapping) == [0, 1, 2]


def test_largest_component_tie_takes_smallest_id():
    g = Graph.from_edges(4, [(2, 3), (0, 1)])
    lc, mapping = largest_component(g)
    assert list(mapping) == [0, 1]
    assert lc.m == 1


def test_largest_component_relabels():
    g = Graph.from_edges(6, [(5, 3), (3, 1), (0, 2)])
    lc, mapping = largest_component(g)
    assert list(mapping) == [1, 3, 5]
    assert sorted(map(tuple, lc.edges())) == [(0, 1), (1, 2)]


def test_largest_component_connected_graph_is_identity(triangle):
    lc, mapping = largest_component(triangle)
    assert lc == triangle
    assert list(mapping) == [0, 1, 2]


def test_largest_component_empty():
    lc, mapping = largest_component(Graph.empty(0))
    assert lc.n == 0 and len(mapping) == 0


@settings(max_examples=50)
@given(edge_lists)
def test_largest_component_is_connected_and_maximal(data):
    n, edges = data
    g = Graph.from_edges(n, edges)
    lc, mapping = largest_component(g)
    a = g.to_dense()
    sizes = [len(bfs_reach(a, v)) for v in range(n)]
    assert lc.n == max(sizes)
    assert len(bfs_reach(lc.to_dense(), 0)) == lc.n
    assert set(mapping.tolist()) == bfs_reach(a, int(mapping[0]))
    np.testing.assert_array_equal(lc.to_dense(), a[np.ix_(mapping, mapping)])


# --- edge lists ---------------------------------------------------------------


def test_load_path():
    g, labels = load_edge_list("0 1\n1 2\n")
    assert (g.n, g.m) == (3, 2)
    assert labels == ["0", "1", "2"]


def test_load_dedup():
    g, labels = load_edge_list("a b\nb a\n")
    assert (g.n, g.m) == (2, 1)
    assert labels == ["a", "b"]


def test_load_comment_and_self_loop():
    g, labels = load_edge_list("# comment\n0 0\n0 1\n")
    assert (g.n, g.m) == (2, 1)
    assert list(g.neighbors(0)) == [1]


def test_load_percent_comment_and_blank_lines():
    g, _ = load_edge_list("% header\n\nx y\n  \ny z\n")
    assert (g.n, g.m) == (3, 2)


@pytest.mark.parametrize("text,lineno", [("0 1\n2\n", 2), ("0 1 2\n", 1), ("# c\n0 1\n1 2 x\n", 3)])
def test_load_malformed_reports_line(text, lineno):
    with pytest.raises(EdgeListError) as info:
        load_edge_list(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_write_load_round_trip(rng):
    seq = fix_parity(sample_poisson_degrees(500, 4, rng), rng)
    g, _ = largest_component(configuration_model(seq, rng))
    buf = io.StringIO()
    write_edge_list(g, buf)
    h, labels = load_edge_list(buf.getvalue())
    ids = np.array([int(x) for x in labels])
    assert h.n == g.n and h.m == g.m
    np.testing.assert_array_equal(h.to_dense(), g.to_dense()[np.ix_(ids, ids)])
