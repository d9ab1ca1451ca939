'''
core graph: power function, D_n, induced subgraphs, factors and the exhaustive interval scans
'''
import networkx as nx
import numpy as np
import pytest

from powergraph import (
    PowerGraph, DenseGraph, EdgeKind, Factor,
    q, qArray, powerExponent, buildDn, edgeKind, adjacent, induced, powerCliques, edges, edgeCount,
    adjacencyMatrix, toDense, bodyComponents, factorComponents, maximalVertex, closedFormMaximal,
    checkMaxOne, checkDiffq, checkMaxPower,
)


def _adjacentByDefinition(a, b):
    return a != b and (abs(a - b) == 1 or (a & -a) == (b & -b))


def _trialDivisionPower(i):
    p = 1
    while i % (2 * p) == 0:
        p *= 2
    return p


def test_power_values():
    assert [q(5), q(6), q(8), q(12)] == [1, 2, 8, 4]
    assert powerExponent(12) == 2
    assert powerExponent(7) == 0


def test_power_agrees_with_trial_division():
    labels = np.arange(1, 20001)
    expected = [_trialDivisionPower(int(i)) for i in labels]
    assert qArray(labels).tolist() == expected


@pytest.mark.slow
def test_power_agrees_with_divisibility_up_to_a_million():
    labels = np.arange(1, 10 ** 6 + 1, dtype=np.int64)
    expected = np.ones_like(labels)
    for k in range(1, 20):
        expected[labels % (2 ** k) == 0] = 2 ** k
    assert np.array_equal(qArray(labels), expected)


def test_power_rejects_bad_labels():
    with pytest.raises(ValueError):
        q(0)
    with pytest.raises(ValueError):
        q(-4)
    with pytest.raises(ValueError):
        q(2.0)
    with pytest.raises(OverflowError):
        q(2 ** 41)


def test_label_cap_travels_with_the_graph():
    with pytest.raises(OverflowError):
        PowerGraph((2 ** 41,))
    g = PowerGraph((3, 2 ** 41), labelMax=2 ** 50)
    assert g.labelMax == 2 ** 50
    assert q(2 ** 41, 2 ** 50) == 2 ** 41
    assert induced(g, (2 ** 41,)).labelMax == 2 ** 50
    with pytest.raises(OverflowError):
        buildDn(5, labelMax=4)
    assert buildDn(4, labelMax=4).labels == (1, 2, 3, 4)
    with pytest.raises(ValueError):
        PowerGraph((1,), labelMax=2 ** 63)


def test_d16_power_cliques_and_edges():
    g = buildDn(16)
    cliques = powerCliques(g)
    assert cliques[0] == (1, 3, 5, 7, 9, 11, 13, 15)
    assert cliques[1] == (2, 6, 10, 14)
    assert cliques[2] == (4, 12)
    assert cliques[3] == (8,)
    assert cliques[4] == (16,)
    assert edgeCount(g) == 50
    assert len(edges(g)) == 50


def test_edge_count_matches_pairwise_enumeration():
    for n in range(1, 41):
        reference = nx.Graph()
        reference.add_nodes_from(range(1, n + 1))
        reference.add_edges_from((a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if _adjacentByDefinition(a, b))
        assert edgeCount(buildDn(n)) == reference.number_of_edges()


def test_build_dn_needs_positive_n():
    with pytest.raises(ValueError):
        buildDn(0)
    assert buildDn(1).labels == (1,)
    assert edgeCount(buildDn(1)) == 0


def test_induced_subgraph_edges():
    sub = induced(buildDn(16), [9, 5, 8, 6])
    assert sub.labels == (5, 6, 8, 9)
    assert edges(sub) == [(5, 6, EdgeKind.PATH), (5, 9, EdgeKind.CLIQUE), (8, 9, EdgeKind.PATH)]


def test_induced_rejects_foreign_labels():
    with pytest.raises(ValueError):
        induced(buildDn(4), [2, 5])


def test_edge_kind():
    g = buildDn(16)
    assert edgeKind(g, 3, 4) == EdgeKind.PATH
    assert edgeKind(g, 3, 7) == EdgeKind.CLIQUE
    assert edgeKind(g, 2, 4) is None
    assert adjacent(g, 6, 14)
    assert not adjacent(g, 4, 8)
    with pytest.raises(ValueError):
        edgeKind(g, 1, 17)


def test_power_graph_labels():
    with pytest.raises(ValueError):
        PowerGraph((3, 2))
    with pytest.raises(ValueError):
        PowerGraph((2, 2))
    g = PowerGraph.fromLabels([3, 2, 3])
    assert g.labels == (2, 3)
    assert 3 in g and 4 not in g
    assert g.index(3) == 1
    with pytest.raises(ValueError):
        g.index(4)
    assert buildDn(5).isFull and not g.isFull


def test_adjacency_matrix_follows_given_order():
    adj = adjacencyMatrix([4, 1, 3])
    assert adj.tolist() == [[False, False, True], [False, False, True], [True, True, False]]


def test_dense_graph_checks():
    with pytest.raises(ValueError):
        DenseGraph(np.array([[False, True], [False, False]]))
    with pytest.raises(ValueError):
        DenseGraph(np.eye(2, dtype=bool))
    d = toDense(buildDn(4))
    assert d.labels == (1, 2, 3, 4)
    assert d.edgeCount() == edgeCount(buildDn(4)) == 4
    triangle = DenseGraph.fromEdges([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
    assert triangle.degrees.tolist() == [2, 2, 2]


def test_body_and_factor_components():
    assert bodyComponents([1, 2, 4, 6, 7]) == [(1, 2), (4, 4), (6, 7)]
    assert bodyComponents([]) == []
    g = PowerGraph((1, 2, 3, 5, 8, 9))
    assert factorComponents(g) == [Factor(1, 3), Factor(5, 5), Factor(8, 9)]


def test_maximal_vertex():
    f = Factor(5, 9)
    assert maximalVertex(f) == (8, 5, 3)
    assert f.length == 5
    assert maximalVertex(Factor(7, 7)) == (7, 7, 0)
    with pytest.raises(ValueError):
        Factor(9, 5)


def test_closed_form_maximal_matches_scan():
    for a in range(1, 300):
        for b in range(a, a + 40):
            labels = list(range(a, b + 1))
            assert closedFormMaximal(a, b) == max(labels, key=lambda v: v & -v)


def test_interval_scans_pass():
    maxone = checkMaxOne(512, 32)
    assert maxone.passed and maxone.violations == []
    assert maxone.tightest['slack'] >= 1
    diffq = checkDiffq(512, 32)
    assert diffq.passed and diffq.tightest['slack'] > 0
    maxpower = checkMaxPower(512, 32)
    assert maxpower.passed
    assert maxpower.checked > 0


@pytest.mark.slow
def test_interval_scans_pass_at_full_scale():
    for check in (checkMaxOne, checkDiffq, checkMaxPower):
        report = check(4096, 64)
        assert report.passed, report.violations
        assert report.violations == []
