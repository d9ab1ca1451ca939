from powergraph import LABEL_MAX, PowerGraph, DenseGraph, edges, edgeCount, powerCliques, adjacencyMatrix, EdgeKind, asDense
from utils import mkdir_p
import numpy as np
import pydot
import json
import os
import re

# one colour per power clique in DOT output, cycled
CLIQUE_COLORS = ['black', 'red', 'blue', 'darkgreen', 'orange', 'purple', 'brown', 'deeppink', 'cyan4', 'gold3']


def _cliqueColor(label):
    return CLIQUE_COLORS[((label & -label).bit_length() - 1) % len(CLIQUE_COLORS)]


def formatLabels(g):
    '''
    label list format: a single line of increasing labels separated by spaces
    '''
    return ' '.join(str(x) for x in g.labels)


def parseLabels(text, labelMax=LABEL_MAX):
    '''
    :param text: labels separated by commas and/or whitespace, any order
    :param labelMax: largest accepted label
    :return: PowerGraph
    '''
    tokens = [t for t in re.split(r'[\s,]+', text.strip()) if t]
    try:
        labels = [int(t) for t in tokens]
    except ValueError:
        raise ValueError('label list must contain integers only, got: ' + text.strip()[:80])
    if len(set(labels)) != len(labels):
        raise ValueError('label list contains repeated labels')
    return PowerGraph.fromLabels(labels, labelMax)


def _implicitIsolated(used, count):
    '''
    labels the edge list parser gives to isolated vertices: the smallest positive ints not used by any edge
    '''
    out = []
    label = 1
    while len(out) < count:
        if label not in used:
            out.append(label)
        label += 1
    return out


def formatEdgeList(graph):
    '''
    edge list format: header "n m", one "a b" line per edge (a < b, sorted), then one line per isolated
    vertex unless those are the smallest free labels
    :param graph: PowerGraph or DenseGraph
    '''
    if isinstance(graph, PowerGraph):
        pairs = [(a, b) for a, b, _ in edges(graph)]
        labels = graph.labels
        m = edgeCount(graph)
    else:
        dense = asDense(graph)
        rows, cols = np.nonzero(np.triu(dense.adjacency))
        pairs = sorted(tuple(sorted((dense.labels[r], dense.labels[c]))) for r, c in zip(rows, cols))
        labels = dense.labels
        m = len(pairs)
    used = {x for pair in pairs for x in pair}
    isolated = sorted(x for x in labels if x not in used)
    lines = [f'{len(labels)} {m}']
    lines += [f'{a} {b}' for a, b in pairs]
    if isolated != _implicitIsolated(used, len(isolated)):
        lines += [str(x) for x in isolated]
    return '\n'.join(lines)


def parseEdgeList(text):
    '''
    :return: DenseGraph, vertices in increasing label order
    '''
    lines = [line.split('#')[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise ValueError('empty edge list')
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError('edge list header must be "n m", got: ' + lines[0])
    n, m = int(header[0]), int(header[1])
    pairs = []
    labels = set()
    for line in lines[1:]:
        fields = [int(x) for x in line.split()]
        if len(fields) == 2:
            pairs.append(tuple(fields))
            labels.update(fields)
        elif len(fields) == 1:
            labels.add(fields[0])
        else:
            raise ValueError('edge list lines must be "a b" or "a", got: ' + line)
    if len(set(tuple(sorted(p)) for p in pairs)) != m:
        raise ValueError(f'edge list header announces {m} edges but {len(pairs)} were given')
    if len(labels) > n:
        raise ValueError(f'edge list header announces {n} vertices but {len(labels)} were used')
    labels |= set(_implicitIsolated(labels, n - len(labels)))
    return DenseGraph.fromEdges(sorted(labels), pairs)


def toPowerGraph(graph, labelMax=LABEL_MAX):
    '''
    read a graph as a member of D by its labels
    :raise ValueError: if the labels do not induce the given adjacency in some D_n
    '''
    if isinstance(graph, PowerGraph):
        return graph
    dense = asDense(graph)
    if any(x < 1 for x in dense.labels):
        raise ValueError('graph labels must be positive to be read as a power graph')
    g = PowerGraph.fromLabels(dense.labels, labelMax)
    order = np.argsort(np.array(dense.labels, dtype=np.int64))
    if not np.array_equal(adjacencyMatrix(g.labelArray), dense.adjacency[np.ix_(order, order)]):
        raise ValueError('edge list is not the induced subgraph of D_n on its labels')
    return g


def readGraphFile(path, labelMax=LABEL_MAX):
    '''
    a file holding a single line of positive labels is a label list, anything else an edge list.
    an empty file is the empty graph
    :return: PowerGraph or DenseGraph
    '''
    with open(path, 'r') as fp:
        text = fp.read()
    lines = [line.split('#')[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        return PowerGraph((), labelMax)
    if len(lines) == 1:
        tokens = [t for t in re.split(r'[\s,]+', lines[0]) if t]
        if all(t.isdigit() and int(t) >= 1 for t in tokens):
            return parseLabels(lines[0], labelMax)
    return parseEdgeList(text)


def formatDot(graph):
    '''
    graphviz output; a power graph gets one cluster per power clique and dashed clique edges
    '''
    dot = pydot.Dot('D', graph_type='graph')
    dot.set_node_defaults(shape='circle')
    if isinstance(graph, PowerGraph):
        for k, members in powerCliques(graph).items():
            cluster = pydot.Cluster(f'q{k}', label=f'q = {1 << k}', color=_cliqueColor(1 << k))
            for x in members:
                cluster.add_node(pydot.Node(str(x)))
            dot.add_subgraph(cluster)
        for a, b, kind in edges(graph):
            if kind == EdgeKind.PATH:
                dot.add_edge(pydot.Edge(str(a), str(b)))
            else:
                dot.add_edge(pydot.Edge(str(a), str(b), style='dashed', color=_cliqueColor(a)))
    else:
        dense = asDense(graph)
        for x in dense.labels:
            dot.add_node(pydot.Node(str(x)))
        rows, cols = np.nonzero(np.triu(dense.adjacency))
        for r, c in zip(rows, cols):
            dot.add_edge(pydot.Edge(str(dense.labels[r]), str(dense.labels[c])))
    return dot.to_string().rstrip('\n')


def dumpJson(obj):
    '''
    keys keep their insertion order so reports are byte identical across runs
    '''
    return json.dumps(obj, indent=2)


def writeOutput(text, path=None):
    '''
    print to stdout, or write to path (parent directories are created)
    '''
    if path is None:
        print(text)
        return
    parent = os.path.dirname(path)
    if parent:
        mkdir_p(parent)
    with open(path, 'w') as fp:
        fp.write(text + '\n')
