from numpy.lib.stride_tricks import sliding_window_view
from dataclasses import dataclass, field
from utils import LemmaReport
from bisect import bisect_left
from enum import Enum
import numpy as np
import tqdm

# default label cap (Config.labelMax); graphs carry their own cap
LABEL_MAX = 2 ** 40
# every power must fit in int64
LABEL_CEILING = 2 ** 62


def _checkLabel(i, labelMax=LABEL_MAX):
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
        raise ValueError('labels must be integers but got: ' + repr(i))
    i = int(i)
    if i < 1:
        raise ValueError('labels must be positive integers but got: ' + str(i))
    if i > labelMax:
        raise OverflowError('label ' + str(i) + ' exceeds the configured maximum ' + str(labelMax))
    return i


def _checkLabelMax(labelMax):
    if not 1 <= labelMax <= LABEL_CEILING:
        raise ValueError('labelMax must lie in [1, 2^62] but was ' + str(labelMax))
    return int(labelMax)


def _power(i):
    return i & -i


def q(i, labelMax=LABEL_MAX):
    '''
    power of i: the largest power of two dividing i
    :param i: int >= 1
    :param labelMax: largest accepted label
    :return: int, a power of two
    '''
    i = _checkLabel(i, labelMax)
    return _power(i)


def powerExponent(i, labelMax=LABEL_MAX):
    '''
    :return: k such that q(i) = 2^k
    '''
    return q(i, labelMax).bit_length() - 1


def qArray(labels):
    '''
    vectorized power function
    :param labels: int array of positive labels
    :return: int64 array, q of every entry
    '''
    labels = np.asarray(labels, dtype=np.int64)
    return labels & -labels


class EdgeKind(Enum):
    PATH = 'path'
    CLIQUE = 'clique'


@dataclass(frozen=True)
class PowerGraph:
    '''
    a member of the class D: a set of integer labels read inside some D_n.
    adjacency is derived from the labels: a ~ b iff |a - b| = 1 or (a != b and q(a) = q(b))
    labels: strictly increasing tuple of positive ints
    labelMax: largest accepted label, not part of equality
    '''
    labels: tuple = ()
    labelMax: int = field(default=LABEL_MAX, compare=False, repr=False)

    def __post_init__(self):
        labelMax = _checkLabelMax(self.labelMax)
        labels = tuple(_checkLabel(x, labelMax) for x in self.labels)
        for a, b in zip(labels, labels[1:]):
            if a >= b:
                raise ValueError('labels must be strictly increasing, got ' + str(a) + ' before ' + str(b))
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'labelMax', labelMax)

    @staticmethod
    def fromLabels(labels, labelMax=LABEL_MAX):
        '''
        build a power graph from any iterable of labels (order and repetitions are ignored)
        '''
        return PowerGraph(tuple(sorted(set(_checkLabel(x, labelMax) for x in labels))), labelMax)

    @property
    def order(self):
        return len(self.labels)

    @property
    def labelArray(self):
        return np.array(self.labels, dtype=np.int64)

    @property
    def isFull(self):
        '''
        True iff this is D_n itself (labels 1..n)
        '''
        return len(self.labels) == 0 or self.labels[-1] == len(self.labels)

    @property
    def maxLabel(self):
        return self.labels[-1] if self.labels else 0

    def index(self, label):
        '''
        rank of a label in the canonical (increasing) vertex order
        '''
        i = bisect_left(self.labels, label)
        if i >= len(self.labels) or self.labels[i] != label:
            raise ValueError('label ' + str(label) + ' is not a vertex of the graph')
        return i

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        try:
            self.index(label)
        except (ValueError, TypeError):
            return False
        return True


def buildDn(n, labelMax=LABEL_MAX):
    '''
    the graph D_n: body path 1..n plus one clique per power
    :param n: int >= 1
    :param labelMax: largest accepted label, n included
    :return: PowerGraph with labels 1..n
    '''
    if n < 1:
        raise ValueError('D_n needs n >= 1 but got ' + str(n))
    _checkLabel(n, labelMax)
    return PowerGraph(tuple(range(1, n + 1)), labelMax)


def edgeKind(g, a, b):
    '''
    kind of the edge between two vertices of g
    :return: EdgeKind.PATH, EdgeKind.CLIQUE or None when a and b are not adjacent
    '''
    if a not in g:
        raise ValueError('label ' + str(a) + ' is not a vertex of the graph')
    if b not in g:
        raise ValueError('label ' + str(b) + ' is not a vertex of the graph')
    if abs(a - b) == 1:
        return EdgeKind.PATH
    if a != b and _power(a) == _power(b):
        return EdgeKind.CLIQUE
    return None


def adjacent(g, a, b):
    return edgeKind(g, a, b) is not None


def induced(g, subset):
    '''
    induced subgraph on a subset of the labels of g
    '''
    sub = PowerGraph.fromLabels(subset, g.labelMax)
    for label in sub.labels:
        if label not in g:
            raise ValueError('label ' + str(label) + ' is not a vertex of the graph')
    return sub


def powerCliques(g):
    '''
    group the vertices of g by power
    :return: dict exponent k -> tuple of labels with q = 2^k, ordered by k
    '''
    cliques = {}
    for label in g.labels:
        cliques.setdefault(_power(label).bit_length() - 1, []).append(label)
    return {k: tuple(cliques[k]) for k in sorted(cliques)}


def edges(g):
    '''
    every edge of g as (a, b, kind) with a < b, lexicographically ordered
    '''
    out = []
    members = set(g.labels)
    byPower = powerCliques(g)
    for a in g.labels:
        if a + 1 in members:
            out.append((a, a + 1, EdgeKind.PATH))
        for b in byPower[_power(a).bit_length() - 1]:
            if b > a:
                out.append((a, b, EdgeKind.CLIQUE))
    out.sort(key=lambda e: (e[0], e[1]))
    return out


def edgeCount(g):
    '''
    |E(P)| + sum over power cliques of C(|Q|, 2); path and clique edges never coincide
    '''
    lab = g.labelArray
    pathEdges = int(np.count_nonzero(np.diff(lab) == 1)) if len(lab) > 1 else 0
    cliqueEdges = sum(len(c) * (len(c) - 1) // 2 for c in powerCliques(g).values())
    return pathEdges + cliqueEdges


def adjacencyMatrix(labels):
    '''
    derived adjacency of an arbitrary sequence of distinct labels, in the given order
    :param labels: int array [n]
    :return: bool array [n, n]
    '''
    lab = np.asarray(labels, dtype=np.int64).reshape(-1)
    powers = qArray(lab)
    adj = (np.abs(lab[:, None] - lab[None, :]) == 1) | (powers[:, None] == powers[None, :])
    np.fill_diagonal(adj, False)
    return adj


@dataclass(eq=False)
class DenseGraph:
    '''
    label free graph given by a symmetric irreflexive adjacency matrix.
    labels only name the vertices (row i is vertex labels[i]); they carry no adjacency meaning
    '''
    adjacency: np.ndarray
    labels: tuple = None

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=bool)
        assert adj.ndim == 2 and adj.shape[0] == adj.shape[1]
        if not np.array_equal(adj, adj.T):
            raise ValueError('adjacency matrix must be symmetric')
        if np.any(np.diagonal(adj)):
            raise ValueError('adjacency matrix must have a false diagonal')
        adj.setflags(write=False)
        self.adjacency = adj
        if self.labels is None:
            self.labels = tuple(range(adj.shape[0]))
        self.labels = tuple(int(x) for x in self.labels)
        if len(self.labels) != adj.shape[0] or len(set(self.labels)) != len(self.labels):
            raise ValueError('dense graph needs one distinct label per vertex')

    @property
    def order(self):
        return self.adjacency.shape[0]

    @property
    def degrees(self):
        return self.adjacency.sum(axis=1)

    def edgeCount(self):
        return int(self.adjacency.sum()) // 2

    @staticmethod
    def fromEdges(labels, edgeList):
        '''
        :param labels: vertex names
        :param edgeList: iterable of (a, b) label pairs
        '''
        labels = tuple(labels)
        rank = {label: i for i, label in enumerate(labels)}
        adj = np.zeros([len(labels), len(labels)], dtype=bool)
        for a, b in edgeList:
            if a not in rank or b not in rank:
                raise ValueError('edge (' + str(a) + ', ' + str(b) + ') uses an unknown vertex')
            if a == b:
                raise ValueError('self loop on vertex ' + str(a))
            adj[rank[a], rank[b]] = True
            adj[rank[b], rank[a]] = True
        return DenseGraph(adj, labels)


def toDense(g):
    '''
    label order is the vertex order
    :param g: PowerGraph
    :return: DenseGraph
    '''
    return DenseGraph(adjacencyMatrix(g.labelArray), g.labels)


def asDense(graph):
    if isinstance(graph, DenseGraph):
        return graph
    if isinstance(graph, PowerGraph):
        return toDense(graph)
    raise ValueError('expected a PowerGraph or a DenseGraph but got ' + type(graph).__name__)


def closedFormMaximal(a, b):
    '''
    the vertex of [a, b] with the largest power: clear the bits of b below the highest bit where a - 1 and b differ
    '''
    return b & (-1 << (((a - 1) ^ b).bit_length() - 1))


@dataclass(frozen=True)
class Factor:
    '''
    interval-induced piece [start, end] of a power graph
    '''
    start: int
    end: int
    m: int = field(init=False)

    def __post_init__(self):
        _checkLabel(self.start, LABEL_CEILING)
        _checkLabel(self.end, LABEL_CEILING)
        if self.start > self.end:
            raise ValueError('empty factor [' + str(self.start) + ', ' + str(self.end) + ']')
        object.__setattr__(self, 'm', closedFormMaximal(self.start, self.end))

    @property
    def length(self):
        return self.end - self.start + 1

    @property
    def s(self):
        return self.start

    @property
    def offset(self):
        return self.m - self.start

    @property
    def labels(self):
        return tuple(range(self.start, self.end + 1))

    def __repr__(self):
        return 'Factor[' + str(self.start) + '..' + str(self.end) + ']'


def bodyComponents(labels):
    '''
    maximal runs of consecutive integers in a sorted label sequence
    :return: list of (first, last)
    '''
    lab = np.asarray(labels, dtype=np.int64)
    if len(lab) == 0:
        return []
    breaks = np.flatnonzero(np.diff(lab) != 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [len(lab) - 1]))
    return [(int(lab[s]), int(lab[e])) for s, e in zip(starts, ends)]


def factorComponents(g):
    '''
    the factor-components of g in increasing label order
    '''
    return [Factor(a, b) for a, b in bodyComponents(g.labelArray)]


def maximalVertex(f):
    '''
    unique vertex of the factor with the largest power
    :param f: Factor
    :return: (m, s, offset)
    '''
    return f.m, f.s, f.offset


def _intervalWindows(maxLabel, length):
    labels = np.arange(1, maxLabel + 1, dtype=np.int64)
    windows = sliding_window_view(labels, length)
    return windows, qArray(windows)


def checkMaxOne(maxLabel=4096, maxLength=64, maxViolations=20, progress=False):
    '''
    exhaustive scan: every interval [a, b] within [1, maxLabel] of length <= maxLength has exactly one
    vertex of maximal power, and it is the closed form maximal vertex used by Factor
    :return: LemmaReport, slack = exponent gap between the maximal vertex and the runner up
    '''
    report = LemmaReport('maxone', maxViolations=maxViolations,
                         parameters={'max_label': maxLabel, 'max_length': maxLength})
    for length in tqdm.tqdm(range(1, min(maxLength, maxLabel) + 1), disable=not progress):
        windows, powers = _intervalWindows(maxLabel, length)
        top = powers.max(axis=1)
        count = (powers == top[:, None]).sum(axis=1)
        scanned = windows[np.arange(len(windows)), powers.argmax(axis=1)]
        starts = windows[:, 0]
        ends = windows[:, -1]
        closed = ends & (-1 << (np.floor(np.log2((starts - 1) ^ ends)).astype(np.int64)))
        bad = np.flatnonzero((count != 1) | (scanned != closed))
        for r in bad:
            report.addViolation({'interval': [int(starts[r]), int(ends[r])], 'maximal_count': int(count[r])})
        report.checked += len(windows)
        if length > 1:
            runnerUp = np.sort(powers, axis=1)[:, -2]
            gap = np.log2(top).astype(np.int64) - np.log2(runnerUp).astype(np.int64)
            r = int(gap.argmin())
            report.offerTightest(int(gap[r]), {'interval': [int(starts[r]), int(ends[r])], 'm': int(scanned[r])})
    return report


def _nonMaximalScan(maxLabel, length):
    windows, powers = _intervalWindows(maxLabel, length)
    rows = np.arange(len(windows))
    m = windows[rows, powers.argmax(axis=1)]
    distance = np.abs(windows - m[:, None])
    nonMaximal = distance != 0
    return windows, powers, distance, nonMaximal


def checkDiffq(maxLabel=4096, maxLength=64, maxViolations=20, progress=False):
    '''
    exhaustive scan: in every factor of length L <= maxLength inside [1, maxLabel] each non maximal
    vertex v satisfies q(v) = q(|m - v|) and q(v) < L
    :return: LemmaReport, slack = log2(L) - log2(q(v)) minimized over non maximal vertices
    '''
    report = LemmaReport('diffq', maxViolations=maxViolations,
                         parameters={'max_label': maxLabel, 'max_length': maxLength})
    for length in tqdm.tqdm(range(2, min(maxLength, maxLabel) + 1), disable=not progress):
        windows, powers, distance, nonMaximal = _nonMaximalScan(maxLabel, length)
        distancePowers = distance & -distance
        bad = nonMaximal & ((powers != distancePowers) | (powers >= length))
        for r, col in zip(*np.nonzero(bad)):
            report.addViolation({'interval': [int(windows[r, 0]), int(windows[r, -1])], 'v': int(windows[r, col])})
        report.checked += int(nonMaximal.sum())
        slack = np.where(nonMaximal, np.log2(length) - np.log2(powers), np.inf)
        r, col = np.unravel_index(int(slack.argmin()), slack.shape)
        report.offerTightest(float(slack[r, col]), {'interval': [int(windows[r, 0]), int(windows[r, -1])], 'v': int(windows[r, col])})
    return report


def checkMaxPower(maxLabel=4096, maxLength=64, maxViolations=20, progress=False):
    '''
    exhaustive scan: in every factor of length L <= maxLength inside [1, maxLabel] a vertex with q >= L is the maximal vertex
    :return: LemmaReport, slack = log2(L) - log2(q(v)) minimized over non maximal vertices
    '''
    report = LemmaReport('maxpower', maxViolations=maxViolations,
                         parameters={'max_label': maxLabel, 'max_length': maxLength})
    for length in tqdm.tqdm(range(2, min(maxLength, maxLabel) + 1), disable=not progress):
        windows, powers, distance, nonMaximal = _nonMaximalScan(maxLabel, length)
        bad = nonMaximal & (powers >= length)
        for r, col in zip(*np.nonzero(bad)):
            report.addViolation({'interval': [int(windows[r, 0]), int(windows[r, -1])], 'v': int(windows[r, col])})
        report.checked += len(windows)
        slack = np.where(nonMaximal, np.log2(length) - np.log2(powers), np.inf)
        r, col = np.unravel_index(int(slack.argmin()), slack.shape)
        report.offerTightest(float(slack[r, col]), {'interval': [int(windows[r, 0]), int(windows[r, -1])], 'v': int(windows[r, col])})
    return report
