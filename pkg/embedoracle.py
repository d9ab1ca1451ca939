from powergraph import PowerGraph, asDense, adjacencyMatrix, toDense, edgeCount
from dataclasses import dataclass, field
from enum import Enum
import numpy as np
import tqdm
import sys


class Provenance(Enum):
    CONSTRUCTED_PHI = 'CONSTRUCTED_PHI'
    CONSTRUCTED_LONGFACTOR = 'CONSTRUCTED_LONGFACTOR'
    ORACLE = 'ORACLE'


@dataclass(frozen=True)
class EmbeddingMap:
    '''
    injective vertex map from the labels of G to the labels of H
    pairs: tuple of (from, to) sorted by source label
    '''
    pairs: tuple
    provenance: Provenance

    def __post_init__(self):
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        sources = [a for a, _ in pairs]
        targets = [b for _, b in pairs]
        if len(set(sources)) != len(sources):
            raise ValueError('embedding maps a vertex twice')
        if len(set(targets)) != len(targets):
            raise ValueError('embedding is not injective')
        object.__setattr__(self, 'pairs', pairs)

    @staticmethod
    def fromMapping(mapping, provenance):
        return EmbeddingMap(tuple(mapping.items()), provenance)

    @property
    def mapping(self):
        return dict(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def toDict(self):
        return {'pairs': [[a, b] for a, b in self.pairs], 'provenance': self.provenance.value}

    @staticmethod
    def fromDict(dic):
        return EmbeddingMap(tuple((a, b) for a, b in dic['pairs']), Provenance(dic['provenance']))


@dataclass(frozen=True)
class SearchBudget:
    '''
    node_limit: maximum number of search tree nodes before the oracle answers INCONCLUSIVE
    '''
    nodeLimit: int = 1000000

    def __post_init__(self):
        if self.nodeLimit < 1:
            raise ValueError('node limit must be >= 1 but was ' + str(self.nodeLimit))


class OracleStatus(Enum):
    EMBEDS = 'EMBEDS'
    NOT_EMBEDS = 'NOT_EMBEDS'
    INCONCLUSIVE = 'INCONCLUSIVE'


@dataclass(frozen=True)
class OracleResult:
    status: OracleStatus
    embedding: EmbeddingMap = None
    nodes: int = 0

    def toDict(self):
        return {'status': self.status.value, 'nodes': self.nodes,
                'embedding': self.embedding.toDict() if self.embedding is not None else None}


def _searchOrder(adjacency):
    '''
    most constrained first: start from the highest degree vertex, then repeatedly take the vertex
    with the most already ordered neighbours (ties: higher degree, then lower index)
    '''
    n = adjacency.shape[0]
    degrees = adjacency.sum(axis=1)
    ordered = []
    placed = np.zeros(n, dtype=bool)
    links = np.zeros(n, dtype=np.int64)
    for _ in range(n):
        score = np.where(placed, -1, links * (n + 1) + degrees)
        v = int(score.argmax())
        ordered.append(v)
        placed[v] = True
        links += adjacency[v]
    return ordered


def inducedEmbeds(g, h, budget=None):
    '''
    is g an induced subgraph of h? backtracking over injective maps with degree and adjacency consistency pruning.
    NOT_EMBEDS is only returned after exhausting the search tree; running out of budget gives INCONCLUSIVE
    :param g: DenseGraph or PowerGraph
    :param h: DenseGraph or PowerGraph
    :param budget: SearchBudget
    :return: OracleResult, the embedding maps labels of g to labels of h
    '''
    budget = budget or SearchBudget()
    g = asDense(g)
    h = asDense(h)
    n, N = g.order, h.order
    if n == 0:
        return OracleResult(OracleStatus.EMBEDS, EmbeddingMap((), Provenance.ORACLE), 0)
    if n > N:
        return OracleResult(OracleStatus.NOT_EMBEDS, None, 0)

    adjG = g.adjacency
    adjH = h.adjacency
    degG = adjG.sum(axis=1)
    degH = adjH.sum(axis=1)
    # images keep at least the degree and the non degree of their source
    fits = (degH[None, :] >= degG[:, None]) & ((N - 1 - degH)[None, :] >= (n - 1 - degG)[:, None])
    order = _searchOrder(adjG)
    assignment = np.full(n, -1, dtype=np.int64)
    used = np.zeros(N, dtype=bool)
    nodes = 0

    def candidates(depth):
        u = order[depth]
        cand = np.flatnonzero(fits[u] & ~used)
        if depth > 0:
            mapped = order[:depth]
            cand = cand[np.all(adjH[np.ix_(cand, assignment[mapped])] == adjG[u, mapped][None, :], axis=1)]
        return cand

    # explicit stack of (candidate images, next position), one frame per mapped vertex
    stack = [[candidates(0), 0]]
    while stack:
        depth = len(stack) - 1
        u = order[depth]
        if assignment[u] >= 0:
            used[assignment[u]] = False
            assignment[u] = -1
        frame = stack[-1]
        cand, pos = frame
        if pos == len(cand):
            stack.pop()
            continue
        frame[1] = pos + 1
        nodes += 1
        if nodes > budget.nodeLimit:
            return OracleResult(OracleStatus.INCONCLUSIVE, None, budget.nodeLimit)
        x = int(cand[pos])
        assignment[u] = x
        used[x] = True
        if depth + 1 == n:
            break
        stack.append([candidates(depth + 1), 0])

    if not stack:
        return OracleResult(OracleStatus.NOT_EMBEDS, None, nodes)

    assert np.array_equal(adjG, adjH[np.ix_(assignment, assignment)])
    emap = EmbeddingMap(tuple((g.labels[i], h.labels[int(assignment[i])]) for i in range(n)), Provenance.ORACLE)
    return OracleResult(OracleStatus.EMBEDS, emap, nodes)


def verifyEmbedding(emap, g, h):
    '''
    True iff the map is injective, lands in h and preserves adjacency and non adjacency on every pair of g
    :param emap: EmbeddingMap defined on every label of g
    :param g: PowerGraph
    :param h: PowerGraph
    '''
    mapping = emap.mapping
    if set(mapping) != set(g.labels):
        raise ValueError('embedding must be defined exactly on the labels of the source graph')
    images = [mapping[a] for a in g.labels]
    if len(set(images)) != len(images):
        return False
    if any(b not in h for b in images):
        return False
    return bool(np.array_equal(adjacencyMatrix(g.labelArray), adjacencyMatrix(np.array(images, dtype=np.int64))))


@dataclass
class AntichainReport:
    '''
    family: pairwise incomparable induced subgraphs of D_n (one per isomorphism class)
    certificate: (i, j, status of family[i] into family[j], status of family[j] into family[i])
    exhaustive: False when the family search was cut by the budget or by maxSize, or some subgraph stayed unresolved
    classes: confirmed isomorphism classes; unresolved: representatives the oracle could not tell apart within budget
    '''
    n: int
    family: tuple
    certificate: list = field(default_factory=list)
    classes: int = 0
    inconclusive: int = 0
    exhaustive: bool = True
    unresolved: int = 0

    @property
    def size(self):
        return len(self.family)

    def toDict(self):
        return {'n': self.n, 'size': self.size, 'family': [list(g.labels) for g in self.family],
                'classes': self.classes, 'inconclusive': self.inconclusive, 'unresolved': self.unresolved,
                'exhaustive': self.exhaustive,
                'certificate': [[i, j, a.value, b.value] for i, j, a, b in self.certificate]}


def _invariant(g):
    dense = toDense(g)
    return (g.order, edgeCount(g), tuple(sorted(dense.degrees.tolist())))


def _isomorphismClasses(n, budget, progress):
    '''
    one representative per isomorphism class among the 2^n induced subgraphs of D_n
    (same order and size, so embedding one way means isomorphic).
    a graph no earlier representative matched, with at least one INCONCLUSIVE comparison, is kept as an unresolved representative
    :return: (representatives, indices of unresolved representatives, number of INCONCLUSIVE calls)
    '''
    buckets = {}
    representatives = []
    unresolved = set()
    inconclusive = 0
    for mask in tqdm.tqdm(range(1 << n), disable=not progress):
        g = PowerGraph(tuple(i + 1 for i in range(n) if mask >> i & 1))
        bucket = buckets.setdefault(_invariant(g), [])
        duplicate = False
        undecided = False
        for rep in bucket:
            status = inducedEmbeds(g, representatives[rep], budget).status
            if status == OracleStatus.EMBEDS:
                duplicate = True
                break
            if status == OracleStatus.INCONCLUSIVE:
                inconclusive += 1
                undecided = True
        if not duplicate:
            if undecided:
                unresolved.add(len(representatives))
            bucket.append(len(representatives))
            representatives.append(g)
    return representatives, unresolved, inconclusive


def antichainSearch(n, maxSize=None, budget=None, progress=False):
    '''
    largest family of pairwise incomparable induced subgraphs of D_n found by exhaustive
    comparability computation followed by a branch and bound clique search on the incomparability graph
    :param n: 1 <= n <= 12
    :param maxSize: stop as soon as a family of this size is found (None: no limit)
    :param budget: SearchBudget, per oracle call and for the family search
    :return: AntichainReport
    '''
    if not 1 <= n <= 12:
        raise ValueError('antichain search enumerates 2^n subgraphs and needs 1 <= n <= 12, got ' + str(n))
    budget = budget or SearchBudget()
    reps, unresolved, inconclusive = _isomorphismClasses(n, budget, progress)
    k = len(reps)
    keys = [_invariant(g) for g in reps]

    # incomparable[i] is a bitset of classes provably incomparable with i
    incomparable = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            small, large = (i, j) if reps[i].order <= reps[j].order else (j, i)
            settled = keys[i] != keys[j] or (i not in unresolved and j not in unresolved)
            if reps[small].order == reps[large].order and settled:
                # distinct classes of equal order never embed into each other
                incomparable[i] |= 1 << j
                incomparable[j] |= 1 << i
                continue
            status = inducedEmbeds(reps[small], reps[large], budget).status
            if status == OracleStatus.INCONCLUSIVE:
                inconclusive += 1
            if status == OracleStatus.NOT_EMBEDS:
                incomparable[i] |= 1 << j
                incomparable[j] |= 1 << i

    best = []
    nodes = 0
    cut = False

    def expand(clique, candidates):
        '''
        Bron-Kerbosch style growth of a clique of the incomparability graph
        '''
        nonlocal best, nodes, cut
        if len(clique) > len(best):
            best = list(clique)
        if maxSize is not None and len(best) >= maxSize:
            cut = True
            return
        while candidates:
            if len(clique) + bin(candidates).count('1') <= len(best):
                return
            nodes += 1
            if nodes > budget.nodeLimit:
                cut = True
                return
            v = candidates.bit_length() - 1
            candidates &= ~(1 << v)
            expand(clique + [v], candidates & incomparable[v])
            if cut:
                return

    expand([], (1 << k) - 1)
    if cut and maxSize is None:
        print('[WARN] antichain search stopped after', budget.nodeLimit, 'nodes, the family may not be maximum', file=sys.stderr, flush=True)

    family = tuple(sorted((reps[i] for i in best), key=lambda g: (g.order, g.labels)))
    certificate = []
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            certificate.append((i, j, inducedEmbeds(family[i], family[j], budget).status,
                                inducedEmbeds(family[j], family[i], budget).status))
    if unresolved:
        print('[WARN]', len(unresolved), 'subgraphs could not be told apart from an isomorphic copy, raise the budget', file=sys.stderr, flush=True)
    return AntichainReport(n, family, certificate, k - len(unresolved), inconclusive, not cut and not unresolved, len(unresolved))
