from powergraph import PowerGraph, Factor, buildDn, factorComponents, powerExponent, adjacencyMatrix, qArray, \
    bodyComponents, closedFormMaximal, q, LABEL_CEILING
from embedoracle import EmbeddingMap, Provenance, OracleStatus, SearchBudget, inducedEmbeds, verifyEmbedding
from dataclasses import dataclass
from utils import LemmaReport
from typing import NamedTuple
from functools import lru_cache
import numpy as np
import tqdm
import sys


class TClassId(NamedTuple):
    '''
    t-equivalence class of a factor: same length and same offset m(F) - s(F)
    '''
    length: int
    offset: int


@lru_cache(maxsize=None)
def legalColumns(c):
    '''
    every t-class of length <= c in lexicographic (length, offset) order, C(c+1, 2) of them
    '''
    if c < 1:
        raise ValueError('c must be >= 1 but was ' + str(c))
    return tuple(TClassId(length, offset) for length in range(1, c + 1) for offset in range(length))


def classifyFactor(f):
    '''
    :param f: Factor
    :return: (l index i with q(m(F)) = 2^i, TClassId)
    '''
    return powerExponent(f.m, LABEL_CEILING), TClassId(f.length, f.offset)


def lowThreshold(c):
    '''
    floor(log2 c): rows up to this index are fixed by every c-preserving map
    '''
    if c < 1:
        raise ValueError('c must be >= 1 but was ' + str(c))
    return c.bit_length() - 1


@dataclass(frozen=True)
class FactorMatrix:
    '''
    counts of the factor-components of a graph per (l index, t-class) cell
    cells: sorted tuple of ((l index, TClassId), count) with count > 0
    '''
    c: int
    cells: tuple

    def __post_init__(self):
        legal = set(legalColumns(self.c))
        for (i, t), count in self.cells:
            assert i >= 0 and count > 0
            if t not in legal:
                raise ValueError('t-class ' + str(tuple(t)) + ' is not a legal column for c = ' + str(self.c))
        object.__setattr__(self, 'cells', tuple(sorted(self.cells)))

    @property
    def threshold(self):
        return lowThreshold(self.c)

    @property
    def lowRows(self):
        return tuple(range(self.threshold + 1))

    @property
    def highRows(self):
        return tuple(sorted({i for (i, _), _ in self.cells if i > self.threshold}))

    @property
    def columns(self):
        return legalColumns(self.c)

    def count(self, i, t):
        return dict(self.cells).get((i, TClassId(*t)), 0)

    def total(self):
        return sum(count for _, count in self.cells)

    def rows(self, indices):
        '''
        :return: int64 array [len(indices), C(c+1, 2)]
        '''
        column = {t: j for j, t in enumerate(self.columns)}
        position = {i: r for r, i in enumerate(indices)}
        out = np.zeros([len(indices), len(column)], dtype=np.int64)
        for (i, t), count in self.cells:
            if i in position:
                out[position[i], column[t]] = count
        return out

    def rowVector(self, i):
        return self.rows([i])[0]

    def toDict(self):
        rows = []
        for i in self.lowRows + self.highRows:
            cells = [{'length': t.length, 'offset': t.offset, 'count': count} for (r, t), count in self.cells if r == i]
            rows.append({'l_index': i, 'cells': cells})
        return {'c': self.c, 'rows': rows}

    @staticmethod
    def fromDict(dic):
        cells = []
        for row in dic['rows']:
            for cell in row['cells']:
                if cell['count'] > 0:
                    cells.append(((int(row['l_index']), TClassId(int(cell['length']), int(cell['offset']))), int(cell['count'])))
        return FactorMatrix(int(dic['c']), tuple(cells))


def factorMatrix(g, c):
    '''
    :param g: PowerGraph whose factor-components all have length <= c
    :param c: length bound >= 1
    :return: FactorMatrix
    '''
    legalColumns(c)
    counts = {}
    for f in factorComponents(g):
        if f.length > c:
            raise ValueError(f'factor [{f.start}, {f.end}] has length {f.length}, longer than c = {c}')
        key = classifyFactor(f)
        counts[key] = counts.get(key, 0) + 1
    return FactorMatrix(c, tuple(counts.items()))


def isBounded(g, c):
    return all(f.length <= c for f in factorComponents(g))


@dataclass(frozen=True)
class CPreservingMap:
    '''
    injective map on row indices, identity on every index <= floor(log2 c)
    assignments: sorted tuple of (i, h(i))
    '''
    c: int
    assignments: tuple

    def __post_init__(self):
        pairs = tuple(sorted((int(i), int(j)) for i, j in self.assignments))
        sources = [i for i, _ in pairs]
        targets = [j for _, j in pairs]
        if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
            raise ValueError('c-preserving map must be an injective function')
        threshold = lowThreshold(self.c)
        mapping = dict(pairs)
        for i in range(threshold + 1):
            if mapping.get(i) != i:
                raise ValueError('c-preserving map must fix row ' + str(i))
        object.__setattr__(self, 'assignments', pairs)

    @property
    def mapping(self):
        return dict(self.assignments)

    def __call__(self, i):
        return self.mapping[i]

    def compose(self, other):
        '''
        other after self: rows of G -> rows of H -> rows of K
        '''
        if other.c != self.c:
            raise ValueError('cannot compose maps for different bounds')
        second = other.mapping
        return CPreservingMap(self.c, tuple((i, second[j]) for i, j in self.assignments))

    def toDict(self):
        return {'c': self.c, 'assignments': [[i, j] for i, j in self.assignments]}


def _augment(row, dominates, matchOfTarget, visited):
    for target in np.flatnonzero(dominates[row]):
        if visited[target]:
            continue
        visited[target] = True
        if matchOfTarget[target] < 0 or _augment(matchOfTarget[target], dominates, matchOfTarget, visited):
            matchOfTarget[target] = row
            return True
    return False


def leqMatrices(mg, mh):
    '''
    the decision procedure of leqC on precomputed matrices
    :return: CPreservingMap or None
    '''
    assert mg.c == mh.c
    c = mg.c
    low = mg.lowRows
    if np.any(mg.rows(low) > mh.rows(low)):
        return None
    identity = tuple((i, i) for i in low)
    if mg == mh:
        return CPreservingMap(c, identity + tuple((i, i) for i in mg.highRows))

    sourceRows = mg.highRows
    targetRows = mh.highRows
    if len(sourceRows) > len(targetRows):
        return None
    source = mg.rows(sourceRows)
    target = mh.rows(targetRows)
    # dominates[r, t]: row t of H is at least row r of G in every column
    dominates = np.all(target[None, :, :] >= source[:, None, :], axis=2)
    if not np.all(dominates.any(axis=1)):
        return None

    matchOfTarget = np.full(len(targetRows), -1, dtype=np.int64)
    order = sorted(range(len(sourceRows)), key=lambda r: (-int(source[r].sum()), r))
    for r in order:
        if not _augment(r, dominates, matchOfTarget, np.zeros(len(targetRows), dtype=bool)):
            return None
    matched = tuple((sourceRows[int(r)], targetRows[t]) for t, r in enumerate(matchOfTarget) if r >= 0)
    return CPreservingMap(c, identity + matched)


def leqC(g, h, c):
    '''
    G <=_c H: some c-preserving h with |G_ij| <= |H_h(i)j| for every cell
    low rows are compared pointwise, high rows of G are matched to dominating high rows of H
    :param g: PowerGraph with factors of length <= c
    :param h: PowerGraph with factors of length <= c
    :return: witnessing CPreservingMap, or None
    '''
    return leqMatrices(factorMatrix(g, c), factorMatrix(h, c))


def leqPlain(g, h):
    '''
    the unrestricted order: |G_ij| <= |H_ij| for every cell, with c the longest factor of either graph
    :return: identity CPreservingMap over the rows of G, or None
    '''
    c = max([f.length for f in factorComponents(g) + factorComponents(h)] + [1])
    mg = factorMatrix(g, c)
    mh = factorMatrix(h, c)
    rows = mg.lowRows + mg.highRows
    if np.any(mg.rows(rows) > mh.rows(rows)):
        return None
    return CPreservingMap(c, tuple((i, i) for i in rows))


def buildEmbeddingPhi(g, h, c, witness):
    '''
    the injective factor map: every factor of G in (l index i, t-class j) goes to the next unused factor of H in
    cell (witness(i), j), both taken in increasing label order, and vertices are mapped index to index
    :param witness: CPreservingMap returned by leqC(g, h, c)
    :return: EmbeddingMap, verified as an induced embedding
    '''
    threshold = lowThreshold(c)
    pool = {}
    for f in factorComponents(h):
        if f.length > c:
            raise ValueError(f'factor [{f.start}, {f.end}] has length {f.length}, longer than c = {c}')
        pool.setdefault(classifyFactor(f), []).append(f)
    taken = {key: 0 for key in pool}
    rowMap = witness.mapping

    mapping = {}
    factorPairs = []
    for f in factorComponents(g):
        if f.length > c:
            raise ValueError(f'factor [{f.start}, {f.end}] has length {f.length}, longer than c = {c}')
        i, t = classifyFactor(f)
        if i not in rowMap:
            raise ValueError('witness does not map row ' + str(i))
        cell = (rowMap[i], t)
        if taken.get(cell, 0) >= len(pool.get(cell, [])):
            raise ValueError(f'witness is not dominating: cell ({rowMap[i]}, {tuple(t)}) of H is exhausted')
        image = pool[cell][taken[cell]]
        taken[cell] += 1
        factorPairs.append((f, image))
        for a, b in zip(f.labels, image.labels):
            mapping[a] = b

    rowsSeen = {}
    for f, image in factorPairs:
        i, t = classifyFactor(f)
        j, u = classifyFactor(image)
        if t != u:
            raise RuntimeError(f'{f} and {image} are not t-equivalent')
        if (i <= threshold) != (j <= threshold):
            raise RuntimeError(f'{f} and {image} disagree on being low powered')
        if i <= threshold and i != j:
            raise RuntimeError(f'low powered {f} mapped to {image} with a different maximal power')
        if rowsSeen.setdefault(i, j) != j:
            raise RuntimeError('factors with equal maximal power were sent to different maximal powers')
    if len(set(rowsSeen.values())) != len(rowsSeen):
        raise RuntimeError('factors with different maximal powers were sent to equal maximal powers')

    emap = EmbeddingMap.fromMapping(mapping, Provenance.CONSTRUCTED_PHI)
    if not verifyEmbedding(emap, g, h):
        raise RuntimeError('constructed factor embedding of ' + str(g.labels) + ' is not induced')
    return emap


def _firstWithPower(start, p):
    '''
    first y >= start with q(y) = p: the first odd multiple of p
    '''
    y = -(-start // p) * p
    if (y // p) % 2 == 0:
        y += p
    return y


def longFactorEmbedding(g, host):
    '''
    shift map z -> y + z into the first factor of host with at least 5n vertices, n = max label of g,
    y the first vertex of that factor whose power is the smallest power of two above n
    :return: EmbeddingMap or None when host has no such factor
    '''
    if g.order == 0:
        return EmbeddingMap((), Provenance.CONSTRUCTED_LONGFACTOR)
    n = g.maxLabel
    p = 1 << n.bit_length()
    for f in factorComponents(host):
        if f.length < 5 * n:
            continue
        y = _firstWithPower(f.start, p)
        assert y - f.start < 4 * n and y + n <= f.end
        for z in g.labels:
            assert q(y + z, LABEL_CEILING) == q(z, LABEL_CEILING)
        emap = EmbeddingMap(tuple((z, y + z) for z in g.labels), Provenance.CONSTRUCTED_LONGFACTOR)
        if not verifyEmbedding(emap, g, host):
            raise RuntimeError(f'shift by {y} of {g.labels} is not an induced embedding')
        return emap
    return None


def minimalHostN(g, budget=None):
    '''
    smallest n such that g is an induced subgraph of D_n, searched with the oracle from n = |V(g)| upward
    :return: (n, OracleResult); the status is INCONCLUSIVE when the budget ran out at that n, so n is only a lower bound
    '''
    budget = budget or SearchBudget()
    for n in range(max(g.order, 1), max(g.maxLabel, 1) + 1):
        result = inducedEmbeds(g, buildDn(n, g.labelMax), budget)
        if result.status != OracleStatus.NOT_EMBEDS:
            return n, result
    raise RuntimeError(f'{g.labels} does not embed into D_{g.maxLabel}')


@dataclass(frozen=True)
class ComparablePair:
    '''
    i < j are 1-based positions in the sequence, route names the test that succeeded
    '''
    i: int
    j: int
    embedding: EmbeddingMap
    route: str

    def toDict(self):
        return {'i': self.i, 'j': self.j, 'route': self.route, 'embedding': self.embedding.toDict()}


def findComparablePair(sequence, c, fallbackOracle=False, budget=None, progress=False):
    '''
    first pair i < j (lexicographic) with G_i an induced subgraph of G_j, trying the shift into a long factor,
    then leqC with the factor embedding, then the generic oracle when fallbackOracle is set
    :param sequence: list of PowerGraph
    :return: ComparablePair or None
    '''
    budget = budget or SearchBudget()
    bounded = [isBounded(g, c) for g in sequence]
    matrices = [factorMatrix(g, c) if b else None for g, b in zip(sequence, bounded)]
    longest = [max([f.length for f in factorComponents(g)] + [0]) for g in sequence]

    for i in tqdm.tqdm(range(len(sequence)), disable=not progress):
        g = sequence[i]
        for j in range(i + 1, len(sequence)):
            h = sequence[j]
            if longest[j] >= 5 * g.maxLabel:
                emap = longFactorEmbedding(g, h)
                if emap is not None:
                    return ComparablePair(i + 1, j + 1, emap, 'long_factor')
            if bounded[i] and bounded[j]:
                witness = leqMatrices(matrices[i], matrices[j])
                if witness is not None:
                    return ComparablePair(i + 1, j + 1, buildEmbeddingPhi(g, h, c, witness), 'leq_c')
            if fallbackOracle:
                result = inducedEmbeds(g, h, budget)
                if result.status == OracleStatus.EMBEDS:
                    assert verifyEmbedding(result.embedding, g, h)
                    return ComparablePair(i + 1, j + 1, result.embedding, 'oracle')
    return None


def randomBoundedSubgraph(hostN, c, rng):
    '''
    random induced subgraph of D_hostN with every factor of length <= c: keep each vertex with a random
    density, then drop every (c+1)-th vertex of each run
    '''
    density = rng.uniform(0.2, 0.9)
    keep = rng.random(hostN) < density
    labels = []
    run = 0
    for v in range(1, hostN + 1):
        if keep[v - 1] and run < c:
            labels.append(v)
            run += 1
        else:
            run = 0
    return PowerGraph(tuple(labels))


def randomSequence(count, hostN, c, seed, identicalDraws=False):
    '''
    draw k uses the generator seeded with (seed, k), or (seed, 0) for every draw when identicalDraws is set
    '''
    if hostN < 1 or c < 1:
        raise ValueError('random sequences need host n >= 1 and c >= 1')
    return [randomBoundedSubgraph(hostN, c, np.random.default_rng([seed, 0 if identicalDraws else k]))
            for k in range(count)]


def _intisoInstance(f1, f2):
    '''
    violations of the index map between two t-equivalent factors
    '''
    lab1 = np.array(f1.labels, dtype=np.int64)
    lab2 = np.array(f2.labels, dtype=np.int64)
    problems = []
    if not np.array_equal(adjacencyMatrix(lab1), adjacencyMatrix(lab2)):
        problems.append('not an isomorphism')
    if f2.labels[f1.m - f1.start] != f2.m:
        problems.append('maximal vertex not preserved')
    offMax = lab1 != f1.m
    if np.any(qArray(lab1)[offMax] != qArray(lab2)[offMax]):
        problems.append('power changed off the maximal vertex')
    return problems


def _gap(f1, f2):
    '''
    exponent gap between the maximal vertices and the strongest non maximal vertex of either factor
    '''
    if f1.length == 1:
        return None
    lab1 = np.array(f1.labels, dtype=np.int64)
    runnerUp = int(np.log2(qArray(lab1[lab1 != f1.m]).max()))
    return min(powerExponent(f1.m, LABEL_CEILING), powerExponent(f2.m, LABEL_CEILING)) - runnerUp


def checkIntiso(samples, seed, maxLength=16, maxLabel=10 ** 5, maxViolations=20, progress=False):
    '''
    sampled pairs of t-equivalent factors: the index map is an isomorphism, sends the maximal vertex to the
    maximal vertex and keeps q on every other vertex
    :return: LemmaReport, slack = exponent gap between maximal and runner up powers
    '''
    if samples < 1:
        raise ValueError('samples must be >= 1 but was ' + str(samples))
    if maxLength < 1 or maxLabel < maxLength:
        raise ValueError('need 1 <= max length <= max label')
    report = LemmaReport('intiso', maxViolations=maxViolations,
                         parameters={'samples': samples, 'seed': seed, 'max_length': maxLength, 'max_label': maxLabel})
    rng = np.random.default_rng(seed)
    for _ in tqdm.tqdm(range(samples), disable=not progress):
        length = int(rng.integers(1, maxLength + 1))
        start = int(rng.integers(1, maxLabel - length + 2))
        f1 = Factor(start, start + length - 1)
        # rejection sampling of a partner with the same offset
        f2 = None
        while f2 is None:
            starts = rng.integers(1, maxLabel - length + 2, size=256)
            ends = starts + length - 1
            offsets = np.array([closedFormMaximal(int(a), int(b)) - int(a) for a, b in zip(starts, ends)])
            hits = np.flatnonzero(offsets == f1.offset)
            if len(hits):
                f2 = Factor(int(starts[hits[0]]), int(ends[hits[0]]))
        problems = _intisoInstance(f1, f2)
        instance = {'f1': [f1.start, f1.end], 'f2': [f2.start, f2.end]}
        if problems:
            report.addViolation(dict(instance, problems=problems))
        report.checked += 1
        gap = _gap(f1, f2)
        if gap is not None:
            report.offerTightest(gap, instance)
    return report


def checkIntisoExhaustive(maxLabel=1024, maxLength=16, maxViolations=20, progress=False):
    '''
    every interval inside [1, maxLabel] of length <= maxLength against the first interval of its t-class
    :return: LemmaReport, slack = exponent gap between maximal and runner up powers
    '''
    report = LemmaReport('intiso', maxViolations=maxViolations,
                         parameters={'max_label': maxLabel, 'max_length': maxLength, 'exhaustive': True})
    for length in tqdm.tqdm(range(1, min(maxLength, maxLabel) + 1), disable=not progress):
        representative = {}
        for start in range(1, maxLabel - length + 2):
            f = Factor(start, start + length - 1)
            rep = representative.setdefault(f.offset, f)
            if rep is f:
                continue
            problems = _intisoInstance(rep, f)
            instance = {'f1': [rep.start, rep.end], 'f2': [f.start, f.end]}
            if problems:
                report.addViolation(dict(instance, problems=problems))
            report.checked += 1
            gap = _gap(rep, f)
            if gap is not None:
                report.offerTightest(gap, instance)
    return report


def _boundedSubgraphs(n, c):
    for mask in range(1 << n):
        labels = tuple(i + 1 for i in range(n) if mask >> i & 1)
        if all(b - a + 1 <= c for a, b in bodyComponents(labels)):
            yield PowerGraph(labels)


def checkLeqSoundness(n, c, budget=None, maxViolations=20, progress=False):
    '''
    for every ordered pair of induced subgraphs of D_n with factors <= c (one per factor matrix):
    leqC success implies that the factor embedding is induced and that the oracle answers EMBEDS
    :return: LemmaReport, parameters record how many oracle calls stayed inconclusive
    '''
    if not 1 <= n <= 12:
        raise ValueError('soundness check enumerates 2^n subgraphs and needs 1 <= n <= 12, got ' + str(n))
    budget = budget or SearchBudget()
    report = LemmaReport('indorder', maxViolations=maxViolations, parameters={'n': n, 'c': c})
    byMatrix = {}
    for g in _boundedSubgraphs(n, c):
        byMatrix.setdefault(factorMatrix(g, c), g)
    graphs = list(byMatrix.values())
    matrices = list(byMatrix.keys())
    successes = 0
    inconclusive = 0
    for a in tqdm.tqdm(range(len(graphs)), disable=not progress):
        for b in range(len(graphs)):
            report.checked += 1
            witness = leqMatrices(matrices[a], matrices[b])
            if witness is None:
                continue
            successes += 1
            instance = {'g': list(graphs[a].labels), 'h': list(graphs[b].labels)}
            try:
                buildEmbeddingPhi(graphs[a], graphs[b], c, witness)
            except RuntimeError as e:
                report.addViolation(dict(instance, problem=str(e)))
                continue
            status = inducedEmbeds(graphs[a], graphs[b], budget).status
            if status == OracleStatus.NOT_EMBEDS:
                report.addViolation(dict(instance, problem='oracle refutes the embedding'))
            elif status == OracleStatus.INCONCLUSIVE:
                inconclusive += 1
    if inconclusive:
        print('[WARN]', inconclusive, 'oracle calls were inconclusive', file=sys.stderr, flush=True)
    report.parameters.update({'classes': len(graphs), 'leq_successes': successes, 'inconclusive': inconclusive})
    return report
