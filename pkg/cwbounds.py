from powergraph import PowerGraph, asDense, buildDn, toDense, bodyComponents, qArray
from dataclasses import dataclass
from utils import LemmaReport
from enum import Enum
from math import comb
import numpy as np
import tqdm

# defaults for calls that pass no cap or chunk size (Config.exhaustiveCap, Config.chunkSize)
EXHAUSTIVE_CAP = 26
CHUNK_SIZE = 65536
_SENTINEL = np.uint64(np.iinfo(np.uint64).max)


class MuMode(Enum):
    EXACT = 'EXACT'
    SAMPLED = 'SAMPLED'


@dataclass(frozen=True)
class SimilarityReport:
    '''
    partition of U into classes of vertices with the same neighbourhood outside U
    '''
    subject: object
    uSet: tuple
    classCount: int
    classes: tuple


@dataclass(frozen=True)
class MuResult:
    '''
    value: mu(G) in EXACT mode (a certified clique-width lower bound), min over the sampled U in SAMPLED mode
    witness: a U attaining value, as a tuple of labels
    '''
    value: int
    witness: tuple
    mode: MuMode
    samples: int = None
    seed: int = None
    violations: tuple = ()

    def toDict(self):
        out = {'mode': self.mode.value, 'value': self.value, 'witness': list(self.witness)}
        if self.mode == MuMode.SAMPLED:
            out['samples'] = self.samples
            out['seed'] = self.seed
        out['violations'] = list(self.violations)
        return out

    @staticmethod
    def fromDict(dic):
        return MuResult(int(dic['value']), tuple(dic['witness']), MuMode(dic['mode']),
                        dic.get('samples'), dic.get('seed'), tuple(dic.get('violations', ())))


def admissibleSizes(n):
    '''
    integer reading of n/3 <= |U| <= 2n/3
    :return: (ceil(n/3), floor(2n/3)), an empty range when the first exceeds the second
    '''
    return -(-n // 3), (2 * n) // 3


def _signatures(rows):
    packed = np.packbits(rows, axis=1)
    return [row.tobytes() for row in packed]


def _vertexIndices(dense, u):
    rank = {label: i for i, label in enumerate(dense.labels)}
    missing = [x for x in u if x not in rank]
    if missing:
        raise ValueError('subset is not contained in the vertex set, unknown labels: ' + str(sorted(missing)[:10]))
    return np.array(sorted(rank[x] for x in set(u)), dtype=np.int64)


def similarityClasses(graph, u):
    '''
    classes of U-similar vertices: x ~ y iff N(x) and N(y) agree outside U
    :param graph: PowerGraph or DenseGraph
    :param u: iterable of vertex labels
    :return: SimilarityReport, classes ordered by their first member in vertex order
    '''
    dense = asDense(graph)
    idx = _vertexIndices(dense, u)
    uSet = tuple(dense.labels[i] for i in idx)
    if len(idx) == 0:
        return SimilarityReport(graph, uSet, 0, ())
    inside = np.zeros(dense.order, dtype=bool)
    inside[idx] = True
    rows = dense.adjacency[np.ix_(idx, np.flatnonzero(~inside))]
    classes = {}
    for i, key in zip(idx, _signatures(rows)):
        classes.setdefault(key, []).append(dense.labels[i])
    classes = tuple(tuple(members) for members in classes.values())
    return SimilarityReport(graph, uSet, len(classes), classes)


def _classCountOf(adjacency, idx):
    inside = np.zeros(adjacency.shape[0], dtype=bool)
    inside[idx] = True
    rows = adjacency[np.ix_(idx, np.flatnonzero(~inside))]
    return len(set(_signatures(rows)))


def _neighborMasks(dense):
    n = dense.order
    weights = np.uint64(1) << np.arange(n, dtype=np.uint64)
    if n == 0:
        return weights
    return np.bitwise_or.reduce(np.where(dense.adjacency, weights[None, :], np.uint64(0)), axis=1)


def _classCounts(nbr, masks):
    '''
    mu_G(U) for a batch of subsets given as bitmasks
    :param nbr: uint64 [n], neighbourhood mask of every vertex
    :param masks: uint64 [k]
    :return: int64 [k]
    '''
    n = len(nbr)
    if n == 0:
        return np.zeros(len(masks), dtype=np.int64)
    members = ((masks[:, None] >> np.arange(n, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(bool)
    outside = nbr[None, :] & ~masks[:, None]
    outside = np.where(members, outside, _SENTINEL)
    outside.sort(axis=1)
    first = outside[:, 0] != _SENTINEL
    changes = (outside[:, 1:] != outside[:, :-1]) & (outside[:, 1:] != _SENTINEL)
    return first.astype(np.int64) + changes.sum(axis=1)


def _maskToIndices(mask):
    mask = int(mask)
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _lexSmallest(masks, n):
    '''
    the mask whose sorted member tuple is lexicographically smallest
    '''
    if len(masks) == 1 or n == 0:
        return int(masks[0])
    bits = ((masks[:, None] >> np.arange(n, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(bool)
    order = np.argsort(~bits, axis=1, kind='stable')
    members = np.where(np.take_along_axis(bits, order, axis=1), order, -1)
    best = np.lexsort(members.T[::-1])[0]
    return int(masks[best])


def _maskChunks(n, chunkSize, progress):
    total = 1 << n
    for start in tqdm.tqdm(range(0, total, chunkSize), disable=not progress):
        yield np.arange(start, min(start + chunkSize, total), dtype=np.uint64)


def _checkCap(n, cap, what):
    cap = EXHAUSTIVE_CAP if cap is None else cap
    if n > cap:
        raise ValueError(f'{what} scans all 2^{n} subsets, above the exhaustive cap of {cap} vertices')
    if n > 62:
        raise ValueError(f'{what} cannot scan graphs with more than 62 vertices')


def muExact(graph, cap=None, chunkSize=None, progress=False):
    '''
    mu(G) = min mu_G(U) over every U with ceil(n/3) <= |U| <= floor(2n/3), by exhaustive scan.
    mu(G) <= cwd(G), so value is a clique-width lower bound.
    :param graph: PowerGraph or DenseGraph
    :param cap: largest accepted vertex count (default EXHAUSTIVE_CAP)
    :return: MuResult in EXACT mode, witness tie broken toward the lexicographically smallest U
    '''
    dense = asDense(graph)
    n = dense.order
    try:
        _checkCap(n, cap, 'mu_exact')
    except ValueError as e:
        raise ValueError(str(e) + '; use muSampled (mu --mode sampled) instead') from None
    lo, hi = admissibleSizes(n)
    if lo > hi:
        # degenerate: no admissible U, report the empty witness
        return MuResult(0, (), MuMode.EXACT)

    nbr = _neighborMasks(dense)
    best = None
    bestKey = None
    for masks in _maskChunks(n, chunkSize or CHUNK_SIZE, progress):
        sizes = np.bitwise_count(masks)
        masks = masks[(sizes >= lo) & (sizes <= hi)]
        if len(masks) == 0:
            continue
        counts = _classCounts(nbr, masks)
        low = int(counts.min())
        if best is not None and low > best:
            continue
        key = _maskToIndices(_lexSmallest(masks[counts == low], n))
        if best is None or low < best or key < bestKey:
            best, bestKey = low, key

    witness = tuple(dense.labels[i] for i in bestKey)
    return MuResult(best, witness, MuMode.EXACT)


def _powerExponents(n):
    return np.log2(qArray(np.arange(1, n + 1))).astype(np.int64)


def _splitHighCliques(exponents, inside):
    '''
    number of power cliques of power > 1 meeting both U and its complement
    '''
    high = exponents > 0
    return len(np.intersect1d(exponents[inside & high], exponents[~inside & high]))


def _sampleSubsets(n, samples, rng, progress):
    lo, hi = admissibleSizes(n)
    for _ in tqdm.tqdm(range(samples), disable=not progress):
        k = int(rng.integers(lo, hi + 1))
        yield np.sort(rng.choice(n, size=k, replace=False))


def muSampled(graph, samples, seed, maxViolations=20, progress=False):
    '''
    min of mu_G(U) over uniformly sampled admissible U (uniform size, then uniform subset of that size).
    on a full D_n every sample is checked against the component bound and the split power clique bound
    :param graph: PowerGraph or DenseGraph
    :param samples: int >= 1
    :param seed: int, the only source of randomness
    :return: MuResult in SAMPLED mode, or EXACT when samples cover every admissible subset
    '''
    if samples < 1:
        raise ValueError('samples must be >= 1 but was ' + str(samples))
    dense = asDense(graph)
    n = dense.order
    lo, hi = admissibleSizes(n)
    total = sum(comb(n, k) for k in range(lo, hi + 1))
    if lo > hi or samples >= total:
        return muExact(dense, cap=max(n, 1))

    rng = np.random.default_rng(seed)
    full = isinstance(graph, PowerGraph) and graph.isFull
    exponents = _powerExponents(n) if full else None
    violations = []
    best = None
    for idx in _sampleSubsets(n, samples, rng, progress):
        value = _classCountOf(dense.adjacency, idx)
        key = tuple(int(i) for i in idx)
        if best is None or (value, key) < best:
            best = (value, key)
        if full and len(violations) < maxViolations:
            components = len(bodyComponents(idx + 1))
            if 2 * value < components - 1:
                violations.append({'lemma': '2', 'u': [i + 1 for i in key], 'mu': value, 'components': components})
            inside = np.zeros(n, dtype=bool)
            inside[idx] = True
            split = _splitHighCliques(exponents, inside)
            if value < split:
                violations.append({'lemma': '3', 'u': [i + 1 for i in key], 'mu': value, 'split_cliques': split})

    witness = tuple(dense.labels[i] for i in best[1])
    return MuResult(best[0], witness, MuMode.SAMPLED, samples, seed, tuple(violations))


def checkLemma2(n, cap=None, chunkSize=None, maxViolations=20, progress=False):
    '''
    for every U of D_n: if P^U has k + 1 components then mu(U) >= k / 2.
    also checks that P^(complement of U) has at least k components
    :return: LemmaReport, slack = 2 mu(U) - k
    '''
    _checkCap(n, cap, 'check_lemma2')
    report = LemmaReport('2', maxViolations=maxViolations, parameters={'n': n})
    dense = toDense(buildDn(n))
    nbr = _neighborMasks(dense)
    full = np.uint64((1 << n) - 1)
    for masks in _maskChunks(n, chunkSize or CHUNK_SIZE, progress):
        counts = _classCounts(nbr, masks)
        components = np.bitwise_count(masks & ~(masks << np.uint64(1))).astype(np.int64)
        complement = ~masks & full
        complementComponents = np.bitwise_count(complement & ~(complement << np.uint64(1))).astype(np.int64)
        slack = 2 * counts - np.maximum(components - 1, 0)
        bad = np.flatnonzero((slack < 0) | (complementComponents < components - 1))
        for r in bad:
            report.addViolation({'u': [i + 1 for i in _maskToIndices(masks[r])], 'components': int(components[r]),
                                 'complement_components': int(complementComponents[r]), 'mu': int(counts[r])})
        report.checked += len(masks)
        low = slack.min()
        r = int(np.flatnonzero(masks == np.uint64(_lexSmallest(masks[slack == low], n)))[0])
        report.offerTightest(int(low), {'u': [i + 1 for i in _maskToIndices(masks[r])], 'components': int(components[r]),
                                        'complement_components': int(complementComponents[r]), 'mu': int(counts[r])})
    return report


def _highCliqueMasks(n):
    exponents = _powerExponents(n)
    out = []
    for k in range(1, int(exponents.max()) + 1 if n else 1):
        members = np.flatnonzero(exponents == k)
        if len(members) > 1:
            out.append(np.uint64(sum(1 << int(i) for i in members)))
    return out


def checkLemma3(n, u=None, cap=None, chunkSize=None, maxViolations=20, progress=False):
    '''
    mu_{D_n}(U) >= number of power cliques of power > 1 meeting both U and its complement.
    :param u: a single subset to check, or None for every subset of V(D_n)
    :return: LemmaReport, slack = mu(U) - split count
    '''
    report = LemmaReport('3', maxViolations=maxViolations, parameters={'n': n})
    g = buildDn(n)
    if u is not None:
        sim = similarityClasses(g, u)
        inside = np.zeros(n, dtype=bool)
        inside[np.array(sim.uSet, dtype=np.int64) - 1] = True
        split = _splitHighCliques(_powerExponents(n), inside)
        instance = {'u': list(sim.uSet), 'split_cliques': split, 'mu': sim.classCount}
        report.checked = 1
        if sim.classCount < split:
            report.addViolation(instance)
        report.offerTightest(sim.classCount - split, instance)
        return report

    _checkCap(n, cap, 'check_lemma3')
    dense = toDense(g)
    nbr = _neighborMasks(dense)
    cliques = _highCliqueMasks(n)
    for masks in _maskChunks(n, chunkSize or CHUNK_SIZE, progress):
        counts = _classCounts(nbr, masks)
        split = np.zeros(len(masks), dtype=np.int64)
        for clique in cliques:
            split += ((masks & clique) != 0) & ((~masks & clique) != 0)
        slack = counts - split
        for r in np.flatnonzero(slack < 0):
            report.addViolation({'u': [i + 1 for i in _maskToIndices(masks[r])], 'split_cliques': int(split[r]), 'mu': int(counts[r])})
        report.checked += len(masks)
        low = slack.min()
        r = int(np.flatnonzero(masks == np.uint64(_lexSmallest(masks[slack == low], n)))[0])
        report.offerTightest(int(low), {'u': [i + 1 for i in _maskToIndices(masks[r])], 'split_cliques': int(split[r]), 'mu': int(counts[r])})
    return report


def checkLemma4(c, maxN, maxViolations=20):
    '''
    every subpath of length 2^(c+1) inside [1, maxN] meets the power cliques of 2^1 .. 2^c
    (vertices of power 2^k recur with period 2^(k+1)); longer subpaths contain such a subpath
    :return: LemmaReport, slack = occurrences of the rarest power in a window minus one
    '''
    if c < 1:
        raise ValueError('c must be >= 1 but was ' + str(c))
    width = 1 << (c + 1)
    if width > maxN:
        raise ValueError(f'no interval of length 2^(c+1) = {width} fits in [1, {maxN}]')
    report = LemmaReport('4', maxViolations=maxViolations,
                         parameters={'c': c, 'max_n': maxN, 'interval_length': width})
    powers = qArray(np.arange(1, maxN + 1))
    for k in range(1, c + 1):
        hits = np.concatenate(([0], np.cumsum(powers == (1 << k))))
        counts = hits[width:] - hits[:-width]
        for start in np.flatnonzero(counts == 0):
            report.addViolation({'interval': [int(start) + 1, int(start) + width], 'missing_power': 1 << k})
        report.checked += len(counts)
        r = int(counts.argmin())
        report.offerTightest(int(counts[r]) - 1, {'interval': [r + 1, r + width], 'power': 1 << k})
    return report


def theorem2Threshold(c):
    '''
    smallest n for which cwd(D_n) >= c is certified: 3((2c + 1)(2^(c+1) - 1) + 1)
    '''
    if c < 1:
        raise ValueError('c must be >= 1 but was ' + str(c))
    return 3 * ((2 * c + 1) * ((1 << (c + 1)) - 1) + 1)


def checkTheorem2(c, samples, seed, maxViolations=20, progress=False):
    '''
    on D_n with n = theorem2Threshold(c), every sampled admissible U has mu(U) >= c
    :return: LemmaReport, slack = mu(U) - c
    '''
    n = theorem2Threshold(c)
    if samples < 1:
        raise ValueError('samples must be >= 1 but was ' + str(samples))
    report = LemmaReport('theorem2', maxViolations=maxViolations,
                         parameters={'c': c, 'n': n, 'samples': samples, 'seed': seed})
    adjacency = toDense(buildDn(n)).adjacency
    rng = np.random.default_rng(seed)
    for idx in _sampleSubsets(n, samples, rng, progress):
        value = _classCountOf(adjacency, idx)
        instance = {'u': [int(i) + 1 for i in idx], 'mu': value}
        if value < c:
            report.addViolation(instance)
        report.checked += 1
        report.offerTightest(value - c, instance)
    return report
