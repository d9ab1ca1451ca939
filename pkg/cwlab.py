from powergraph import buildDn, induced, asDense
from cwbounds import muExact, muSampled, checkLemma2, checkLemma3, checkLemma4, checkTheorem2, \
    theorem2Threshold
from powergraph import checkMaxOne, checkDiffq, checkMaxPower
from wqoorder import factorMatrix, isBounded, leqC, buildEmbeddingPhi, findComparablePair, randomSequence, \
    checkIntiso, checkIntisoExhaustive, checkLeqSoundness
from embedoracle import SearchBudget, OracleStatus, inducedEmbeds, antichainSearch
from graphio import readGraphFile, toPowerGraph, parseLabels, formatEdgeList, formatLabels, formatDot, dumpJson, \
    writeOutput
from utils import LemmaReport, Timer
from config import Config
import argparse
import sys
import os

LEMMAS = ['2', '3', '4', 'diffq', 'maxone', 'maxpower', 'intiso', 'theorem2', 'indorder']
DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'cwlabConfig.ini')


class UsageError(ValueError):
    pass


def _formatReport(report):
    status = 'PASS' if report.passed else 'FAIL'
    lines = [f'lemma {report.lemma}: {status} ({report.checked} instances checked)']
    for v in report.violations:
        lines.append(f'  violation: {v}')
    if report.tightest is not None:
        lines.append(f'  tightest: {report.tightest}')
    return '\n'.join(lines)


def _formatMap(emap):
    return ' '.join(f'{a}->{b}' for a, b in emap.pairs)


class Lab:
    '''
    runs one command against a configuration; every method returns the object to serialize
    '''

    def __init__(self, config):
        self.config = config
        self.verbose = config.verbose
        self.labelMax = config.labelMax
        self.budget = SearchBudget(config.oracleBudget)

    def generate(self, n, subset=None):
        g = buildDn(n, self.labelMax)
        if subset is not None:
            g = induced(g, subset.labels)
        return g

    def mu(self, graph, mode, samples=None, seed=None):
        if mode == 'exact':
            return muExact(graph, cap=self.config.exhaustiveCap, chunkSize=self.config.chunkSize, progress=self.verbose)
        if seed is None:
            raise UsageError('mu --mode sampled needs --seed')
        return muSampled(graph, samples or self.config.samples, seed, self.config.maxViolations, progress=self.verbose)

    def verify(self, lemma, n=None, c=None, maxLabel=None, maxLength=None, samples=None, seed=None, u=None):
        '''
        :return: LemmaReport
        '''
        keep = self.config.maxViolations
        progress = self.verbose
        if lemma in ('2', '3'):
            n = 16 if n is None else n
            if n < 1:
                raise UsageError('--n must be >= 1')
            if lemma == '3' and u is not None:
                return checkLemma3(n, cap=self.config.exhaustiveCap, chunkSize=self.config.chunkSize, u=u.labels,
                                   maxViolations=keep)
            check = checkLemma2 if lemma == '2' else checkLemma3
            report = LemmaReport(lemma, maxViolations=keep, parameters={'n_range': [1, n]})
            for k in range(1, n + 1):
                report.merge(check(k, cap=self.config.exhaustiveCap, chunkSize=self.config.chunkSize,
                                   maxViolations=keep, progress=progress))
            return report
        if lemma == '4':
            c = 3 if c is None else c
            report = LemmaReport('4', maxViolations=keep, parameters={'c_range': [1, c], 'max_n': maxLabel or 4096})
            for k in range(1, c + 1):
                report.merge(checkLemma4(k, maxLabel or 4096, maxViolations=keep))
            return report
        if lemma in ('diffq', 'maxone', 'maxpower'):
            check = {'diffq': checkDiffq, 'maxone': checkMaxOne, 'maxpower': checkMaxPower}[lemma]
            return check(maxLabel or 4096, maxLength or 64, maxViolations=keep, progress=progress)
        if lemma == 'intiso':
            if seed is None:
                return checkIntisoExhaustive(maxLabel or 1024, maxLength or 16, maxViolations=keep, progress=progress)
            return checkIntiso(samples or self.config.samples, seed, maxLength or 16, maxLabel or 10 ** 5,
                               maxViolations=keep, progress=progress)
        if lemma == 'theorem2':
            if seed is None:
                raise UsageError('verify --lemma theorem2 samples subsets and needs --seed')
            c = 2 if c is None else c
            if self.verbose:
                print('[INFO] checking D_' + str(theorem2Threshold(c)), file=sys.stderr, flush=True)
            return checkTheorem2(c, samples or self.config.samples, seed, maxViolations=keep, progress=progress)
        if lemma == 'indorder':
            return checkLeqSoundness(8 if n is None else n, 3 if c is None else c, self.budget,
                                     maxViolations=keep, progress=progress)
        raise UsageError('unknown lemma: ' + str(lemma))

    def compare(self, a, b, c, fallbackOracle=False):
        out = {'c': c, 'comparable': False, 'witness': None, 'embedding': None, 'oracle': None}
        if fallbackOracle and not (isBounded(a, c) and isBounded(b, c)):
            print('[WARN] a factor is longer than c, leq_c skipped', file=sys.stderr, flush=True)
        else:
            witness = leqC(a, b, c)
            if witness is not None:
                out['comparable'] = True
                out['witness'] = witness.toDict()
                out['embedding'] = buildEmbeddingPhi(a, b, c, witness).toDict()
        if fallbackOracle:
            result = inducedEmbeds(a, b, self.budget)
            out['oracle'] = result.status.value
            if out['embedding'] is None and result.status == OracleStatus.EMBEDS:
                out['comparable'] = True
                out['embedding'] = result.embedding.toDict()
        return out

    def experiment(self, count, hostN, c, seed, identicalDraws=False, fallbackOracle=False):
        sequence = randomSequence(count, hostN, c, seed, identicalDraws)
        pair = findComparablePair(sequence, c, fallbackOracle, self.budget, progress=self.verbose)
        return {'count': count, 'host_n': hostN, 'c': c, 'seed': seed,
                'pair': pair.toDict() if pair is not None else None}

    def oracleCheck(self, a, b):
        return inducedEmbeds(asDense(a), asDense(b), self.budget)

    def antichain(self, n, maxSize=None):
        return antichainSearch(n, maxSize, self.budget, progress=self.verbose)

    def matrix(self, g, c):
        return factorMatrix(g, c)


def _loadConfig(params):
    config = Config()
    path = params.config
    if path is None and os.path.exists(DEFAULT_CONFIG):
        path = DEFAULT_CONFIG
    if path is not None:
        config.fillFromDicFile(path)
    config.applyEnvironment()
    if params.cap is not None:
        config.exhaustiveCap = params.cap
    if params.verbose:
        config.verbose = True
    if getattr(params, 'budget', None) is not None:
        config.oracleBudget = params.budget
    config.validate()
    return config


def _readPowerGraph(path, labelMax):
    return toPowerGraph(readGraphFile(path, labelMax), labelMax)


def _readAnyGraph(path, labelMax):
    '''
    edge lists that are induced subgraphs of some D_n come back as power graphs, others stay dense
    '''
    graph = readGraphFile(path, labelMax)
    try:
        return toPowerGraph(graph, labelMax)
    except (ValueError, OverflowError):
        return graph


def _runGenerate(lab, params):
    if params.subset is not None and params.subset_file is not None:
        raise UsageError('use either --subset or --subset-file')
    subset = None
    if params.subset is not None:
        subset = parseLabels(params.subset, lab.labelMax)
    elif params.subset_file is not None:
        subset = _readPowerGraph(params.subset_file, lab.labelMax)
    g = lab.generate(params.n, subset)
    text = {'edgelist': formatEdgeList, 'labels': formatLabels, 'dot': formatDot}[params.format](g)
    return text, 0


def _runMu(lab, params):
    result = lab.mu(_readAnyGraph(params.file, lab.labelMax), params.mode, params.samples, params.seed)
    if params.format == 'json':
        text = dumpJson(result.toDict())
    else:
        text = f'mu = {result.value} ({result.mode.value})\nwitness: {" ".join(str(x) for x in result.witness)}'
        for v in result.violations:
            text += f'\nviolation: {v}'
    return text, 1 if result.violations else 0


def _runVerify(lab, params):
    u = parseLabels(params.u, lab.labelMax) if params.u is not None else None
    report = lab.verify(params.lemma, params.n, params.c, params.max, params.max_length, params.samples, params.seed, u)
    text = dumpJson(report.toDict()) if params.format == 'json' else _formatReport(report)
    return text, 0 if report.passed else 1


def _runCompare(lab, params):
    out = lab.compare(_readPowerGraph(params.a, lab.labelMax), _readPowerGraph(params.b, lab.labelMax), params.c, params.fallback_oracle)
    if params.format == 'json':
        return dumpJson(out), 0
    lines = []
    if out['witness'] is not None:
        lines.append('comparable under leq_c, rows: ' + ' '.join(f'{i}->{j}' for i, j in out['witness']['assignments']))
        lines.append('embedding: ' + ' '.join(f'{a}->{b}' for a, b in out['embedding']['pairs']))
    else:
        lines.append('incomparable-under-leq_c')
    if out['oracle'] is not None:
        lines.append('oracle: ' + out['oracle'])
        if out['witness'] is None and out['embedding'] is not None:
            lines.append('embedding: ' + ' '.join(f'{a}->{b}' for a, b in out['embedding']['pairs']))
    return '\n'.join(lines), 0


def _runExperiment(lab, params):
    out = lab.experiment(params.count, params.host_n, params.c, params.seed, params.identical_draws, params.fallback_oracle)
    if params.format == 'json':
        return dumpJson(out), 0
    pair = out['pair']
    if pair is None:
        return f'no comparable pair among {params.count} graphs under the attempted tests', 0
    text = f'pair ({pair["i"]}, {pair["j"]}) via {pair["route"]}\nembedding: ' + \
        ' '.join(f'{a}->{b}' for a, b in pair['embedding']['pairs'])
    return text, 0


def _runOracleCheck(lab, params):
    result = lab.oracleCheck(readGraphFile(params.a, lab.labelMax), readGraphFile(params.b, lab.labelMax))
    if params.format == 'json':
        return dumpJson(result.toDict()), 0
    text = f'{result.status.value} ({result.nodes} nodes)'
    if result.embedding is not None:
        text += '\nembedding: ' + _formatMap(result.embedding)
    return text, 0


def _runAntichain(lab, params):
    report = lab.antichain(params.n, params.max_size)
    if params.format == 'json':
        return dumpJson(report.toDict()), 0
    lines = [f'antichain of size {report.size} among {report.classes} isomorphism classes of induced subgraphs of D_{params.n}'
             + ('' if report.exhaustive else ' (search cut)')]
    lines += ['  {' + ', '.join(str(x) for x in g.labels) + '}' for g in report.family]
    return '\n'.join(lines), 0


def _runMatrix(lab, params):
    m = lab.matrix(_readPowerGraph(params.file, lab.labelMax), params.c)
    if params.format == 'json':
        return dumpJson(m.toDict()), 0
    lines = ['row  ' + ' '.join(f'({t.length},{t.offset})' for t in m.columns)]
    for i in m.lowRows + m.highRows:
        marker = 'L' if i <= m.threshold else 'H'
        lines.append(f'{marker}{i:<3} ' + ' '.join(f'{x:>5}' for x in m.rowVector(i)))
    return '\n'.join(lines), 0


COMMANDS = {
    'generate': _runGenerate,
    'mu': _runMu,
    'verify': _runVerify,
    'compare': _runCompare,
    'experiment': _runExperiment,
    'oracle-check': _runOracleCheck,
    'antichain': _runAntichain,
    'matrix': _runMatrix,
}


def buildParser():
    parser = argparse.ArgumentParser(prog='cwlab', description='clique-width lower bounds and induced subgraph order on power graphs',
                                     allow_abbrev=False)
    parser.add_argument("--config", required=False, default=None, help="path to the configuration file (default: cwlabConfig.ini next to this script)")
    parser.add_argument("--cap", required=False, type=int, default=None, help="largest vertex count for exhaustive scans (overrides WQO_CWLAB_CAP and the config)")
    parser.add_argument("--verbose", action='store_true', help='progress bars and timings on stderr')
    parser.add_argument("--output", required=False, default=None, help="write the result to this file instead of stdout")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('generate', help='D_n or one of its induced subgraphs')
    p.add_argument('n', type=int)
    p.add_argument('--subset', default=None, help='comma separated labels of the induced subgraph')
    p.add_argument('--subset-file', default=None, help='label list file of the induced subgraph')
    p.add_argument('--format', choices=['edgelist', 'labels', 'dot'], default='edgelist')

    p = sub.add_parser('mu', help='the clique-width lower bound mu of a graph file')
    p.add_argument('file')
    p.add_argument('--mode', choices=['exact', 'sampled'], default='exact')
    p.add_argument('--samples', type=int, default=None)
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--format', choices=['json', 'text'], default='json')

    p = sub.add_parser('verify', help='run a lemma checker')
    p.add_argument('--lemma', choices=LEMMAS, required=True)
    p.add_argument('--n', type=int, default=None, help='largest D_n (lemmas 2, 3, indorder)')
    p.add_argument('--c', type=int, default=None, help='bound c (lemmas 4, theorem2, indorder)')
    p.add_argument('--max', type=int, default=None, help='largest label scanned (4, diffq, maxone, maxpower, intiso)')
    p.add_argument('--max-length', type=int, default=None, help='longest interval scanned (diffq, maxone, maxpower, intiso)')
    p.add_argument('--samples', type=int, default=None)
    p.add_argument('--seed', type=int, default=None, help='required by theorem2, switches intiso to sampling')
    p.add_argument('--u', default=None, help='single subset for lemma 3, comma separated')
    p.add_argument('--format', choices=['json', 'text'], default='text')

    p = sub.add_parser('compare', help='decide G <=_c H and build the embedding')
    p.add_argument('a')
    p.add_argument('b')
    p.add_argument('--c', type=int, required=True)
    p.add_argument('--fallback-oracle', action='store_true', help='also run the exponential induced subgraph search')
    p.add_argument('--budget', type=int, default=None, help='oracle search node limit')
    p.add_argument('--format', choices=['json', 'text'], default='text')

    p = sub.add_parser('experiment', help='search a random sequence of c-bounded graphs for a comparable pair')
    p.add_argument('--count', type=int, required=True)
    p.add_argument('--host-n', type=int, required=True)
    p.add_argument('--c', type=int, required=True)
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--identical-draws', action='store_true', help='every draw uses the same generator seed')
    p.add_argument('--fallback-oracle', action='store_true')
    p.add_argument('--budget', type=int, default=None)
    p.add_argument('--format', choices=['json', 'text'], default='json')

    p = sub.add_parser('oracle-check', help='induced subgraph search between two graph files')
    p.add_argument('a')
    p.add_argument('b')
    p.add_argument('--budget', type=int, default=None)
    p.add_argument('--format', choices=['json', 'text'], default='json')

    p = sub.add_parser('antichain', help='largest antichain among the induced subgraphs of D_n (n <= 12)')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--max-size', type=int, default=None)
    p.add_argument('--budget', type=int, default=None)
    p.add_argument('--format', choices=['json', 'text'], default='json')

    p = sub.add_parser('matrix', help='factor matrix of a label list file')
    p.add_argument('file')
    p.add_argument('--c', type=int, required=True)
    p.add_argument('--format', choices=['json', 'text'], default='json')
    return parser


def main(argv=None):
    '''
    :return: exit code, 0 success, 1 failed check or verification, 2 usage or input error
    '''
    parser = buildParser()
    try:
        params = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    try:
        config = _loadConfig(params)
        if config.verbose:
            config.print()
        lab = Lab(config)
        with Timer(params.command, verbose=config.verbose):
            text, code = COMMANDS[params.command](lab, params)
        writeOutput(text, params.output)
        return code
    except (ValueError, OverflowError, OSError) as e:
        print('[ERROR]', e, file=sys.stderr, flush=True)
        return 2
    except RuntimeError as e:
        print('[ERROR]', e, file=sys.stderr, flush=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
