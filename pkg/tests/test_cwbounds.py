'''
mu lower bound: exact scan against brute force, sampled determinism, lemma checkers
'''
from itertools import combinations

import pytest

from powergraph import PowerGraph, buildDn
from cwbounds import (
    MuMode, MuResult, admissibleSizes, similarityClasses, muExact, muSampled,
    checkLemma2, checkLemma3, checkLemma4, theorem2Threshold, checkTheorem2,
)


def _adjacentByDefinition(a, b):
    return a != b and (abs(a - b) == 1 or (a & -a) == (b & -b))


def _bruteMu(labels):
    '''
    (mu, lexicographically smallest witness) straight from the definition
    '''
    n = len(labels)
    lo, hi = -(-n // 3), (2 * n) // 3
    best = None
    for size in range(lo, hi + 1):
        for u in combinations(labels, size):
            inside = set(u)
            outside = [y for y in labels if y not in inside]
            classes = {frozenset(y for y in outside if _adjacentByDefinition(x, y)) for x in u}
            if best is None or (len(classes), u) < best:
                best = (len(classes), u)
    return best


def test_admissible_sizes():
    assert admissibleSizes(4) == (2, 2)
    assert admissibleSizes(3) == (1, 2)
    assert admissibleSizes(1) == (1, 0)
    assert admissibleSizes(9) == (3, 6)


def test_mu_d4():
    result = muExact(buildDn(4))
    assert result.value == 1
    assert result.witness == (1, 2)
    assert result.mode == MuMode.EXACT


def test_mu_degenerate_graphs():
    assert muExact(PowerGraph(())).value == 0
    one = muExact(buildDn(1))
    assert one.value == 0 and one.witness == ()


@pytest.mark.parametrize('labels', [
    tuple(range(1, 8)),
    tuple(range(1, 11)),
    tuple(range(1, 13)),
    (1, 2, 4, 5, 7, 8, 9),
    (3, 5, 6, 7, 10, 12, 13, 16, 17),
])
def test_mu_exact_matches_brute_force(labels):
    value, witness = _bruteMu(list(labels))
    result = muExact(PowerGraph(labels), chunkSize=64)
    assert result.value == value
    assert result.witness == witness


def test_similarity_classes():
    report = similarityClasses(buildDn(4), [2, 1])
    assert report.uSet == (1, 2)
    assert report.classCount == 1
    assert report.classes == ((1, 2),)
    assert similarityClasses(buildDn(4), []).classCount == 0
    with pytest.raises(ValueError):
        similarityClasses(buildDn(4), [5])


def test_mu_exact_refuses_large_graphs():
    with pytest.raises(ValueError, match='muSampled'):
        muExact(buildDn(30), cap=26)


def test_mu_sampled_is_deterministic():
    first = muSampled(buildDn(30), 200, seed=7)
    second = muSampled(buildDn(30), 200, seed=7)
    assert first == second
    assert first.toDict() == second.toDict()
    assert first.mode == MuMode.SAMPLED
    assert first.violations == ()
    assert len(first.witness) >= 10
    assert MuResult.fromDict(first.toDict()) == first


def test_mu_sampled_upper_bounds_exact():
    g = buildDn(12)
    assert muSampled(g, 100, seed=3).value >= muExact(g).value


def test_mu_sampled_small_graph_is_exact():
    result = muSampled(buildDn(6), 10 ** 6, seed=1)
    assert result.mode == MuMode.EXACT
    assert result == muExact(buildDn(6))


def test_mu_sampled_needs_samples():
    with pytest.raises(ValueError):
        muSampled(buildDn(10), 0, seed=1)


@pytest.mark.parametrize('n', range(1, 17))
def test_lemma2_exhaustive(n):
    report = checkLemma2(n, chunkSize=1024)
    assert report.passed
    assert report.checked == 2 ** n
    assert report.tightest['slack'] >= 0


@pytest.mark.parametrize('n', range(1, 17))
def test_lemma3_exhaustive(n):
    report = checkLemma3(n)
    assert report.passed
    assert report.checked == 2 ** n


def test_lemma3_single_subset():
    report = checkLemma3(16, u=[2, 4, 6])
    assert report.passed
    assert report.checked == 1
    assert report.tightest['split_cliques'] == 2
    assert report.tightest['mu'] == 3


def test_lemma3_two_split_cliques():
    report = checkLemma3(16, u=[2, 4])
    assert report.passed
    assert report.tightest['split_cliques'] == 2
    assert report.tightest['mu'] >= 2


def test_lemma_checks_respect_cap():
    with pytest.raises(ValueError):
        checkLemma2(20, cap=10)


@pytest.mark.parametrize('c', range(1, 6))
def test_lemma4(c):
    report = checkLemma4(c, 4096)
    assert report.passed
    assert report.tightest['slack'] >= 0


def test_lemma4_needs_room():
    with pytest.raises(ValueError):
        checkLemma4(3, 10)


def test_theorem2_threshold():
    assert [theorem2Threshold(c) for c in (1, 2, 3)] == [30, 108, 318]
    with pytest.raises(ValueError):
        theorem2Threshold(0)


def test_theorem2_sampled():
    report = checkTheorem2(2, 300, seed=0)
    assert report.passed
    assert report.checked == 300
    assert report.parameters['n'] == 108
    assert checkTheorem2(2, 300, seed=0).toDict() == report.toDict()


@pytest.mark.slow
def test_theorem2_sampled_at_full_scale():
    report = checkTheorem2(2, 10 ** 4, seed=0)
    assert report.passed, report.violations
    assert report.checked == 10 ** 4
