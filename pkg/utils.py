from dataclasses import dataclass, field
import sys
import time


def mkdir_p(path):
    import errno
    import os

    try:
        os.makedirs(path)
    except OSError as exc:
        if exc.errno == errno.EEXIST and os.path.isdir(path):
            pass
        else:
            raise


@dataclass
class LemmaReport:
    '''
    outcome of an exhaustive or sampled lemma check
    lemma: name of the checked statement
    passed: True iff no violation was found
    checked: number of instances examined
    violations: the first violating instances (capped)
    tightest: the instance closest to violating the statement (smallest slack)
    parameters: the ranges the check ran over
    '''
    lemma: str
    passed: bool = True
    checked: int = 0
    violations: list = field(default_factory=list)
    tightest: dict = None
    parameters: dict = field(default_factory=dict)
    maxViolations: int = 20

    def addViolation(self, instance):
        self.passed = False
        if len(self.violations) < self.maxViolations:
            self.violations.append(instance)

    def offerTightest(self, slack, instance):
        '''
        keep the instance with the smallest slack (first one wins on ties)
        '''
        if self.tightest is None or slack < self.tightest['slack']:
            self.tightest = dict(instance, slack=slack)

    def merge(self, other):
        '''
        fold another report of the same lemma into this one
        '''
        self.checked += other.checked
        for v in other.violations:
            self.addViolation(v)
        if not other.passed:
            self.passed = False
        if other.tightest is not None:
            self.offerTightest(other.tightest['slack'], {k: v for k, v in other.tightest.items() if k != 'slack'})
        return self

    def toDict(self):
        return {
            'lemma': self.lemma,
            'passed': self.passed,
            'checked': self.checked,
            'violations': self.violations,
            'tightest': self.tightest,
            'parameters': self.parameters,
        }


class Timer:
    '''
    prints the elapsed time of a block on stderr (never part of any report)
    '''
    def __init__(self, message, verbose=True):
        self.message = message
        self.verbose = verbose

    def __enter__(self):
        self.start = time.time()
        return self

    def __exit__(self, *exc):
        if self.verbose:
            end = time.time()
            print("[INFO] {} took {:.2f} seconds".format(self.message, end - self.start), file=sys.stderr, flush=True)
        return False
