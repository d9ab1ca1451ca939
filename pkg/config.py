import copy
import sys
import os

# exhaustive scans pack subsets into uint64 masks
MAX_EXHAUSTIVE_CAP = 62
# powers are computed in int64
MAX_LABEL = 2 ** 62


class Config:
	def __init__(self):
		#exhaustive search
		self.exhaustiveCap = 26 # largest vertex count accepted by muExact and the exhaustive lemma checkers (2^n subset scan)
		self.chunkSize = 65536 # number of subsets evaluated per vectorized batch

		#labels
		self.labelMax = 2 ** 40 # largest integer label accepted in a power graph

		#oracle
		self.oracleBudget = 1000000 # maximum number of search nodes for the induced subgraph oracle

		#sampling
		self.samples = 10000 # default number of sampled subsets for muSampled / theorem2 checks

		#reports
		self.maxViolations = 20 # number of violating instances kept in a report
		self.verbose = False # display progress bars and timings on stderr if true

	def fillFromDicFile(self, filePath):
		'''
		overwrite default config
		:param filePath: path to the new config file (key = value, '#' starts a comment)
		:return:
		'''

		print('[INFO] loading config from: ', filePath, file=sys.stderr, flush=True)
		with open(filePath, 'r') as fp:
			lines = fp.readlines()

		dic = {}

		for line in lines:
			oLine = copy.copy(line)

			if line[0] == '#' or line[0] == '\n':
				continue
			if '#' in line:
				line = line[0:line.find('#')]
			line = line.strip().replace('\t', '')

			if len(line) < 1:
				continue

			keyval = line.split('=')
			if len(keyval) == 2:
				key = keyval[0].strip()
				val = keyval[1].strip()
				val = val.replace('"', '').replace("'", "").strip()
				dic[key] = val
			else:
				print('[WARN] unknown key/val: ', oLine, file=sys.stderr, flush=True)

		for k, v in dic.items():
			if not hasattr(self, k):
				print('[WARN] unknown config key: ', k, file=sys.stderr, flush=True)
				continue
			aType = type(getattr(self, k)).__name__
			if aType == 'str':
				setattr(self, k, v)
			elif aType == 'bool':
				setattr(self, k, v.lower() == 'true')
			elif aType == 'int':
				setattr(self, k, int(v))
			elif aType == 'float':
				setattr(self, k, float(v))
			else:
				raise RuntimeError("unknown dictionary type: " + k + "=>" + v)
		self.validate()

	def applyEnvironment(self):
		'''
		apply environment overrides (WQO_CWLAB_CAP overrides the exhaustive vertex cap)
		'''
		cap = os.environ.get('WQO_CWLAB_CAP')
		if cap is not None and cap.strip() != '':
			try:
				self.exhaustiveCap = int(cap)
			except ValueError:
				raise ValueError('WQO_CWLAB_CAP must be an integer but was: ' + cap)
		self.validate()

	def validate(self):
		if not 1 <= self.exhaustiveCap <= MAX_EXHAUSTIVE_CAP:
			raise ValueError(f'exhaustiveCap must lie in [1, {MAX_EXHAUSTIVE_CAP}] but was {self.exhaustiveCap}')
		if not 1 <= self.labelMax <= MAX_LABEL:
			raise ValueError(f'labelMax must lie in [1, 2^62] but was {self.labelMax}')
		if self.oracleBudget < 1:
			raise ValueError(f'oracleBudget must be positive but was {self.oracleBudget}')
		if self.chunkSize < 1 or self.samples < 1 or self.maxViolations < 0:
			raise ValueError('chunkSize and samples must be positive, maxViolations non negative')

	def print(self):
		dic = self.__dict__
		for key, val in dic.items():
			print(key, '=>', val, file=sys.stderr)
