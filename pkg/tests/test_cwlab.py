'''
command line surface, run in process through cwlab.main
'''
import json

import pytest

import cwbounds

import cwlab


def _run(capsys, *argv):
    code = cwlab.main(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text + '\n')
        return str(path)
    return write


def test_generate_d16(capsys):
    code, out = _run(capsys, 'generate', '16', '--format', 'edgelist')
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == '16 50'
    assert len(lines) == 51


def test_generate_d1(capsys):
    assert _run(capsys, 'generate', '1') == (0, '1 0\n')


def test_generate_subset(capsys):
    code, out = _run(capsys, 'generate', '16', '--subset', '5,6,8,9', '--format', 'edgelist')
    assert code == 0
    assert out.splitlines() == ['4 3', '5 6', '5 9', '8 9']


def test_generate_formats(capsys, files):
    code, out = _run(capsys, 'generate', '8', '--format', 'dot')
    assert code == 0 and 'subgraph cluster_q0' in out
    code, out = _run(capsys, 'generate', '8', '--subset-file', files('s.txt', '2 3 5'), '--format', 'labels')
    assert (code, out) == (0, '2 3 5\n')


def test_generate_bad_subset(capsys):
    assert _run(capsys, 'generate', '4', '--subset', '2,7')[0] == 2
    assert _run(capsys, 'generate', '0')[0] == 2


def test_mu_exact(capsys, files):
    code, out = _run(capsys, 'mu', files('d4.txt', '1 2 3 4'), '--mode', 'exact')
    assert code == 0
    assert json.loads(out) == {'mode': 'EXACT', 'value': 1, 'witness': [1, 2], 'violations': []}


def test_mu_empty_graph(capsys, files):
    code, out = _run(capsys, 'mu', files('empty.txt', ''))
    assert code == 0
    assert json.loads(out)['value'] == 0


def test_mu_reads_edge_lists(capsys, files):
    code, out = _run(capsys, 'mu', files('d4.edges', '4 4\n1 2\n1 3\n2 3\n3 4'))
    assert code == 0
    assert json.loads(out)['value'] == 1


def test_mu_sampled_is_reproducible(capsys, files):
    path = files('d40.txt', ' '.join(str(i) for i in range(1, 41)))
    first = _run(capsys, 'mu', path, '--mode', 'sampled', '--samples', '50', '--seed', '3')
    second = _run(capsys, 'mu', path, '--mode', 'sampled', '--samples', '50', '--seed', '3')
    assert first == second
    assert first[0] == 0
    result = json.loads(first[1])
    assert result['mode'] == 'SAMPLED' and result['seed'] == 3 and result['samples'] == 50


def test_mu_sampled_needs_seed(capsys, files):
    assert _run(capsys, 'mu', files('d8.txt', '1 2 3 4 5 6 7 8'), '--mode', 'sampled')[0] == 2


def test_mu_exact_cap(capsys, files, monkeypatch):
    path = files('d12.txt', ' '.join(str(i) for i in range(1, 13)))
    assert _run(capsys, '--cap', '10', 'mu', path)[0] == 2
    monkeypatch.setenv('WQO_CWLAB_CAP', '10')
    assert _run(capsys, 'mu', path)[0] == 2
    assert _run(capsys, '--cap', '12', 'mu', path)[0] == 0


@pytest.mark.parametrize('argv', [
    ['--lemma', '2', '--n', '10'],
    ['--lemma', '3', '--n', '10'],
    ['--lemma', '3', '--n', '16', '--u', '2,4,6'],
    ['--lemma', '4', '--c', '3', '--max', '4096'],
    ['--lemma', 'maxone', '--max', '1024', '--max-length', '32'],
    ['--lemma', 'diffq', '--max', '1024', '--max-length', '32'],
    ['--lemma', 'maxpower', '--max', '1024', '--max-length', '32'],
    ['--lemma', 'intiso', '--max', '128', '--max-length', '8'],
    ['--lemma', 'intiso', '--samples', '100', '--seed', '5'],
    ['--lemma', 'theorem2', '--c', '1', '--samples', '100', '--seed', '1'],
    ['--lemma', 'indorder', '--n', '6', '--c', '2'],
])
def test_verify_passes(capsys, argv):
    code, out = _run(capsys, 'verify', *argv)
    assert code == 0
    assert ': PASS (' in out.splitlines()[0]


def test_verify_json(capsys):
    code, out = _run(capsys, 'verify', '--lemma', '2', '--n', '8', '--format', 'json')
    assert code == 0
    report = json.loads(out)
    assert list(report) == ['lemma', 'passed', 'checked', 'violations', 'tightest', 'parameters']
    assert report['passed'] is True
    assert report['checked'] == sum(2 ** k for k in range(1, 9))


def test_verify_usage_errors(capsys):
    assert _run(capsys, 'verify', '--lemma', 'theorem2')[0] == 2
    assert _run(capsys, 'verify', '--lemma', 'nope')[0] == 2


def test_compare_single_odd_vertex(capsys, files):
    a, b = files('a.txt', '9'), files('b.txt', '1 3')
    code, out = _run(capsys, 'compare', a, b, '--c', '1')
    assert code == 0
    assert 'embedding: 9->1' in out
    code, out = _run(capsys, 'compare', a, b, '--c', '1', '--format', 'json')
    report = json.loads(out)
    assert report['comparable'] is True
    assert report['embedding'] == {'pairs': [[9, 1]], 'provenance': 'CONSTRUCTED_PHI'}
    assert report['oracle'] is None


def test_compare_identity(capsys, files):
    a = files('a.txt', '1 3 4 9')
    code, out = _run(capsys, 'compare', a, a, '--c', '2')
    assert code == 0
    assert 'embedding: 1->1 3->3 4->4 9->9' in out


def test_compare_incomplete_order(capsys, files):
    a, b = files('a.txt', '2'), files('b.txt', '1')
    code, out = _run(capsys, 'compare', a, b, '--c', '1')
    assert code == 0
    assert out.splitlines()[0] == 'incomparable-under-leq_c'
    code, out = _run(capsys, 'compare', a, b, '--c', '1', '--fallback-oracle')
    assert 'oracle: EMBEDS' in out


def test_compare_long_factor_needs_fallback(capsys, files):
    a, b = files('a.txt', '1 2 3'), files('b.txt', '1 2 3 4 5')
    assert _run(capsys, 'compare', a, b, '--c', '2')[0] == 2
    code, out = _run(capsys, 'compare', a, b, '--c', '2', '--fallback-oracle', '--format', 'json')
    assert code == 0
    assert json.loads(out)['oracle'] == 'EMBEDS'


def test_experiment_identical_draws(capsys):
    code, out = _run(capsys, 'experiment', '--count', '2', '--host-n', '32', '--c', '3', '--seed', '4', '--identical-draws')
    assert code == 0
    report = json.loads(out)
    assert (report['pair']['i'], report['pair']['j']) == (1, 2)
    assert list(report) == ['count', 'host_n', 'c', 'seed', 'pair']


def test_experiment_single_graph(capsys):
    code, out = _run(capsys, 'experiment', '--count', '1', '--host-n', '32', '--c', '3', '--seed', '4')
    assert code == 0
    assert json.loads(out)['pair'] is None


def test_experiment_is_reproducible(capsys):
    argv = ['experiment', '--count', '40', '--host-n', '64', '--c', '4', '--seed', '17']
    assert _run(capsys, *argv) == _run(capsys, *argv)


def test_experiment_needs_seed(capsys):
    assert _run(capsys, 'experiment', '--count', '2', '--host-n', '32', '--c', '3')[0] == 2


def test_oracle_check(capsys, files):
    code, out = _run(capsys, 'oracle-check', files('d4.txt', '1 2 3 4'), files('d16.txt', ' '.join(str(i) for i in range(1, 17))))
    assert code == 0
    assert json.loads(out)['status'] == 'EMBEDS'
    code, out = _run(capsys, 'oracle-check', files('d5.txt', '1 2 3 4 5'), files('d4b.txt', '1 2 3 4'), '--format', 'text')
    assert out.startswith('NOT_EMBEDS')


def test_antichain(capsys):
    code, out = _run(capsys, 'antichain', '--n', '4')
    assert code == 0
    report = json.loads(out)
    assert report['size'] == 3
    assert report['exhaustive'] is True
    assert _run(capsys, 'antichain', '--n', '13')[0] == 2


def test_matrix(capsys, files):
    code, out = _run(capsys, 'matrix', files('g.txt', '9'), '--c', '1')
    assert code == 0
    assert json.loads(out) == {'c': 1, 'rows': [{'l_index': 0, 'cells': [{'length': 1, 'offset': 0, 'count': 1}]}]}
    code, out = _run(capsys, 'matrix', files('g2.txt', '1 2 3 8'), '--c', '3', '--format', 'text')
    assert code == 0
    assert out.splitlines()[0].startswith('row')


def test_output_file(capsys, tmp_path):
    target = tmp_path / 'res' / 'd16.txt'
    code, out = _run(capsys, '--output', str(target), 'generate', '16')
    assert code == 0 and out == ''
    assert target.read_text().splitlines()[0] == '16 50'


def test_verbose_reports_on_stderr(capsys):
    code = cwlab.main(['--verbose', 'generate', '4'])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == '4 4\n1 2\n1 3\n2 3\n3 4\n'
    assert 'exhaustiveCap => 26' in captured.err
    assert '[INFO] generate took' in captured.err


def test_mu_sampled_checks_edge_list_input(capsys, files, monkeypatch):
    from graphio import formatEdgeList
    from powergraph import buildDn
    path = files('d30.edges', formatEdgeList(buildDn(30)))
    code, out = _run(capsys, 'mu', path, '--mode', 'sampled', '--samples', '20', '--seed', '1')
    assert code == 0
    assert json.loads(out)['violations'] == []

    # a class counter that always answers 0 must break the component bound on some sample
    monkeypatch.setattr(cwbounds, '_classCountOf', lambda adjacency, idx: 0)
    code, out = _run(capsys, 'mu', path, '--mode', 'sampled', '--samples', '20', '--seed', '1')
    assert code == 1
    assert json.loads(out)['violations'] != []


def test_mu_keeps_edge_lists_outside_d(capsys, files):
    # a triangle on 1, 2, 4 is not induced in any D_n (1 and 4 are not adjacent there)
    code, out = _run(capsys, 'mu', files('tri.edges', '3 3\n1 2\n1 4\n2 4'))
    assert code == 0
    assert json.loads(out)['value'] == 1


def test_label_max_from_config(capsys, tmp_path):
    path = tmp_path / 'small.ini'
    path.write_text('labelMax = 8\n')
    assert _run(capsys, '--config', str(path), 'generate', '16')[0] == 2
    code, out = _run(capsys, '--config', str(path), 'generate', '8', '--format', 'labels')
    assert (code, out) == (0, '1 2 3 4 5 6 7 8\n')
    # limits set by one run do not leak into the next
    assert _run(capsys, 'generate', '16')[0] == 0
