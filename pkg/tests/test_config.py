import os

import pytest

from config import Config


def test_defaults():
    config = Config()
    assert config.exhaustiveCap == 26
    assert config.labelMax == 2 ** 40
    assert config.oracleBudget == 1000000
    assert config.verbose is False


def test_shipped_config_file():
    config = Config()
    config.fillFromDicFile(os.path.join(os.path.dirname(__file__), '..', 'cwlabConfig.ini'))
    assert config.exhaustiveCap == 26
    assert config.labelMax == 2 ** 40
    assert config.samples == 10000


def test_fill_from_file(tmp_path, capsys):
    path = tmp_path / 'lab.ini'
    path.write_text('#comment\nexhaustiveCap = 20 # smaller machine\nverbose = True\nnoSuchKey = 3\n')
    config = Config()
    config.fillFromDicFile(str(path))
    assert config.exhaustiveCap == 20
    assert config.verbose is True
    assert 'unknown config key' in capsys.readouterr().err


def test_invalid_cap_in_file(tmp_path):
    path = tmp_path / 'lab.ini'
    path.write_text('exhaustiveCap = 63\n')
    with pytest.raises(ValueError):
        Config().fillFromDicFile(str(path))


def test_environment_override(monkeypatch):
    monkeypatch.setenv('WQO_CWLAB_CAP', '12')
    config = Config()
    config.applyEnvironment()
    assert config.exhaustiveCap == 12

    monkeypatch.setenv('WQO_CWLAB_CAP', 'twelve')
    with pytest.raises(ValueError):
        Config().applyEnvironment()


def test_label_max_range(tmp_path):
    path = tmp_path / 'lab.ini'
    path.write_text('labelMax = 4611686018427387905\n')
    with pytest.raises(ValueError):
        Config().fillFromDicFile(str(path))
    path.write_text('labelMax = 4611686018427387904\n')
    config = Config()
    config.fillFromDicFile(str(path))
    assert config.labelMax == 2 ** 62
