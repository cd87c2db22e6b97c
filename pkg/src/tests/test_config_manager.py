"""
Tests for the Configuration Manager module.
"""

import json

import pytest

from src.config.config_manager import DEFAULT_CONFIG, DEPTH_CAP_ENV, ConfigManager


@pytest.fixture(autouse=True)
def no_environment(monkeypatch):
    monkeypatch.delenv(DEPTH_CAP_ENV, raising=False)


@pytest.fixture
def config_file(tmp_path):
    def write(data):
        path = tmp_path / 'trichain.json'
        path.write_text(json.dumps(data) if not isinstance(data, str) else data)
        return str(path)
    return write


def test_defaults(tmp_path):
    """Test that a missing file gives the defaults."""
    config = ConfigManager(str(tmp_path / 'missing.json')).load_config()
    assert config == DEFAULT_CONFIG
    assert config is not DEFAULT_CONFIG


def test_file_merge(config_file):
    """Test that file values override nested defaults."""
    manager = ConfigManager(config_file({'isolation': {'depth_cap': 32}, 'threads': 4}))
    config = manager.load_config()
    assert config['isolation'] == {'depth_cap': 32, 'width': None}
    assert config['threads'] == 4
    assert config['dualspace']['cap'] == 64


def test_malformed_file(config_file):
    """Test that an unreadable file falls back to the defaults."""
    assert ConfigManager(config_file('{not json')).load_config() == DEFAULT_CONFIG
    assert ConfigManager(config_file('[1, 2]')).load_config() == DEFAULT_CONFIG


def test_environment_override(config_file, monkeypatch):
    """Test the depth cap environment variable."""
    monkeypatch.setenv(DEPTH_CAP_ENV, '40')
    manager = ConfigManager(config_file({'isolation': {'depth_cap': 32}}))
    assert manager.load_config()['isolation']['depth_cap'] == 40


@pytest.mark.parametrize('raw', ['0', '-3', 'deep'])
def test_environment_ignored(raw, tmp_path, monkeypatch):
    """Test that invalid environment values are ignored."""
    monkeypatch.setenv(DEPTH_CAP_ENV, raw)
    assert ConfigManager(str(tmp_path / 'none.json')).load_config()['isolation']['depth_cap'] == 256


@pytest.mark.parametrize('key, value', [
    ('isolation.depth_cap', 0),
    ('dualspace.cap', 'many'),
    ('threads', True),
    ('decomposition.cache', 'yes'),
    ('isolation.width', '-1/2'),
    ('isolation.width', 'wide'),
    ('output.format', 'xml'),
    ('logging.level', 'LOUD'),
])
def test_validation(key, value, tmp_path):
    """Test that invalid values are replaced by their defaults."""
    manager = ConfigManager(str(tmp_path / 'none.json'))
    manager.load_config()
    section, _, name = key.rpartition('.')
    update = {section: {name: value}} if section else {name: value}
    config = manager.update_config(update)
    assert manager.get_value(key) == manager.get_default(key)
    assert config is manager.config


def test_valid_width(tmp_path):
    """Test that a positive rational width is kept."""
    manager = ConfigManager(str(tmp_path / 'none.json'))
    manager.load_config()
    manager.update_config({'isolation': {'width': '1/1024'}})
    assert manager.get_value('isolation.width') == '1/1024'


def test_get_and_set_value(tmp_path):
    """Test dot notation access."""
    manager = ConfigManager(str(tmp_path / 'none.json'))
    manager.load_config()
    manager.set_value('output.format', 'json')
    assert manager.get_value('output.format') == 'json'
    assert manager.get_value('output.missing', 'fallback') == 'fallback'
    manager.set_value('extra.nested.key', 1)
    assert manager.get_value('extra.nested.key') == 1


def test_get_config_loads_once(tmp_path):
    """Test lazy loading."""
    manager = ConfigManager(str(tmp_path / 'none.json'))
    config = manager.get_config()
    assert manager.get_config() is config


def test_save_config(tmp_path):
    """Test saving and reloading."""
    path = tmp_path / 'nested' / 'trichain.json'
    manager = ConfigManager(str(path))
    manager.load_config()
    manager.set_value('threads', 3)
    assert manager.save_config()
    assert ConfigManager(str(path)).load_config()['threads'] == 3


def test_save_config_failure(tmp_path):
    """Test that a failed save reports False."""
    manager = ConfigManager(str(tmp_path))
    manager.load_config()
    assert manager.save_config() is False
