"""
Tests for the command line interface.
"""

import csv
import json
import os

import pytest

from main import main, parse_arguments
from src.core.reg2sim import _cache


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def run(workdir):
    config = str(workdir / 'trichain.json')

    def invoke(*argv):
        return main(list(argv) + ['--config', config])
    return invoke


@pytest.fixture
def system(workdir):
    def write(name, polys, names='x y'):
        path = workdir / name
        path.write_text(f"vars: {names}\nchain:\n" + '\n'.join(polys) + '\n')
        return str(path)
    return write


def corpus_file(corpus_path, name):
    return os.path.join(corpus_path, name)


def test_parse_arguments():
    """Test that common flags follow the subcommand."""
    args = parse_arguments(['isolate', 'f.sys', '--width', '1/8', '--threads', '2', '--no-split'])
    assert args.command == 'isolate'
    assert args.width == '1/8'
    assert args.threads == 2
    assert args.no_split


def test_mult(run, corpus_path, capsys):
    """Test the mult command text output."""
    assert run('mult', corpus_file(corpus_path, 't2.sys'), '--point', '1,1') == 0
    out = capsys.readouterr().out
    assert out.startswith('mult: variables x, y')
    assert 'multiplicity: 20' in out


def test_mult_json(run, corpus_path, capsys):
    """Test the mult command JSON output."""
    assert run('mult', corpus_file(corpus_path, 'worked.sys'), '--point', '1+i,0', '--json') == 0
    data = json.loads(capsys.readouterr().out)
    assert data['command'] == 'mult'
    assert data['multiplicity'] == 2
    assert data['point'] == ['1+i', '0']
    assert data['branches'][0]['product'] == 2
    assert isinstance(data['ms'], int)


def test_mult_not_a_zero(run, corpus_path, capsys):
    """Test the exit code for a point off the chain."""
    assert run('mult', corpus_file(corpus_path, 't1.sys'), '--point', '5,5') == 1
    assert 'error: point is not a zero' in capsys.readouterr().err


def test_bad_point(run, corpus_path, capsys):
    """Test the exit code for a malformed point."""
    assert run('mult', corpus_file(corpus_path, 't1.sys'), '--point', '1') == 2
    assert 'error:' in capsys.readouterr().err


def test_decompose_csv(run, corpus_path, workdir, capsys):
    """Test the decompose command CSV report."""
    target = workdir / 'branches.csv'
    assert run('decompose', corpus_file(corpus_path, 'worked.sys'), '--csv', str(target)) == 0
    assert '4 simple branches' in capsys.readouterr().out
    with open(target, newline='', encoding='utf-8') as f:
        assert len(list(csv.reader(f))) == 5


def test_decompose_no_split(run, system, capsys):
    """Test the decompose command without rational splitting."""
    path = system('split.sys', ['x^2 - x', 'y - x'])
    assert run('decompose', path, '--no-split', '--json') == 0
    assert len(json.loads(capsys.readouterr().out)['branches']) == 1


def test_isolate(run, corpus_path, capsys):
    """Test the isolate command with a refinement width."""
    assert run('isolate', corpus_file(corpus_path, 'worked.sys'), '--width', '1/16', '--json') == 0
    data = json.loads(capsys.readouterr().out)
    assert [z['multiplicity'] for z in data['zeros']] == [2, 1]
    assert data['zeros'][1]['box'] == [['-1', '-1'], ['1/2', '1/2']]


def test_isolate_bad_width(run, corpus_path, capsys):
    """Test the exit code for a zero width."""
    assert run('isolate', corpus_file(corpus_path, 'worked.sys'), '--width', '0') == 1
    assert 'width must be positive' in capsys.readouterr().err


def test_oracle(run, system, capsys):
    """Test the oracle command."""
    path = system('mono.sys', ['x^2', 'y^3'])
    assert run('oracle', path, '--point', '0,0') == 0
    assert 'dual space dimension: 6' in capsys.readouterr().out


def test_oracle_needs_rational_point(run, corpus_path, capsys):
    """Test that the oracle refuses complex points."""
    assert run('oracle', corpus_file(corpus_path, 'worked.sys'), '--point', '1+i,0') == 1
    assert 'rational point' in capsys.readouterr().err


def test_check(run, system, capsys):
    """Test the check command on regular and non-regular chains."""
    assert run('check', system('good.sys', ['x^2 - 1', 'y^2 - x']), '--json') == 0
    data = json.loads(capsys.readouterr().out)
    assert data['regular'] is True
    assert data['simple'] is True

    assert run('check', system('bad.sys', ['x^2 - x', 'x*y - 1'])) == 0
    out = capsys.readouterr().out
    assert 'regular: false' in out
    assert 'reason:' in out


def test_parse_error_exit_code(run, workdir, capsys):
    """Test the exit code and location of a parse error."""
    path = workdir / 'broken.sys'
    path.write_text("vars: x y\nchain:\n2x\n")
    assert run('decompose', str(path)) == 2
    assert 'line 3, column 2' in capsys.readouterr().err


def test_missing_file(run, workdir):
    """Test the exit code for an absent file."""
    assert run('decompose', str(workdir / 'absent.sys')) == 2


def _small_corpus(directory, expected):
    directory.mkdir()
    (directory / 'a.sys').write_text("vars: x y\nchain:\nx^2\ny - x\n")
    (directory / 'b.sys').write_text("vars: x\nchain:\nx^3*(x - 1)\n")
    (directory / 'index.json').write_text(json.dumps({'systems': [
        {'name': 'A', 'file': 'a.sys', 'zero': ['0', '0'], 'multiplicity': expected, 'oracle': True},
        {'name': 'B', 'file': 'b.sys', 'zero': ['0'], 'multiplicity': 3},
        {'name': 'C', 'file': 'b.sys', 'zero': ['1'], 'multiplicity': 1, 'extended': True},
    ]}))
    return str(directory)


def test_table(run, workdir, capsys):
    """Test the table command with the oracle column."""
    corpus = _small_corpus(workdir / 'corpus', 2)
    assert run('table', '--corpus', corpus, '--oracle', '--json', '--threads', '2') == 0
    rows = json.loads(capsys.readouterr().out)['rows']
    assert [(r['system'], r['multiplicity'], r['oracle']) for r in rows] == [('A', 2, 2), ('B', 3, None)]


def test_table_extended(run, workdir, capsys):
    """Test that extended systems are listed on request."""
    corpus = _small_corpus(workdir / 'corpus', 2)
    assert run('table', '--corpus', corpus, '--extended') == 0
    assert 'C ' in capsys.readouterr().out


def test_table_mismatch(run, workdir, capsys):
    """Test the exit code when a multiplicity differs from the index."""
    corpus = _small_corpus(workdir / 'corpus', 5)
    assert run('table', '--corpus', corpus) == 1
    assert 'A: multiplicity 2, expected 5' in capsys.readouterr().err


def test_save_config(run, workdir, system):
    """Test saving the effective configuration."""
    assert run('check', system('good.sys', ['x', 'y']), '--threads', '3', '--save-config') == 0
    saved = json.loads((workdir / 'trichain.json').read_text())
    assert saved['threads'] == 3


def test_isolate_without_cache(run, corpus_path):
    """Test that --no-cache leaves the decomposition cache empty."""
    assert run('isolate', corpus_file(corpus_path, 'worked.sys'), '--no-cache') == 0
    assert len(_cache) == 0


@pytest.mark.slow
def test_mult_on_long_coefficients(run, corpus_path, capsys):
    """Test the CLI on the system whose intermediate coefficients run to thousands of digits."""
    assert run('mult', corpus_file(corpus_path, 't4.sys'), '--point', '2,1') == 0
    assert 'multiplicity: 105' in capsys.readouterr().out
