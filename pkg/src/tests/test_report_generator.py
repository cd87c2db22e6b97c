"""
Tests for the Report Generator module.
"""

import csv
import json

import pytest

from src.core.isolate import iso_mult
from src.core.reg2sim import reg2sim
from src.reports.report_generator import (
    STABLE_KEYS,
    BranchRecord,
    ReportGenerator,
    ResultDocument,
    ZeroRecord,
    decomposition_document,
    zeros_document,
)
from src.tests.helpers import XY


@pytest.fixture
def decomposition_doc(worked):
    return decomposition_document('decompose', XY, reg2sim(worked), ms=12)


@pytest.fixture
def isolate_doc(worked):
    return zeros_document(XY, iso_mult(worked), reg2sim(worked), ms=3)


def test_stable_keys(decomposition_doc):
    """Test that every document carries the stable keys."""
    data = decomposition_doc.to_dict()
    assert list(data)[:5] == list(STABLE_KEYS)
    assert data['vars'] == ['x', 'y']
    assert len(data['branches']) == 4
    assert sorted(b['product'] for b in data['branches']) == [1, 1, 2, 2]


def test_json_round_trip(isolate_doc):
    """Test that JSON output parses back into the same document."""
    isolate_doc.extras['note'] = 'kept'
    restored = ResultDocument.from_json(isolate_doc.to_json())
    assert restored == isolate_doc
    assert restored.extras == {'note': 'kept'}


def test_zero_record(isolate_doc):
    """Test zero records of the worked example."""
    first = isolate_doc.zeros[0]
    assert first.box == [['-1', '-1'], ['0', '0']]
    assert first.multiplicity == 2
    assert first.box_text() == '[-1, -1] x [0, 0]'
    assert ZeroRecord.from_dict(first.to_dict()) == first
    assert 'branch' not in ZeroRecord([['0', '1']], 1).to_dict()


def test_branch_record():
    """Test branch records from plain dictionaries."""
    record = BranchRecord.from_dict({'chain': ['x', 'y^2'], 'array': ['1', '2'], 'product': '2'})
    assert record == BranchRecord(['x', 'y^2'], [1, 2], 2)


def test_render_text_branches(decomposition_doc):
    """Test text rendering of a decomposition."""
    text = ReportGenerator(decomposition_doc).render()
    lines = text.splitlines()
    assert lines[0] == 'decompose: variables x, y'
    assert lines[1] == '4 simple branches'
    assert lines[2].startswith('  [1] ')
    assert 'array=[' in lines[3] and 'product=' in lines[3]
    assert lines[-1] == 'time: 12 ms'


def test_render_text_isolate(isolate_doc):
    """Test text rendering of isolated zeros."""
    text = ReportGenerator(isolate_doc).render('text')
    assert '2 real zeros' in text
    assert '  [1] [-1, -1] x [0, 0]  multiplicity=2' in text


def test_render_text_commands():
    """Test the command specific summary lines."""
    mult = ResultDocument('mult', ['x'], extras={'multiplicity': 20})
    assert 'multiplicity: 20' in ReportGenerator(mult).render_text()
    oracle = ResultDocument('oracle', ['x'], extras={'multiplicity': 3})
    assert 'dual space dimension: 3' in ReportGenerator(oracle).render_text()
    check = ResultDocument('check', ['x'], extras={'regular': False, 'reason': 'initial vanishes'})
    lines = ReportGenerator(check).render_text().splitlines()
    assert lines[1:3] == ['regular: false', 'reason: initial vanishes']


def test_render_table():
    """Test the aligned corpus table."""
    rows = [
        {'system': 'T1', 'vars': 2, 'zero': '1,1', 'multiplicity': 1, 'expected': 1, 'oracle': 1, 'ms': 4},
        {'system': 'T10', 'vars': 6, 'zero': '0,0,0,0,0,0', 'multiplicity': 24, 'expected': 24,
         'oracle': None, 'ms': 90},
    ]
    text = ReportGenerator(ResultDocument('table', [], extras={'rows': rows})).render_text()
    lines = text.splitlines()
    assert lines[0] == 'table:'
    assert lines[1].split() == ['system', 'vars', 'zero', 'multiplicity', 'expected', 'oracle', 'ms']
    assert lines[3].split() == ['T10', '6', '0,0,0,0,0,0', '24', '24', '-', '90']
    assert lines[2].index('2') == lines[1].index('vars')


def test_render_json(decomposition_doc):
    """Test JSON rendering."""
    data = json.loads(ReportGenerator(decomposition_doc).render('json'))
    assert data['command'] == 'decompose'
    assert data['ms'] == 12


def test_generate_csv_branches(decomposition_doc, tmp_path):
    """Test CSV report generation for branches."""
    path = ReportGenerator(decomposition_doc).generate_csv(str(tmp_path / 'out' / 'branches.csv'))
    with open(path, newline='', encoding='utf-8') as f:
        rows = list(csv.reader(f))
    assert rows[0] == ['index', 'chain', 'array', 'product']
    assert len(rows) == 5
    assert rows[1][0] == '1'
    assert '; ' in rows[1][1]


def test_generate_csv_zeros(isolate_doc, tmp_path):
    """Test CSV report generation for isolated zeros."""
    path = ReportGenerator(isolate_doc).generate_csv(str(tmp_path / 'zeros.csv'))
    with open(path, newline='', encoding='utf-8') as f:
        rows = list(csv.reader(f))
    assert rows[0] == ['index', 'branch', 'multiplicity', 'box']
    assert rows[1][2:] == ['2', '[-1, -1] x [0, 0]']


def test_generate_csv_unwritable(decomposition_doc, tmp_path):
    """Test that write failures propagate."""
    target = tmp_path / 'taken'
    target.mkdir()
    with pytest.raises(OSError):
        ReportGenerator(decomposition_doc).generate_csv(str(target))
