"""
Report Generator

Builds ResultDocuments from decompositions, multiplicity queries and
isolated zeros, and renders them as text, JSON or CSV.
"""

import csv
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from src.core.arith import VarOrder
from src.core.isolate import IsolatedZero
from src.core.reg2sim import Decomposition, SimpleBranch

logger = logging.getLogger(__name__)

STABLE_KEYS = ('command', 'vars', 'branches', 'zeros', 'ms')


@dataclass(frozen=True)
class BranchRecord:
    chain: List[str]
    array: List[int]
    product: int

    @classmethod
    def from_branch(cls, branch: SimpleBranch) -> 'BranchRecord':
        return cls(branch.chain.format(), list(branch.array), branch.product)

    def to_dict(self) -> Dict[str, Any]:
        return {'chain': list(self.chain), 'array': list(self.array), 'product': self.product}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BranchRecord':
        return cls([str(p) for p in data['chain']], [int(a) for a in data['array']], int(data['product']))


@dataclass(frozen=True)
class ZeroRecord:
    """A box of ``[lo, hi]`` fraction strings with its multiplicity."""

    box: List[List[str]]
    multiplicity: int
    branch: Optional[int] = None

    @classmethod
    def from_zero(cls, zero: IsolatedZero) -> 'ZeroRecord':
        return cls(zero.box.to_strings(), zero.multiplicity, zero.branch_index)

    def to_dict(self) -> Dict[str, Any]:
        data = {'box': [list(pair) for pair in self.box], 'multiplicity': self.multiplicity}
        if self.branch is not None:
            data['branch'] = self.branch
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ZeroRecord':
        branch = data.get('branch')
        return cls(
            [[str(lo), str(hi)] for lo, hi in data['box']],
            int(data['multiplicity']),
            None if branch is None else int(branch),
        )

    def box_text(self) -> str:
        return ' x '.join(f"[{lo}, {hi}]" for lo, hi in self.box)


@dataclass
class ResultDocument:
    """
    Result of one CLI command.

    Args:
        command: Command name echoed back
        vars: Variable names, ascending
        branches: Simple branches with arrays and products
        zeros: Isolated real zeros
        ms: Elapsed wall time in milliseconds
        extras: Command specific keys such as ``multiplicity`` or ``rows``
    """

    command: str
    vars: List[str]
    branches: List[BranchRecord] = field(default_factory=list)
    zeros: List[ZeroRecord] = field(default_factory=list)
    ms: int = 0
    extras: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'command': self.command,
            'vars': list(self.vars),
            'branches': [b.to_dict() for b in self.branches],
            'zeros': [z.to_dict() for z in self.zeros],
            'ms': self.ms,
        }
        data.update(self.extras)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ResultDocument':
        return cls(
            command=data['command'],
            vars=[str(v) for v in data['vars']],
            branches=[BranchRecord.from_dict(b) for b in data.get('branches', [])],
            zeros=[ZeroRecord.from_dict(z) for z in data.get('zeros', [])],
            ms=int(data.get('ms', 0)),
            extras={k: v for k, v in data.items() if k not in STABLE_KEYS},
        )

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> 'ResultDocument':
        return cls.from_dict(json.loads(text))


def decomposition_document(command: str, order: VarOrder, decomposition: Decomposition,
                           ms: int = 0) -> ResultDocument:
    return ResultDocument(
        command=command,
        vars=list(order.names),
        branches=[BranchRecord.from_branch(b) for b in decomposition.branches],
        ms=ms,
    )


def zeros_document(order: VarOrder, zeros: Sequence[IsolatedZero], decomposition: Decomposition,
                   ms: int = 0) -> ResultDocument:
    document = decomposition_document('isolate', order, decomposition, ms)
    document.zeros = [ZeroRecord.from_zero(z) for z in zeros]
    return document


class ReportGenerator:
    """
    Renders a ResultDocument for stdout or a CSV file.
    """

    def __init__(self, document: ResultDocument):
        self.document = document
        logger.debug(f"Initialized report generator for command: {document.command}")

    def render(self, output_format: str = 'text') -> str:
        if output_format == 'json':
            return self.render_json()
        return self.render_text()

    def render_json(self) -> str:
        return self.document.to_json()

    def render_text(self) -> str:
        """
        Human readable rendering.

        Returns:
            Text ending without a newline
        """
        doc = self.document
        lines = [f"{doc.command}: variables {', '.join(doc.vars)}" if doc.vars else f"{doc.command}:"]

        if doc.command == 'check':
            lines.append(f"regular: {'true' if doc.extras.get('regular') else 'false'}")
            if doc.extras.get('reason'):
                lines.append(f"reason: {doc.extras['reason']}")
        if doc.command == 'mult':
            lines.append(f"multiplicity: {doc.extras.get('multiplicity')}")
        if doc.command == 'oracle':
            lines.append(f"dual space dimension: {doc.extras.get('multiplicity')}")
        if doc.command == 'table':
            lines.extend(self._table_lines(doc.extras.get('rows', [])))

        if doc.branches:
            lines.append(f"{len(doc.branches)} simple branch{'es' if len(doc.branches) != 1 else ''}")
            for number, branch in enumerate(doc.branches, start=1):
                lines.append(f"  [{number}] {', '.join(branch.chain)}")
                lines.append(f"      array=[{', '.join(str(a) for a in branch.array)}] product={branch.product}")
        if doc.command == 'isolate':
            lines.append(f"{len(doc.zeros)} real zero{'s' if len(doc.zeros) != 1 else ''}")
            for number, zero in enumerate(doc.zeros, start=1):
                lines.append(f"  [{number}] {zero.box_text()}  multiplicity={zero.multiplicity}")
        lines.append(f"time: {doc.ms} ms")
        return '\n'.join(lines)

    @staticmethod
    def _table_lines(rows: List[Dict[str, Any]]) -> List[str]:
        header = ('system', 'vars', 'zero', 'multiplicity', 'expected', 'oracle', 'ms')
        table = [header] + [
            tuple(str('-' if row.get(key) is None else row.get(key)) for key in header)
            for row in rows
        ]
        widths = [max(len(r[i]) for r in table) for i in range(len(header))]
        return ['  '.join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in table]

    def csv_rows(self) -> List[List[Any]]:
        doc = self.document
        if doc.command == 'isolate':
            rows = [['index', 'branch', 'multiplicity', 'box']]
            for number, zero in enumerate(doc.zeros, start=1):
                branch = '' if zero.branch is None else zero.branch + 1
                rows.append([number, branch, zero.multiplicity, zero.box_text()])
            return rows
        if doc.command == 'table':
            header = ['system', 'vars', 'zero', 'multiplicity', 'expected', 'oracle', 'ms']
            return [header] + [[row.get(key, '') for key in header] for row in doc.extras.get('rows', [])]
        rows = [['index', 'chain', 'array', 'product']]
        for number, branch in enumerate(doc.branches, start=1):
            rows.append([number, '; '.join(branch.chain), ' '.join(str(a) for a in branch.array), branch.product])
        return rows

    def generate_csv(self, path: str) -> str:
        """
        Write the CSV rendering.

        Args:
            path: Destination file

        Returns:
            Path to the generated CSV file
        """
        logger.info(f"Generating CSV report for {self.document.command} at {path}")
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        try:
            with open(path, 'w', newline='', encoding='utf-8') as f:
                writer = csv.writer(f)
                writer.writerows(self.csv_rows())
        except OSError:
            logger.error(f"Error writing CSV report {path}", exc_info=True)
            raise
        return path
