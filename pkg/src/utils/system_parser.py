"""
System File Parser

Parses polynomial text and polynomial system files into exact polynomials
and triangular sets, and loads the shipped corpus index.

File format::

    # comment
    vars: x y
    chain:
    x^3 - x^2 + 2
    (x^5+x)*y^3 - x^3*y^2
"""

import json
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.core.arith import MPoly, VarOrder
from src.core.chains import TriangularSet
from src.core.errors import DomainError, ParseError

logger = logging.getLogger(__name__)


class SystemParseError(ParseError):
    """Syntax or structure error in a polynomial or system file."""


_TOKEN = re.compile(r'\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()])|(?P<bad>\S))')
_VARS_LINE = re.compile(r'^vars\s*:(?P<names>.*)$', re.IGNORECASE)
_CHAIN_LINE = re.compile(r'^chain\s*:\s*$', re.IGNORECASE)
_NAME = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


class PolynomialParser:
    """
    Recursive descent parser for polynomial expressions.

    Integer literals, variable names, ``+ - * ^`` and parentheses; products
    need an explicit ``*``.
    """

    def __init__(self, order: VarOrder, line: Optional[int] = None, column_offset: int = 0):
        """
        Initialize the parser.

        Args:
            order: Variable order resolving names to indices
            line: Line number reported in errors
            column_offset: Column of the expression within its line, 0-based
        """
        self.order = order
        self.line = line
        self.column_offset = column_offset
        self.tokens: List[Token] = []
        self.position = 0
        self._end_column = column_offset + 1

    def _error(self, message: str, column: Optional[int] = None) -> SystemParseError:
        if column is None:
            token = self._peek()
            column = token.column if token else self._end_column
        return SystemParseError(message, line=self.line, column=column)

    def _tokenize(self, text: str) -> List[Token]:
        tokens = []
        self._end_column = self.column_offset + len(text.rstrip()) + 1
        for match in _TOKEN.finditer(text):
            kind = match.lastgroup
            if kind is None:
                continue
            column = self.column_offset + match.start(kind) + 1
            if kind == 'bad':
                raise SystemParseError(f"unexpected character {match.group(kind)!r}", line=self.line, column=column)
            tokens.append(Token(kind, match.group(kind), column))
        return tokens

    def _peek(self) -> Optional[Token]:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def _accept(self, *ops: str) -> Optional[Token]:
        token = self._peek()
        if token and token.kind == 'op' and token.text in ops:
            self.position += 1
            return token
        return None

    def parse(self, text: str) -> MPoly:
        self.tokens = self._tokenize(text)
        self.position = 0
        if not self.tokens:
            raise self._error("empty expression")
        result = self._expression()
        token = self._peek()
        if token is not None:
            if token.kind in ('number', 'name') or token.text == '(':
                raise self._error("implicit multiplication is not allowed; use '*'")
            raise self._error(f"unexpected {token.text!r}")
        return result

    def _expression(self) -> MPoly:
        negative = self._accept('-') is not None
        if not negative:
            self._accept('+')
        result = self._term()
        if negative:
            result = -result
        while True:
            op = self._accept('+', '-')
            if op is None:
                return result
            term = self._term()
            result = result + term if op.text == '+' else result - term

    def _term(self) -> MPoly:
        result = self._factor()
        while self._accept('*'):
            result = result * self._factor()
        return result

    def _factor(self) -> MPoly:
        base = self._base()
        if self._accept('^'):
            token = self._peek()
            if token is None or token.kind != 'number':
                raise self._error("exponent must be a non-negative integer literal")
            self.position += 1
            return base ** int(token.text)
        return base

    def _base(self) -> MPoly:
        token = self._peek()
        if token is None:
            raise self._error("unexpected end of expression")
        if token.kind == 'number':
            self.position += 1
            return MPoly.constant(int(token.text))
        if token.kind == 'name':
            self.position += 1
            if token.text not in self.order.names:
                raise self._error(f"unknown variable {token.text!r}", token.column)
            return MPoly.variable(self.order.index(token.text))
        if self._accept('('):
            inner = self._expression()
            if not self._accept(')'):
                raise self._error("missing ')'")
            return inner
        raise self._error(f"unexpected {token.text!r}")


def parse_polynomial(text: str, order: VarOrder, line: Optional[int] = None, column_offset: int = 0) -> MPoly:
    return PolynomialParser(order, line, column_offset).parse(text)


@dataclass(frozen=True)
class SystemFile:
    """
    A parsed system file.

    Args:
        order: Declared variables, ascending
        chain: Polynomial texts in file order
        source: File name or other description of the input
    """

    order: VarOrder
    chain: Tuple[str, ...]
    source: str = '<string>'


def _strip_comment(line: str) -> str:
    return line.split('#', 1)[0].rstrip()


def read_system_text(text: str, source: str = '<string>') -> Tuple[SystemFile, TriangularSet]:
    order = None
    in_chain = False
    texts: List[str] = []
    polys: List[MPoly] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if order is None:
            match = _VARS_LINE.match(line.strip())
            if not match:
                raise SystemParseError("expected 'vars:' line", line=number, column=1)
            names = [n for n in re.split(r'[\s,]+', match.group('names').strip()) if n]
            if not names:
                raise SystemParseError("no variables declared", line=number, column=len(line) + 1)
            for name in names:
                if not _NAME.match(name):
                    raise SystemParseError(f"invalid variable name {name!r}", line=number, column=line.find(name) + 1)
            try:
                order = VarOrder(tuple(names))
            except DomainError as e:
                raise SystemParseError(str(e), line=number, column=1) from None
            continue
        if not in_chain:
            if not _CHAIN_LINE.match(line.strip()):
                raise SystemParseError("expected 'chain:' line", line=number, column=1)
            in_chain = True
            continue

        offset = len(line) - len(line.lstrip())
        poly = parse_polynomial(line.strip(), order, line=number, column_offset=offset)
        if poly.is_constant():
            raise SystemParseError("constant polynomial in chain", line=number, column=offset + 1)
        if polys and poly.lv == polys[-1].lv:
            raise SystemParseError(
                f"duplicate leading variable {order.name(poly.lv)}", line=number, column=offset + 1
            )
        if polys and poly.lv < polys[-1].lv:
            raise SystemParseError(
                f"leading variables not ascending: {order.name(poly.lv)} after {order.name(polys[-1].lv)}",
                line=number,
                column=offset + 1,
            )
        texts.append(line.strip())
        polys.append(poly)

    if order is None:
        raise SystemParseError("missing 'vars:' line")
    if not in_chain:
        raise SystemParseError("missing 'chain:' line")
    if not polys:
        raise SystemParseError("empty chain")
    logger.debug(f"Parsed {len(polys)} polynomials in {len(order)} variables from {source}")
    return SystemFile(order, tuple(texts), source), TriangularSet(tuple(polys), order)


def parse_system(text: str) -> Tuple[VarOrder, TriangularSet]:
    """
    Parse the text of a system file.

    Returns:
        The variable order and the triangular set

    Raises:
        SystemParseError: On syntax errors or non-triangular input, with
            line and column
    """
    system, triangular = read_system_text(text)
    return system.order, triangular


def load_system(path: str) -> Tuple[VarOrder, TriangularSet]:
    """Read and parse a system file."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise SystemParseError(f"cannot read {path}: {e.strerror}") from e
    try:
        system, triangular = read_system_text(text, source=path)
    except SystemParseError as e:
        error = SystemParseError(f"{path}: {e}")
        error.line, error.column = e.line, e.column
        raise error from e
    return system.order, triangular


@dataclass(frozen=True)
class CorpusEntry:
    """
    A shipped benchmark system.

    Args:
        name: Short name, e.g. T2
        file: Path of the system file
        zero: Listed zero as coordinate strings
        multiplicity: Expected local multiplicity at ``zero``
        oracle: Whether the dual space oracle is feasible at desk scale
        extended: Whether the entry is excluded from default runs
    """

    name: str
    file: str
    zero: Tuple[str, ...]
    multiplicity: int
    oracle: bool = False
    extended: bool = False
    description: str = ''
    extra: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def load(self) -> Tuple[VarOrder, TriangularSet]:
        return load_system(self.file)


def load_corpus(path: str) -> List[CorpusEntry]:
    """
    Load ``index.json`` from a corpus directory.

    Raises:
        SystemParseError: If the index is missing or malformed
    """
    index_path = os.path.join(path, 'index.json')
    try:
        with open(index_path, 'r', encoding='utf-8') as f:
            index = json.load(f)
    except OSError as e:
        raise SystemParseError(f"cannot read corpus index {index_path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise SystemParseError(f"malformed corpus index {index_path}: {e.msg}", line=e.lineno, column=e.colno) from e

    entries = []
    for item in index.get('systems', []):
        try:
            known = {'name', 'file', 'zero', 'multiplicity', 'oracle', 'extended', 'description'}
            entries.append(CorpusEntry(
                name=item['name'],
                file=os.path.join(path, item['file']),
                zero=tuple(str(c) for c in item['zero']),
                multiplicity=int(item['multiplicity']),
                oracle=bool(item.get('oracle', False)),
                extended=bool(item.get('extended', False)),
                description=item.get('description', ''),
                extra={k: v for k, v in item.items() if k not in known},
            ))
        except (KeyError, TypeError, ValueError) as e:
            raise SystemParseError(f"malformed corpus entry {item!r}: {e}") from e
    logger.info(f"Loaded {len(entries)} corpus systems from {path}")
    return entries
