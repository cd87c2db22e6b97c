"""
Point Parser

Parses query points given as comma separated Gaussian rationals, for
example ``1+1i,0`` or ``-1/2,3/4-2i``.
"""

import logging
import re
from fractions import Fraction
from typing import List, Optional

from src.core.arith import GaussianRational
from src.core.errors import ParseError

logger = logging.getLogger(__name__)

_RATIONAL = r'\d+(?:/\d+)?'


class PointParseError(ParseError):
    """A coordinate is not a Gaussian rational."""


class PointParser:
    """Regex driven parser for Gaussian-rational coordinates."""

    def __init__(self):
        self.patterns = {
            'real': re.compile(rf'^(?P<re>[+-]?{_RATIONAL})$'),
            'imaginary': re.compile(rf'^(?P<sign>[+-]?)(?P<im>{_RATIONAL})?\*?i$'),
            'complex': re.compile(rf'^(?P<re>[+-]?{_RATIONAL})(?P<sign>[+-])(?P<im>{_RATIONAL})?\*?i$'),
        }

    @staticmethod
    def _rational(text: str, column: int) -> Fraction:
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise PointParseError(f"zero denominator in {text!r}", column=column) from None

    def _imaginary(self, sign: str, magnitude: Optional[str], column: int) -> Fraction:
        value = self._rational(magnitude, column) if magnitude else Fraction(1)
        return -value if sign == '-' else value

    def parse_coordinate(self, text: str, column: int = 1) -> GaussianRational:
        text = re.sub(r'\s+', '', text)
        match = self.patterns['real'].match(text)
        if match:
            return GaussianRational(self._rational(match.group('re'), column))
        match = self.patterns['imaginary'].match(text)
        if match:
            return GaussianRational(0, self._imaginary(match.group('sign'), match.group('im'), column))
        match = self.patterns['complex'].match(text)
        if match:
            return GaussianRational(
                self._rational(match.group('re'), column),
                self._imaginary(match.group('sign'), match.group('im'), column),
            )
        raise PointParseError(f"not a Gaussian rational: {text!r}", column=column)

    def parse(self, text: str, size: Optional[int] = None) -> List[GaussianRational]:
        """
        Parse a comma separated point.

        Args:
            text: Point text such as ``1+1i,0``
            size: Expected number of coordinates

        Returns:
            The coordinates in order

        Raises:
            PointParseError: If a coordinate is malformed or the size is wrong
        """
        coordinates = []
        column = 1
        for part in text.split(','):
            coordinates.append(self.parse_coordinate(part, column))
            column += len(part) + 1
        if size is not None and len(coordinates) != size:
            raise PointParseError(f"expected {size} coordinates, got {len(coordinates)}")
        logger.debug(f"Parsed point {', '.join(str(c) for c in coordinates)}")
        return coordinates


def parse_point(text: str, size: Optional[int] = None) -> List[GaussianRational]:
    return PointParser().parse(text, size)


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational such as ``1/1024``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise PointParseError(f"not a rational number: {text!r}") from None
