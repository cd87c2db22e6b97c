"""
Exact Arithmetic Module

Rational and Gaussian-rational scalars plus recursive dense multivariate
polynomials over the rationals, with lazy pseudo-division. Every other
module in trichain is built on the values defined here, and all of them
are immutable once constructed.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from src.core.errors import DomainError

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]


@dataclass(frozen=True, eq=False)
class GaussianRational:
    """
    An element re + im*i of Q(i).

    Args:
        re: Real part
        im: Imaginary part
    """

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 're', Fraction(self.re))
        object.__setattr__(self, 'im', Fraction(self.im))

    @classmethod
    def coerce(cls, value: Any) -> 'GaussianRational':
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> 'GaussianRational':
        return GaussianRational(self.re, -self.im)

    def __add__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = '' if abs(self.im) == 1 else str(abs(self.im))
        if self.re == 0:
            return f"{'-' if self.im < 0 else ''}{im}i"
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}i"

    def __repr__(self):
        return f"GaussianRational({self})"


@dataclass(frozen=True)
class VarOrder:
    """
    Ascending variable ordering x1 < x2 < ... < xn.

    Polynomials refer to variables by their index in this ordering.
    """

    names: Tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, 'names', names)
        if not names:
            raise DomainError("variable order must not be empty")
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise DomainError(f"duplicate variables in order: {', '.join(duplicates)}")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DomainError(f"unknown variable: {name}") from None

    def name(self, index: int) -> str:
        return self.names[index]

    def prefix(self, count: int) -> 'VarOrder':
        return VarOrder(self.names[:count])


class MPoly:
    """
    Exact multivariate polynomial over Q, recursive by main variable.

    A polynomial is either a rational constant (``var == -1``) or a main
    variable index together with the coefficient tuple of its powers
    0..deg. Coefficients only involve variables strictly below the main
    variable and the top coefficient is nonzero, so equal polynomials are
    structurally equal. Instances are never mutated after construction.
    """

    __slots__ = ('var', 'coeffs', 'value', '_hash')

    def __init__(self, var: int, coeffs: Tuple['MPoly', ...] = (), value: Fraction = Fraction(0)):
        self.var = var
        self.coeffs = coeffs
        self.value = value
        self._hash = None

    # construction

    @staticmethod
    def constant(value: Scalar) -> 'MPoly':
        value = Fraction(value)
        if value == 0:
            return ZERO
        if value == 1:
            return ONE
        return MPoly(-1, (), value)

    @staticmethod
    def variable(index: int) -> 'MPoly':
        if index < 0:
            raise DomainError(f"invalid variable index {index}")
        return MPoly(index, (ZERO, ONE))

    @staticmethod
    def from_coeffs(var: int, coeffs: Sequence['MPoly']) -> 'MPoly':
        """Build sum(coeffs[k] * x_var^k); every coefficient must be free of x_var and above."""
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            return ZERO
        if len(coeffs) == 1:
            return coeffs[0]
        return MPoly(var, tuple(coeffs))

    @staticmethod
    def from_coefficients(coeffs: Sequence['MPoly'], v: int) -> 'MPoly':
        """Build sum(coeffs[k] * x_v^k) where the coefficients may involve variables above v."""
        if all(c.var < v for c in coeffs):
            return MPoly.from_coeffs(v, coeffs)
        x = MPoly.variable(v)
        result = ZERO
        for c in reversed(coeffs):
            result = result * x + c
        return result

    # structure

    def is_zero(self) -> bool:
        return self.var < 0 and self.value == 0

    def is_constant(self) -> bool:
        return self.var < 0

    def is_one(self) -> bool:
        return self.var < 0 and self.value == 1

    @property
    def lv(self) -> int:
        """Leading (main) variable index."""
        if self.var < 0:
            raise DomainError("a constant has no leading variable")
        return self.var

    @property
    def ini(self) -> 'MPoly':
        """Initial: the coefficient of the highest power of the main variable."""
        if self.var < 0:
            raise DomainError("a constant has no initial")
        return self.coeffs[-1]

    @property
    def main_degree(self) -> int:
        return len(self.coeffs) - 1 if self.var >= 0 else 0

    def degree(self, v: int) -> int:
        if self.var < v:
            return 0
        if self.var == v:
            return len(self.coeffs) - 1
        return max(c.degree(v) for c in self.coeffs)

    def variables(self) -> frozenset:
        if self.var < 0:
            return frozenset()
        found = {self.var}
        for c in self.coeffs:
            found |= c.variables()
        return frozenset(found)

    def coefficients_in(self, v: int) -> List['MPoly']:
        """Coefficients of self viewed as a polynomial in x_v, lowest power first."""
        if self.var < v:
            return [self]
        if self.var == v:
            return list(self.coeffs)
        rows = [c.coefficients_in(v) for c in self.coeffs]
        width = max(len(row) for row in rows)
        return [
            MPoly.from_coeffs(self.var, [row[k] if k < len(row) else ZERO for row in rows])
            for k in range(width)
        ]

    def leading_coefficient(self, v: int) -> 'MPoly':
        return self.coefficients_in(v)[-1]

    def tail(self, v: int) -> 'MPoly':
        """self minus its leading term in x_v."""
        coeffs = self.coefficients_in(v)
        return MPoly.from_coefficients(coeffs[:-1], v)

    def rational_coefficients(self) -> Iterator[Fraction]:
        if self.var < 0:
            if self.value != 0:
                yield self.value
            return
        for c in self.coeffs:
            yield from c.rational_coefficients()

    def leading_constant(self) -> Fraction:
        """The rational at the end of the chain of initials."""
        poly = self
        while poly.var >= 0:
            poly = poly.coeffs[-1]
        return poly.value

    def terms(self) -> Iterator[Tuple[Tuple[Tuple[int, int], ...], Fraction]]:
        """Yield (monomial, coefficient) pairs, monomial as ((var, exp), ...) ascending, highest terms first."""
        if self.var < 0:
            if self.value != 0:
                yield (), self.value
            return
        for k in range(len(self.coeffs) - 1, -1, -1):
            for mono, c in self.coeffs[k].terms():
                yield (mono + ((self.var, k),) if k else mono), c

    # arithmetic

    def __add__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return _add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return _scale(self, Fraction(-1))

    def __sub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return _add(self, -other)

    def __rsub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return _add(other, -self)

    def __mul__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            raise DomainError(f"negative exponent {exponent}")
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def scale(self, factor: Scalar) -> 'MPoly':
        factor = Fraction(factor)
        if factor == 0:
            return ZERO
        return _scale(self, factor)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.var < 0 and self.value == other
        if not isinstance(other, MPoly):
            return NotImplemented
        if self is other:
            return True
        if self.var != other.var:
            return False
        if self.var < 0:
            return self.value == other.value
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.value) if self.var < 0 else hash((self.var, self.coeffs))
        return self._hash

    def sort_key(self) -> Tuple:
        """Structural ordering key over the coefficient tree."""
        if self.var < 0:
            return (0, self.value)
        return (1, self.var, len(self.coeffs), tuple(c.sort_key() for c in reversed(self.coeffs)))

    # calculus and evaluation

    def derivative(self, v: int) -> 'MPoly':
        if self.var < v:
            return ZERO
        if self.var == v:
            return MPoly.from_coeffs(v, [c.scale(k) for k, c in enumerate(self.coeffs)][1:])
        return MPoly.from_coeffs(self.var, [c.derivative(v) for c in self.coeffs])

    def substitute(self, values: Mapping[int, Scalar]) -> 'MPoly':
        """Replace the variables in ``values`` by rational numbers."""
        if self.var < 0:
            return self
        coeffs = [c.substitute(values) for c in self.coeffs]
        if self.var not in values:
            return MPoly.from_coeffs(self.var, coeffs)
        a = Fraction(values[self.var])
        result = ZERO
        for c in reversed(coeffs):
            result = result.scale(a) + c
        return result

    def translate(self, shifts: Mapping[int, Scalar]) -> 'MPoly':
        """Return self(x + a) for the rational shifts a."""
        if self.var < 0:
            return self
        coeffs = [c.translate(shifts) for c in self.coeffs]
        a = Fraction(shifts.get(self.var, 0))
        if a == 0:
            return MPoly.from_coeffs(self.var, coeffs)
        x = MPoly.variable(self.var) + a
        result = ZERO
        for c in reversed(coeffs):
            result = result * x + c
        return result

    def evaluate_with(self, values: Mapping[int, Any], lift: Callable[[Fraction], Any]) -> Any:
        """Horner evaluation over any ring whose elements support + and *."""
        if self.var < 0:
            return lift(self.value)
        if self.var not in values:
            raise DomainError(f"no value given for variable index {self.var}")
        x = values[self.var]
        result = None
        for c in reversed(self.coeffs):
            term = c.evaluate_with(values, lift)
            result = term if result is None else result * x + term
        return result

    def evaluate(self, values: Mapping[int, Any]) -> GaussianRational:
        """Exact evaluation in Q(i)."""
        point = {v: GaussianRational.coerce(a) for v, a in values.items()}
        return GaussianRational.coerce(self.evaluate_with(point, GaussianRational.coerce))

    # text

    def format(self, order: Optional[VarOrder] = None) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for mono, c in self.terms():
            factors = [_power_text(order, v, e) for v, e in mono]
            magnitude = abs(c)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = '*'.join(factors)
            else:
                body = '*'.join([str(magnitude)] + factors)
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"{'+' if c > 0 else '-'} {body}")
        return ' '.join(pieces)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"MPoly({self.format()})"


def _power_text(order: Optional[VarOrder], v: int, e: int) -> str:
    name = order.name(v) if order is not None and v < len(order) else f"x{v + 1}"
    return name if e == 1 else f"{name}^{e}"


ZERO = MPoly(-1, (), Fraction(0))
ONE = MPoly(-1, (), Fraction(1))


def _lift(value: Any) -> Optional[MPoly]:
    if isinstance(value, MPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return MPoly.constant(value)
    return None


def _scale(p: MPoly, factor: Fraction) -> MPoly:
    if factor == 1:
        return p
    if p.var < 0:
        return MPoly.constant(p.value * factor)
    return MPoly(p.var, tuple(_scale(c, factor) for c in p.coeffs))


def _add(a: MPoly, b: MPoly) -> MPoly:
    if a.var < 0 and b.var < 0:
        return MPoly.constant(a.value + b.value)
    if a.var < b.var:
        a, b = b, a
    if a.var > b.var:
        if b.is_zero():
            return a
        coeffs = list(a.coeffs)
        coeffs[0] = _add(coeffs[0], b)
        return MPoly(a.var, tuple(coeffs))
    la, lb = len(a.coeffs), len(b.coeffs)
    coeffs = [
        _add(a.coeffs[k], b.coeffs[k]) if k < la and k < lb else (a.coeffs[k] if k < la else b.coeffs[k])
        for k in range(max(la, lb))
    ]
    return MPoly.from_coeffs(a.var, coeffs)


def _mul(a: MPoly, b: MPoly) -> MPoly:
    if a.var < 0 or b.var < 0:
        if a.var >= 0:
            a, b = b, a
        if a.value == 0 or b.is_zero():
            return ZERO
        if b.var < 0:
            return MPoly.constant(a.value * b.value)
        return _scale(b, a.value)
    if a.var < b.var:
        a, b = b, a
    if a.var > b.var:
        return MPoly(a.var, tuple(_mul(c, b) for c in a.coeffs))
    product = [ZERO] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ca in enumerate(a.coeffs):
        if ca.is_zero():
            continue
        for j, cb in enumerate(b.coeffs):
            if not cb.is_zero():
                product[i + j] = _add(product[i + j], _mul(ca, cb))
    return MPoly(a.var, tuple(product))


def leading_data(poly: MPoly) -> Tuple[int, int, MPoly]:
    """
    Leading variable, its degree and the initial of a non-constant polynomial.

    Raises:
        DomainError: If ``poly`` is constant
    """
    if poly.is_constant():
        raise DomainError("leading data of a constant polynomial is undefined")
    return poly.var, poly.main_degree, poly.ini


def derivative(poly: MPoly, v: int) -> MPoly:
    """Partial derivative of poly with respect to x_v."""
    return poly.derivative(v)


def evaluate(poly: MPoly, assignment: Mapping[int, Any]) -> GaussianRational:
    """Value of poly at a Gaussian-rational assignment of its variables."""
    return poly.evaluate(assignment)


def pseudo_divide(f: MPoly, g: MPoly, v: int, field_division: bool = False) -> Tuple[MPoly, MPoly, int]:
    """
    Lazy pseudo-division of f by g with respect to x_v.

    Returns (pquo, prem, e) with ini(g)^e * f = pquo * g + prem and
    deg(prem, v) < deg(g, v); e counts the reduction steps actually taken.
    With ``field_division`` a constant initial is divided out instead of
    multiplied in, and e is reported as 0.

    Raises:
        DomainError: If g does not involve x_v
    """
    g_coeffs = g.coefficients_in(v)
    n = len(g_coeffs) - 1
    if n <= 0:
        raise DomainError(f"pseudo-division by a polynomial of degree 0 in variable index {v}")
    if f.is_zero():
        return ZERO, ZERO, 0
    r = f.coefficients_in(v)
    if len(r) - 1 < n:
        return ZERO, f, 0

    lc = g_coeffs[-1]
    q = [ZERO] * (len(r) - n)
    e = 0
    inverse = Fraction(1) / lc.value if field_division and lc.is_constant() else None

    while len(r) - 1 >= n:
        d = len(r) - 1
        c = r[d]
        if inverse is not None:
            c = c.scale(inverse)
            q[d - n] = q[d - n] + c
        else:
            q = [qi * lc for qi in q]
            q[d - n] = q[d - n] + c
            r = [ri * lc for ri in r]
            e += 1
        for i in range(n):
            r[d - n + i] = r[d - n + i] - c * g_coeffs[i]
        r.pop()
        while r and r[-1].is_zero():
            r.pop()

    return MPoly.from_coefficients(q, v), MPoly.from_coefficients(r, v) if r else ZERO, e


def pquo(f: MPoly, g: MPoly, v: int) -> MPoly:
    """Pseudo-quotient; a divisor of degree 0 in x_v leaves f unchanged."""
    if g.degree(v) == 0:
        return f
    return pseudo_divide(f, g, v, field_division=True)[0]


def prem(f: MPoly, g: MPoly, v: int) -> MPoly:
    return pseudo_divide(f, g, v, field_division=True)[1]


def content(poly: MPoly) -> Fraction:
    """Positive rational c such that poly / c has coprime integer coefficients."""
    values = list(poly.rational_coefficients())
    if not values:
        return Fraction(0)
    denominator = lcm(*(c.denominator for c in values))
    numerator = gcd(*(abs(c.numerator) * (denominator // c.denominator) for c in values))
    return Fraction(numerator, denominator)


def primitive_normalize(poly: MPoly) -> MPoly:
    """
    Scale a nonzero polynomial to coprime integer coefficients with a
    positive recursively-leading coefficient.

    Raises:
        DomainError: If ``poly`` is zero
    """
    return poly.scale(normalizing_factor(poly))


def normalizing_factor(poly: MPoly) -> Fraction:
    """The rational that ``primitive_normalize`` multiplies poly by."""
    if poly.is_zero():
        raise DomainError("cannot normalize the zero polynomial")
    factor = 1 / content(poly)
    return -factor if poly.leading_constant() < 0 else factor


def normalize_or_zero(poly: MPoly) -> MPoly:
    return ZERO if poly.is_zero() else primitive_normalize(poly)



def exact_quotient(a: MPoly, b: MPoly) -> MPoly:
    """
    The polynomial q with a = q * b.

    Raises:
        DomainError: If b is zero or does not divide a
    """
    if b.is_zero():
        raise DomainError("division by the zero polynomial")
    if a.is_zero():
        return ZERO
    if b.is_constant():
        return a.scale(1 / b.value)
    v = b.var
    if a.var > v:
        return MPoly.from_coeffs(a.var, [exact_quotient(c, b) for c in a.coeffs])

    x = MPoly.variable(v)
    quotient, remainder = ZERO, a
    while not remainder.is_zero() and remainder.degree(v) >= b.main_degree:
        term = exact_quotient(remainder.leading_coefficient(v), b.ini) * x ** (remainder.degree(v) - b.main_degree)
        quotient = quotient + term
        remainder = remainder - term * b
    if not remainder.is_zero():
        raise DomainError("polynomial division is not exact")
    return quotient


def main_content(poly: MPoly) -> MPoly:
    """Normalized gcd of the coefficients of a non-constant poly in its main variable."""
    result = ZERO
    for c in poly.coeffs:
        result = poly_gcd(result, c)
        if result.is_one():
            break
    return result


def main_primitive_part(poly: MPoly) -> MPoly:
    """Poly divided by its main content, primitive normalized."""
    if poly.is_constant():
        return primitive_normalize(poly)
    return primitive_normalize(exact_quotient(poly, main_content(poly)))


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """
    Greatest common divisor over Q, primitive normalized.

    Recursive on the main variable: contents are handled one level down and
    the primitive parts go through a primitive remainder sequence.
    """
    if a.is_zero():
        return normalize_or_zero(b)
    if b.is_zero():
        return primitive_normalize(a)
    if a.is_constant() or b.is_constant():
        return ONE
    if a.var != b.var:
        low, high = (a, b) if a.var < b.var else (b, a)
        return poly_gcd(low, main_content(high))

    v = a.var
    common = poly_gcd(main_content(a), main_content(b))
    f = exact_quotient(a, main_content(a))
    g = exact_quotient(b, main_content(b))
    if f.main_degree < g.main_degree:
        f, g = g, f
    while True:
        r = prem(f, g, v)
        if r.is_zero():
            break
        if r.degree(v) == 0:
            g = ONE
            break
        f, g = g, exact_quotient(r, main_content(r))
    return primitive_normalize(common * g)
