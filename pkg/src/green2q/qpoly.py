"""
Exact arithmetic in Q[q] and Q(q).

A Polynomial is a dense tuple of Fraction coefficients in the variable q,
constant term first, with no trailing zeros.  The zero polynomial has an
empty coefficient tuple.  All arithmetic is exact; nothing here ever touches
floating point.

Phi_d denotes the d-th cyclotomic polynomial evaluated at q; `cyclotomic(d)`
computes it by dividing q^d - 1 by the lower cyclotomics.  Table entries are
written in a tiny expression grammar ("P2*P4", "1/2*P1", "q^4+3*q^3+...")
parsed by `parse_poly`; `poly_to_string` produces the canonical spelling and
round-trips through the parser.

`solve_linear` is a fraction-free (Bareiss) solver for square systems with
polynomial entries; results come back as RationalFunction and the caller may
insist on polynomiality via `RationalFunction.as_polynomial`.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]

# Largest d tried when factoring cyclotomics out of a polynomial for display.
_PRINT_CYCLOTOMIC_LIMIT = 24


class ShapeError(ValueError):
    """Matrix/vector dimensions do not match."""


class SingularMatrixError(ValueError):
    """The coefficient matrix has identically zero determinant."""


class ParseError(ValueError):
    """Syntax error in the polynomial grammar, with a position attached."""

    def __init__(self, message: str, position: int):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class Polynomial:
    """Univariate polynomial over Q, immutable and hashable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(c: Scalar) -> "Polynomial":
        return Polynomial((Fraction(c),))

    @staticmethod
    def q_power(k: int, c: Scalar = 1) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power of q")
        return Polynomial((0,) * k + (Fraction(c),))

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def constant_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial(
            a + b
            for a, b in itertools.zip_longest(self.coeffs, other.coeffs, fillvalue=Fraction(0))
        )

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dn, dd = len(rem) - 1, other.degree
        quo = [Fraction(0)] * max(dn - dd + 1, 0)
        lead = other.leading
        for k in range(dn - dd, -1, -1):
            c = rem[k + dd] / lead
            if c == 0:
                continue
            quo[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= c * b
        return Polynomial(quo), Polynomial(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Polynomial":
        """Divide, raising if the division is not exact."""
        quo, rem = divmod(self, other)
        if not rem.is_zero():
            raise ValueError("inexact polynomial division")
        return quo

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- structure ----------------------------------------------------

    def evaluate(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def substitute_q_power(self, k: int) -> "Polynomial":
        """The polynomial p(q^k)."""
        if k < 1:
            raise ValueError("power must be >= 1")
        out = [Fraction(0)] * (len(self.coeffs) * k)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return Polynomial(out)

    def valuation(self) -> int:
        """Multiplicity of the root q = 0 (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return 0

    def content(self) -> Fraction:
        """Positive rational c such that self/c is primitive over Z, with the
        sign normalised so self/content has positive leading coefficient."""
        if self.is_zero():
            return Fraction(1)
        from math import gcd

        num = 0
        den = 1
        for c in self.coeffs:
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        cont = Fraction(num, den)
        if self.leading < 0:
            cont = -cont
        return cont

    def primitive_part(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.content())

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.leading)

    def __repr__(self):
        return "Polynomial(%s)" % (poly_to_string(self),)

    def __str__(self):
        return poly_to_string(self)


ZERO = Polynomial()
ONE = Polynomial.constant(1)
Q = Polynomial.q_power(1)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd in Q[q]."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


@functools.lru_cache(maxsize=None)
def cyclotomic(d: int) -> Polynomial:
    """The d-th cyclotomic polynomial Phi_d(q)."""
    if d < 1:
        raise ValueError("cyclotomic index must be >= 1")
    poly = Polynomial.q_power(d) - 1
    for e in range(1, d):
        if d % e == 0:
            poly = poly.exact_div(cyclotomic(e))
    return poly


def ennola(p: Polynomial) -> Polynomial:
    """Ennola substitution q -> -q."""
    return Polynomial(c if i % 2 == 0 else -c for i, c in enumerate(p.coeffs))


def interpolate(points: Sequence[tuple]) -> Polynomial:
    """Lagrange interpolation through exact points (x_i, y_i).

    The x_i must be pairwise distinct; the result is the unique polynomial of
    degree < len(points) through all of them.
    """
    xs = [Fraction(x) for x, _ in points]
    ys = [Fraction(y) for _, y in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate interpolation abscissae")
    result = ZERO
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        basis = Polynomial.constant(1)
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = basis * (Q - xj)
            denom *= xi - xj
        result = result + basis * (yi / denom)
    return result


class RationalFunction:
    """Quotient of polynomials, kept reduced with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial = ONE):
        if isinstance(num, (int, Fraction)):
            num = Polynomial.constant(num)
        if isinstance(den, (int, Fraction)):
            den = Polynomial.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            object.__setattr__(self, "num", ZERO)
            object.__setattr__(self, "den", ONE)
            return
        g = poly_gcd(num, den)
        num, den = num.exact_div(g), den.exact_div(g)
        lead = den.leading
        object.__setattr__(self, "num", num * (1 / lead))
        object.__setattr__(self, "den", den * (1 / lead))

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @staticmethod
    def _coerce(x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Polynomial):
            return RationalFunction(x)
        if isinstance(x, (int, Fraction)):
            return RationalFunction(Polynomial.constant(x))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_polynomial(self) -> bool:
        return self.den == ONE

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError("rational function %s is not a polynomial" % (self,))
        return self.num

    def __repr__(self):
        if self.is_polynomial():
            return "RationalFunction(%s)" % (self.num,)
        return "RationalFunction((%s)/(%s))" % (self.num, self.den)


# ---------------------------------------------------------------------------
# Parsing.
#
# expr     := term (('+'|'-') term)*
# term     := factor ('*' factor)*
# factor   := rational | 'q' ['^' uint] | 'P' uint | '(' expr ')'
# rational := int ['/' uint]
#
# Whitespace is ignored.  '/' appears only inside rational literals; any
# other use (e.g. "P1/2") is rejected as division by a non-constant.
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected a digit")
        return int(self.text[start : self.pos])

    def rational(self, sign: int) -> Fraction:
        value = Fraction(sign * self.uint())
        if self.peek() == "/":
            self.take()
            den = self.uint()
            if den == 0:
                self.error("zero denominator")
            value /= den
        return value

    def factor(self) -> Polynomial:
        ch = self.peek()
        if ch == "(":
            self.take()
            value = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.take()
            return value
        if ch == "q":
            self.take()
            if self.peek() == "^":
                self.take()
                return Polynomial.q_power(self.uint())
            return Q
        if ch == "P":
            self.take()
            d = self.uint()
            if d == 0:
                self.error("P0 is not a cyclotomic polynomial")
            return cyclotomic(d)
        if ch.isdigit() or ch == "-":
            sign = 1
            if ch == "-":
                self.take()
                sign = -1
            return Polynomial.constant(self.rational(sign))
        self.error("expected a factor")

    def term(self) -> Polynomial:
        value = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.take()
                value = value * self.factor()
            elif ch == "/":
                self.error("division by a non-constant is not allowed")
            else:
                return value

    def expr(self) -> Polynomial:
        value = self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.take()
                value = value + self.term()
            elif ch == "-":
                self.take()
                value = value - self.term()
            else:
                return value

    def parse(self) -> Polynomial:
        value = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return value


def parse_poly(text: str) -> Polynomial:
    """Parse the table-entry grammar into an exact Polynomial."""
    return _Parser(text).parse()


def _plain_string(p: Polynomial) -> str:
    """Expanded spelling 'q^4+3*q^3+...' without any factoring."""
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = _frac_string(mag)
        else:
            qpart = "q" if i == 1 else "q^%d" % i
            body = qpart if mag == 1 else "%s*%s" % (_frac_string(mag), qpart)
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+" if c > 0 else "-") + body)
    return "".join(parts) if parts else "0"


def _frac_string(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return "%d/%d" % (f.numerator, f.denominator)


def poly_to_string(p: Polynomial) -> str:
    """Canonical display: content, q-power, cyclotomic factors, residual.

    Factors out the rational content and the power of q, then trial-divides
    by Phi_d for d <= 24; whatever is left is printed verbatim.  The output
    always reparses to the same polynomial.
    """
    if p.is_zero():
        return "0"
    content = p.content()
    rest = p * (1 / content)
    v = rest.valuation()
    if v:
        rest = rest.exact_div(Polynomial.q_power(v))
    cyc: list[int] = []
    d = 1
    while d <= _PRINT_CYCLOTOMIC_LIMIT and rest.degree > 0:
        quo, rem = divmod(rest, cyclotomic(d))
        if rem.is_zero():
            cyc.append(d)
            rest = quo
        else:
            d += 1
    factors = []
    if v:
        factors.append("q" if v == 1 else "q^%d" % v)
    factors.extend("P%d" % d for d in cyc)
    if rest != ONE:
        body = _plain_string(rest)
        factors.append("(%s)" % body if (rest.degree > 0 and len(rest.coeffs) - rest.coeffs.count(Fraction(0)) > 1) else body)
    if not factors:
        return _frac_string(content)
    joined = "*".join(factors)
    if content == 1:
        return joined
    if content == -1:
        return "-1*" + joined
    return "%s*%s" % (_frac_string(content), joined)


def solve_linear(
    matrix: Sequence[Sequence[Polynomial]], rhs: Sequence[Polynomial]
) -> list[RationalFunction]:
    """Solve A x = b exactly by fraction-free (Bareiss) elimination.

    A must be square with symbolically nonzero determinant.  Shape problems
    raise ShapeError; a vanishing determinant raises SingularMatrixError.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ShapeError("matrix is not square")
    if len(rhs) != n:
        raise ShapeError("rhs length %d does not match matrix size %d" % (len(rhs), n))
    if n == 0:
        return []

    # Augmented [A | b]; Bareiss keeps every entry polynomial.
    aug = [[_as_poly(matrix[i][j]) for j in range(n)] + [_as_poly(rhs[i])] for i in range(n)]
    prev = ONE
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if not aug[r][k].is_zero()), None)
        if pivot_row is None:
            raise SingularMatrixError("matrix determinant is identically zero")
        if pivot_row != k:
            aug[k], aug[pivot_row] = aug[pivot_row], aug[k]
        pivot = aug[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                aug[i][j] = (pivot * aug[i][j] - aug[i][k] * aug[k][j]).exact_div(prev)
            aug[i][k] = ZERO
        prev = pivot

    solution: list[RationalFunction] = [RationalFunction(ZERO) for _ in range(n)]
    for i in range(n - 1, -1, -1):
        acc = RationalFunction(aug[i][n])
        for j in range(i + 1, n):
            acc = acc - solution[j] * aug[i][j]
        solution[i] = acc / RationalFunction(aug[i][i])
    return solution


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.constant(x)
    raise TypeError("expected a polynomial, got %r" % (x,))
