"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored on the power basis 1, z, ..., z^(phi(N)-1) modulo the
N-th cyclotomic polynomial, so equality is a coefficient comparison.  The
polynomial arithmetic itself is delegated to python-flint's ``fmpq_poly``.

Scalars in input files use a small grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' int)?
    atom   := int | 'z' | '(' expr ')'

where ``z`` denotes zeta_N for the conductor of the file.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

import flint

__all__ = [
    "CyclotomicField",
    "CycNum",
    "field",
    "common_field",
    "parse_scalar",
    "ScalarSyntaxError",
]


class ScalarSyntaxError(ValueError):
    pass


def _to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, int):
        return flint.fmpq(c)
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    if isinstance(c, flint.fmpz):
        return flint.fmpq(c)
    raise TypeError(f"cannot convert {c!r} to a rational")


class CyclotomicField:
    """The field Q(zeta_N) with a fixed conductor N."""

    def __init__(self, conductor: int):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.conductor = conductor
        self.modulus = flint.fmpq_poly(flint.fmpz_poly.cyclotomic(conductor).coeffs())
        self.degree = self.modulus.degree()
        self._zero = CycNum(self, flint.fmpq_poly([]))
        self._one = CycNum(self, flint.fmpq_poly([1]))

    def __repr__(self):
        return f"CyclotomicField({self.conductor})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.conductor == self.conductor

    def __hash__(self):
        return hash(("CyclotomicField", self.conductor))

    def __reduce__(self):
        return (field, (self.conductor,))

    @property
    def zero(self) -> "CycNum":
        return self._zero

    @property
    def one(self) -> "CycNum":
        return self._one

    def __call__(self, value) -> "CycNum":
        if isinstance(value, CycNum):
            return value.embed(self.conductor)
        if isinstance(value, str):
            return parse_scalar(value, self.conductor)
        return CycNum(self, flint.fmpq_poly([_to_fmpq(value)]))

    def zeta(self, k: int = 1, r: int | None = None) -> "CycNum":
        """zeta_r^k, with r defaulting to the conductor; r must divide N."""
        N = self.conductor
        if r is None:
            r = N
        if N % r:
            raise ValueError(f"zeta_{r} is not in Q(zeta_{N})")
        e = (k * (N // r)) % N
        return CycNum(self, flint.fmpq_poly([0] * e + [1]) % self.modulus)

    def from_coeffs(self, coeffs) -> "CycNum":
        return CycNum(self, flint.fmpq_poly([_to_fmpq(c) for c in coeffs]) % self.modulus)


@lru_cache(maxsize=None)
def field(conductor: int) -> CyclotomicField:
    return CyclotomicField(conductor)


def common_field(*values) -> CyclotomicField:
    N = 1
    for v in values:
        if isinstance(v, CycNum):
            c = v.field.conductor
            N = N * c // gcd(N, c)
    return field(N)


class CycNum:
    """An element of Q(zeta_N) in canonical (fully reduced) form.

    Values are immutable.  Mixed-conductor arithmetic embeds both
    operands into the lcm of their conductors.
    """

    __slots__ = ("field", "poly", "_hash")

    def __init__(self, fld: CyclotomicField, poly: flint.fmpq_poly):
        self.field = fld
        self.poly = poly
        self._hash = None

    # -- basic protocol -------------------------------------------------
    def coeffs(self) -> list[Fraction]:
        """Power-basis coefficients, padded to the field degree."""
        cs = [Fraction(int(c.p), int(c.q)) for c in self.poly.coeffs()]
        return cs + [Fraction(0)] * (self.field.degree - len(cs))

    @property
    def conductor(self) -> int:
        return self.field.conductor

    def __bool__(self):
        return not self.poly.is_zero()

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_one(self) -> bool:
        return self.poly.is_one()

    def is_rational(self) -> bool:
        return self.poly.degree() <= 0

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        if self.poly.is_zero():
            return Fraction(0)
        c = self.poly.coeffs()[0]
        return Fraction(int(c.p), int(c.q))

    def __hash__(self):
        if self._hash is None:
            # rationals hash alike regardless of conductor
            if self.poly.degree() <= 0:
                self._hash = hash(self.rational())
            else:
                self._hash = hash((self.field.conductor, tuple(str(c) for c in self.poly.coeffs())))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, CycNum):
            if other.field is self.field:
                return self.poly == other.poly
            F = common_field(self, other)
            return self.embed(F.conductor).poly == other.embed(F.conductor).poly
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational() == other
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def sort_key(self) -> tuple:
        """A deterministic total order (not a field order)."""
        return tuple(self.coeffs())

    # -- coercion -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.field is self.field:
                return self, other
            F = common_field(self, other)
            return self.embed(F.conductor), other.embed(F.conductor)
        if isinstance(other, (int, Fraction, flint.fmpq, flint.fmpz)):
            return self, CycNum(self.field, flint.fmpq_poly([_to_fmpq(other)]))
        return None, None

    def embed(self, conductor: int) -> "CycNum":
        """Re-express this value in Q(zeta_M) for a multiple M of the conductor."""
        N = self.field.conductor
        if conductor == N:
            return self
        if conductor % N:
            raise ValueError(f"conductor {N} does not divide {conductor}")
        F = field(conductor)
        s = conductor // N
        cs = self.poly.coeffs()
        out = [0] * (s * (len(cs) - 1) + 1) if cs else []
        for k, c in enumerate(cs):
            out[s * k] = c
        return CycNum(F, flint.fmpq_poly(out) % F.modulus)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CycNum(a.field, a.poly + b.poly)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CycNum(a.field, a.poly - b.poly)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CycNum(a.field, b.poly - a.poly)

    def __neg__(self):
        return CycNum(self.field, -self.poly)

    def __pos__(self):
        return self

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        p = a.poly * b.poly
        if p.degree() >= a.field.degree:
            p = p % a.field.modulus
        return CycNum(a.field, p)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.poly.degree() == 0:
            return CycNum(self.field, flint.fmpq_poly([1 / self.poly.coeffs()[0]]))
        g, s, _ = self.poly.xgcd(self.field.modulus)
        # g is the monic gcd, a unit since the modulus is irreducible
        return CycNum(self.field, (s / g) % self.field.modulus)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conjugate(self) -> "CycNum":
        """Complex conjugation, z -> z^(-1)."""
        N = self.field.conductor
        out = [0] * N
        for k, c in enumerate(self.poly.coeffs()):
            out[(-k) % N] += c
        return CycNum(self.field, flint.fmpq_poly(out) % self.field.modulus)

    def to_complex(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.field.conductor)
        return sum(float(c) * z**k for k, c in enumerate(self.coeffs()))

    def root_of_unity_exponent(self, r: int) -> int | None:
        """Return a in [0, r) with self == zeta_r^a, or None."""
        N = self.field.conductor
        L = N * r // gcd(N, r)
        a = self.embed(L)
        F = field(L)
        step = L // r
        for k in range(r):
            if a.poly == F.zeta(k * step).poly:
                return k
        return None

    # -- text -----------------------------------------------------------
    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"CycNum({format_scalar(self)!r}, N={self.field.conductor})"


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_scalar(a: CycNum) -> str:
    """Canonical text in the scalar grammar; parse_scalar inverts it."""
    parts = []
    for k, c in enumerate(a.coeffs()):
        if c == 0:
            continue
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{_fmt_rational(mag)}*{mono}"
        else:
            body = _fmt_rational(mag)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|(z)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ScalarSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r} at column {pos + 1} in {text!r}")
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            tokens.append(("z", None))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, F: CyclotomicField):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.F = F

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ScalarSyntaxError(f"expected {want!r} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> CycNum:
        if not self.tokens:
            raise ScalarSyntaxError("empty scalar")
        v = self.expr()
        if self.i != len(self.tokens):
            raise ScalarSyntaxError(f"trailing input in {self.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take("op")[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take("op")[1]
            w = self.unary()
            if op == "*":
                v = v * w
            else:
                if w.is_zero():
                    raise ScalarSyntaxError(f"division by zero in {self.text!r}")
                v = v / w
        return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take("op")
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take("op")
            return self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek() == ("op", "^"):
            self.take("op")
            neg = False
            if self.peek() == ("op", "-"):
                self.take("op")
                neg = True
            k = self.take("int")[1]
            if neg and v.is_zero():
                raise ScalarSyntaxError(f"division by zero in {self.text!r}")
            v = v ** (-k if neg else k)
        return v

    def atom(self):
        kind, value = self.peek()
        if kind == "int":
            self.i += 1
            return self.F(value)
        if kind == "z":
            self.i += 1
            return self.F.zeta(1)
        if (kind, value) == ("op", "("):
            self.i += 1
            v = self.expr()
            self.take("op", ")")
            return v
        raise ScalarSyntaxError(f"unexpected token {value!r} in {self.text!r}")


def parse_scalar(text: str, conductor: int = 1) -> CycNum:
    """Parse a scalar expression with z = zeta_conductor."""
    return _Parser(text, field(conductor)).parse()
