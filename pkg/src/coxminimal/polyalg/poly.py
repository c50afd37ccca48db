"""Sparse multivariate polynomials over a cyclotomic field."""

from __future__ import annotations

import re
from fractions import Fraction

import flint

from ..exactnum import CycNum, CyclotomicField, field, format_scalar, parse_scalar

__all__ = ["Ring", "GradedPoly", "PolySyntaxError"]


class PolySyntaxError(ValueError):
    pass


class Ring:
    """A polynomial ring K[v_1..v_n] over K = Q(zeta_N).

    ``gradings`` maps a grading name to an integer weight per variable; it
    is only bookkeeping (valuation degrees, Ab(G) exponents, ...).
    """

    def __init__(self, names, conductor: int = 1, gradings: dict | None = None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        self.field: CyclotomicField = field(conductor)
        self.index = {v: i for i, v in enumerate(self.names)}
        self.gradings = {k: tuple(w) for k, w in (gradings or {}).items()}
        for k, w in self.gradings.items():
            if len(w) != len(self.names):
                raise ValueError(f"grading {k} has wrong length")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def conductor(self) -> int:
        return self.field.conductor

    def __repr__(self):
        return f"Ring({', '.join(self.names)}; N={self.conductor})"

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names and self.field is other.field

    def __hash__(self):
        return hash((self.names, self.conductor))

    def zero(self) -> "GradedPoly":
        return GradedPoly(self, {})

    def one(self) -> "GradedPoly":
        return self.const(1)

    def const(self, c) -> "GradedPoly":
        c = self.field(c)
        return GradedPoly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name) -> "GradedPoly":
        i = self.index[name] if isinstance(name, str) else name
        e = [0] * self.nvars
        e[i] = 1
        return GradedPoly(self, {tuple(e): self.field.one})

    def gens(self) -> list["GradedPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exp, coeff=1) -> "GradedPoly":
        c = self.field(coeff)
        return GradedPoly(self, {tuple(exp): c} if c else {})

    def extend(self, names, gradings: dict | None = None) -> "Ring":
        """A ring with extra variables appended."""
        g = {}
        for k, w in self.gradings.items():
            extra = (gradings or {}).get(k)
            if extra is not None:
                g[k] = tuple(w) + tuple(extra)
        return Ring(self.names + tuple(names), self.conductor, g)

    def parse(self, text: str) -> "GradedPoly":
        return _PolyParser(text, self).parse()

    def embed_poly(self, f: "GradedPoly") -> "GradedPoly":
        """Move f into this ring, matching variables by name."""
        if f.ring == self:
            return f
        pos = []
        for v in f.ring.names:
            if v not in self.index:
                raise ValueError(f"variable {v} not in {self}")
            pos.append(self.index[v])
        n = self.nvars
        terms = {}
        for e, c in f.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    ne[pos[i]] = k
            terms[tuple(ne)] = self.field(c)
        return GradedPoly(self, terms, f.character)


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class GradedPoly:
    """A polynomial with terms ``{exponent tuple: CycNum}``.

    ``character`` optionally records the Ab(G)-character the polynomial
    transforms by, as an exponent vector on the invariant factors.
    """

    __slots__ = ("ring", "terms", "character")

    def __init__(self, ring: Ring, terms: dict, character=None):
        self.ring = ring
        self.terms = terms
        self.character = character

    # -- construction helpers -------------------------------------------
    @classmethod
    def from_raw(cls, ring: Ring, raw: dict, character=None) -> "GradedPoly":
        F = ring.field
        return cls(ring, {e: CycNum(F, p) for e, p in raw.items()}, character)

    def raw(self) -> dict:
        return {e: c.poly for e, c in self.terms.items()}

    def with_character(self, chi) -> "GradedPoly":
        return GradedPoly(self.ring, self.terms, None if chi is None else tuple(chi))

    # -- queries ----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def weighted_degrees(self, weights) -> set[int]:
        return {sum(w * k for w, k in zip(weights, e)) for e in self.terms}

    def weighted_degree(self, weights) -> int:
        return max(self.weighted_degrees(weights))

    def min_weighted_degree(self, weights) -> int:
        return min(self.weighted_degrees(weights))

    def is_homogeneous(self, weights=None) -> bool:
        if weights is None:
            return len({sum(e) for e in self.terms}) <= 1
        return len(self.weighted_degrees(weights)) <= 1

    def variables(self) -> set[int]:
        out = set()
        for e in self.terms:
            out.update(i for i, k in enumerate(e) if k)
        return out

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> CycNum:
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def homogeneous_parts(self, weights=None) -> dict[int, "GradedPoly"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            d = sum(e) if weights is None else sum(w * k for w, k in zip(weights, e))
            parts.setdefault(d, {})[e] = c
        return {d: GradedPoly(self.ring, t) for d, t in sorted(parts.items())}

    def leading(self, order) -> tuple:
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def monic(self, order) -> "GradedPoly":
        if not self.terms:
            return self
        _, c = self.leading(order)
        return self * c.inverse()

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, GradedPoly):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        return self.ring.const(other)

    def __eq__(self, other):
        if isinstance(other, GradedPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, CycNum)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e)
            if v is None:
                terms[e] = c
            else:
                v = v + c
                if v:
                    terms[e] = v
                else:
                    del terms[e]
        return GradedPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(self.ring, {e: -c for e, c in self.terms.items()}, self.character)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "GradedPoly":
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        return GradedPoly(self.ring, {e: v * c for e, v in self.terms.items()}, self.character)

    def __mul__(self, other):
        if not isinstance(other, GradedPoly):
            return self.scale(other)
        if other.ring != self.ring:
            raise ValueError("polynomials live in different rings")
        F = self.ring.field
        mod, d = F.modulus, F.degree
        acc: dict = {}
        for e1, c1 in self.terms.items():
            p1 = c1.poly
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = p1 * c2.poly
                v = acc.get(e)
                acc[e] = p if v is None else v + p
        terms = {}
        for e, p in acc.items():
            if p.degree() >= d:
                p = p % mod
            if not p.is_zero():
                terms[e] = CycNum(F, p)
        chi = None
        if self.character is not None and other.character is not None:
            chi = tuple(a + b for a, b in zip(self.character, other.character))
        return GradedPoly(self.ring, terms, chi)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, GradedPoly):
            raise TypeError("polynomial division is not supported; use ideal membership")
        return self.scale(self.ring.field(other).inverse())

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, exp, coeff=None) -> "GradedPoly":
        if coeff is None:
            return GradedPoly(self.ring, {_add_exp(e, exp): c for e, c in self.terms.items()})
        return GradedPoly(self.ring, {_add_exp(e, exp): c * coeff for e, c in self.terms.items()})

    def divide_monomial(self, exp) -> "GradedPoly":
        out = {}
        for e, c in self.terms.items():
            ne = tuple(x - y for x, y in zip(e, exp))
            if min(ne, default=0) < 0:
                raise ValueError("monomial does not divide every term")
            out[ne] = c
        return GradedPoly(self.ring, out, self.character)

    # -- substitution -----------------------------------------------------
    def substitute(self, assignments: dict, target: Ring | None = None) -> "GradedPoly":
        """Substitute variables (by name or index) with polynomials or scalars.

        Unassigned variables are kept and must exist in the target ring.
        """
        target = target or self.ring
        images = []
        for i, name in enumerate(self.ring.names):
            v = assignments.get(name, assignments.get(i))
            if v is None:
                images.append(target.var(name))
            elif isinstance(v, GradedPoly):
                images.append(target.embed_poly(v))
            else:
                images.append(target.const(v))
        return self.evaluate(images, target)

    def evaluate(self, images, target: Ring) -> "GradedPoly":
        """Ring map v_i -> images[i] (polynomials in target)."""
        powers: list[dict] = [{} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = images[i] ** k if k < 2 else power(i, k - 1) * images[i]
            return cache[k]

        parts = []
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            parts.append(term)
        # sum as raw dict for speed
        F = target.field
        raw: dict = {}
        for t in parts:
            for e, c in t.terms.items():
                v = raw.get(e)
                raw[e] = c.poly if v is None else v + c.poly
        return GradedPoly(target, {e: CycNum(F, p) for e, p in raw.items() if not p.is_zero()})

    def linear_change(self, matrix, var_indices=None) -> "GradedPoly":
        """Substitute v_j -> sum_k matrix[k][j] * v_k on a block of variables.

        ``var_indices`` selects the block (default: all variables).
        """
        R = self.ring
        idx = list(range(R.nvars)) if var_indices is None else list(var_indices)
        images = R.gens()
        for a, j in enumerate(idx):
            img = R.zero()
            for b, k in enumerate(idx):
                c = matrix[b][a]
                if c:
                    img = img + R.var(k).scale(c)
            images[j] = img
        return self.evaluate(images, R)

    # -- text -------------------------------------------------------------
    def to_str(self, order=None) -> str:
        if not self.terms:
            return "0"
        if order is None:
            from .order import MonomialOrder

            order = MonomialOrder.grevlex(self.ring.nvars)
        exps = sorted(self.terms, key=order.key, reverse=True)
        out = []
        for e in exps:
            c = self.terms[e]
            mono = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(self.ring.names, e) if k
            )
            if c.is_rational():
                q = c.rational()
                sign = "-" if q < 0 else "+"
                q = abs(q)
                qs = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
                if mono:
                    body = mono if q == 1 else f"{qs}*{mono}"
                else:
                    body = qs
            else:
                sign = "+"
                cs = f"[{format_scalar(c)}]"
                body = f"{cs}*{mono}" if mono else cs
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"GradedPoly({self.to_str()!r})"


_PTOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\[[^\]]*\])|(\*\*|[-+*/^()]))")


class _PolyParser:
    """Expression parser: sums, products, integer powers, parentheses,
    rational literals and bracketed field scalars ``[expr in z]``."""

    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = []
        pos = 0
        s = text.rstrip()
        while pos < len(s):
            m = _PTOKEN.match(s, pos)
            if not m:
                raise PolySyntaxError(f"unexpected character at column {pos + 1} in {text!r}")
            if m.group(1) is not None:
                self.tokens.append(("int", int(m.group(1))))
            elif m.group(2) is not None:
                self.tokens.append(("var", m.group(2)))
            elif m.group(3) is not None:
                self.tokens.append(("scalar", m.group(3)[1:-1]))
            else:
                op = m.group(4)
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def parse(self) -> GradedPoly:
        if not self.tokens:
            raise PolySyntaxError("empty polynomial")
        v = self.expr()
        if self.i != len(self.tokens):
            raise PolySyntaxError(f"trailing input in {self.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.peek()[1]
            self.i += 1
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.peek()[1]
            self.i += 1
            w = self.unary()
            if op == "*":
                v = v * w
            else:
                if not w.is_constant() or w.is_zero():
                    raise PolySyntaxError(f"can only divide by nonzero scalars in {self.text!r}")
                v = v / w.constant_term()
        return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.i += 1
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.i += 1
            return self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek() == ("op", "^"):
            self.i += 1
            kind, k = self.peek()
            if kind != "int":
                raise PolySyntaxError(f"expected integer exponent in {self.text!r}")
            self.i += 1
            v = v ** k
        return v

    def atom(self):
        kind, value = self.peek()
        self.i += 1
        if kind == "int":
            return self.ring.const(value)
        if kind == "var":
            if value not in self.ring.index:
                raise PolySyntaxError(f"unknown variable {value!r} in {self.text!r}")
            return self.ring.var(value)
        if kind == "scalar":
            try:
                return self.ring.const(parse_scalar(value, self.ring.conductor))
            except ValueError as exc:
                raise PolySyntaxError(str(exc)) from exc
        if (kind, value) == ("op", "("):
            v = self.expr()
            if self.peek() != ("op", ")"):
                raise PolySyntaxError(f"missing ')' in {self.text!r}")
            self.i += 1
            return v
        raise PolySyntaxError(f"unexpected token {value!r} in {self.text!r}")


def raw_reduce(p: flint.fmpq_poly, F: CyclotomicField) -> flint.fmpq_poly:
    return p % F.modulus if p.degree() >= F.degree else p
