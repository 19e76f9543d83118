"""Multivariate polynomials over the rationals with exact arithmetic.

Coefficient rings for operator identities: parameters such as weights or the
entries of an ansatz live here.  Terms are stored as a dict from exponent
tuples to nonzero ``Fraction`` values; all arithmetic is exact.
"""

from __future__ import annotations

import re
from fractions import Fraction


class PolyRing:
    """A polynomial ring QQ[v1, ..., vn] with a fixed variable order."""

    __slots__ = ("vars", "index")

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.vars = names
        self.index = {n: i for i, n in enumerate(names)}

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def zero(self) -> "MPoly":
        return MPoly(self, {})

    def one(self) -> "MPoly":
        return self.const(1)

    def const(self, c) -> "MPoly":
        c = Fraction(c)
        return MPoly(self, {} if c == 0 else {(0,) * self.nvars: c})

    def var(self, name: str) -> "MPoly":
        i = self.index[name]
        e = [0] * self.nvars
        e[i] = 1
        return MPoly(self, {tuple(e): Fraction(1)})

    def monomial(self, exps, coeff=1) -> "MPoly":
        coeff = Fraction(coeff)
        return MPoly(self, {} if coeff == 0 else {tuple(exps): coeff})

    def parse(self, text: str) -> "MPoly":
        return _parse_poly(text, self)

    def extend(self, extra_names) -> "PolyRing":
        return PolyRing(self.vars + tuple(n for n in extra_names if n not in self.index))

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.vars == other.vars

    def __hash__(self):
        return hash(self.vars)

    def __repr__(self):
        return f"PolyRing({', '.join(self.vars)})"


class MPoly:
    """A polynomial: dict from exponent tuples to nonzero Fractions."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- predicates and views ---------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        z = (0,) * self.ring.nvars
        return all(e == z for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        i = self.ring.index[name]
        return max((e[i] for e in self.terms), default=0)

    def variables(self) -> set:
        out = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    out.add(self.ring.vars[i])
        return out

    def coeff_of(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise ValueError("mixed polynomial rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return MPoly(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.is_constant or other.is_zero:
            raise ValueError("can only divide by a nonzero constant")
        inv = 1 / other.constant_value()
        return MPoly(self.ring, {e: c * inv for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return isinstance(other, MPoly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- substitution and evaluation --------------------------------------------

    def subs(self, assignment: dict) -> "MPoly":
        """Substitute variables by Fractions or MPolys of the same ring."""
        values = {}
        for name, v in assignment.items():
            i = self.ring.index[name]
            values[i] = v if isinstance(v, MPoly) else self.ring.const(v)
        out = self.ring.zero()
        for e, c in self.terms.items():
            term = self.ring.const(c)
            for i, k in enumerate(e):
                if not k:
                    continue
                if i in values:
                    term = term * values[i] ** k
                else:
                    term = term * self.ring.monomial(
                        tuple(k if j == i else 0 for j in range(self.ring.nvars)))
            out = out + term
        return out

    def evaluate(self, point: dict) -> Fraction:
        """Evaluate at a full rational point {name: value}."""
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v *= Fraction(point[self.ring.vars[i]]) ** k
            total += v
        return total

    # -- monomial content ----------------------------------------------------------

    def monomial_content(self) -> tuple:
        """Componentwise min exponent vector across all terms (zero poly: zeros)."""
        if not self.terms:
            return (0,) * self.ring.nvars
        its = iter(self.terms)
        m = list(next(its))
        for e in its:
            for i, k in enumerate(e):
                if k < m[i]:
                    m[i] = k
        return tuple(m)

    def divide_monomial(self, exps) -> "MPoly":
        """Exact division by the monomial with the given exponent vector."""
        terms = {}
        for e, c in self.terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if any(k < 0 for k in q):
                raise ValueError("monomial does not divide every term")
            terms[q] = c
        return MPoly(self.ring, terms)

    # -- printing -----------------------------------------------------------------

    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{self.ring.vars[i]}^{k}" if k > 1 else self.ring.vars[i]
                for i, k in enumerate(e) if k)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


# -- parsing -------------------------------------------------------------------------

_POLY_TOKEN = re.compile(r"\s+|\d+|[A-Za-z][A-Za-z0-9_]*|\^|\*|/|\+|-|\(|\)|.")


class PolyParseError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _parse_poly(text: str, ring: PolyRing) -> MPoly:
    toks = []
    for m in _POLY_TOKEN.finditer(text):
        t = m.group()
        if t.isspace():
            continue
        toks.append((t, m.start()))
    pos = 0

    def peek():
        return toks[pos][0] if pos < len(toks) else None

    def take():
        nonlocal pos
        t = toks[pos]
        pos += 1
        return t

    def parse_sum():
        t = peek()
        sign = 1
        while t in ("+", "-"):
            take()
            if t == "-":
                sign = -sign
            t = peek()
        p = parse_product() * sign
        while peek() in ("+", "-"):
            op, _ = take()
            q = parse_product()
            p = p + q if op == "+" else p - q
        return p

    def parse_product():
        p = parse_power()
        while True:
            t = peek()
            if t in ("*", "/"):
                take()
                q = parse_power()
                p = p * q if t == "*" else p / q
            elif t is not None and (t[0].isalnum() or t == "("):
                p = p * parse_power()   # implicit product
            else:
                return p

    def parse_power():
        p = parse_atomic()
        if peek() == "^":
            take()
            t, at = take() if pos < len(toks) else (None, len(text))
            if t is None or not t.isdigit():
                raise PolyParseError("expected integer exponent", at)
            p = p ** int(t)
        return p

    def parse_atomic():
        if pos >= len(toks):
            raise PolyParseError("unexpected end of input", len(text))
        t, at = take()
        if t == "(":
            p = parse_sum()
            if peek() != ")":
                raise PolyParseError("missing closing parenthesis", at)
            take()
            return p
        if t.isdigit():
            return ring.const(int(t))
        if re.match(r"[A-Za-z]", t):
            if t not in ring.index:
                raise PolyParseError(f"unknown variable {t!r}", at)
            return ring.var(t)
        if t == "-":
            return -parse_atomic()
        raise PolyParseError(f"unexpected token {t!r}", at)

    if not toks:
        raise PolyParseError("empty input", 0)
    p = parse_sum()
    if pos < len(toks):
        t, at = toks[pos]
        raise PolyParseError(f"unexpected token {t!r}", at)
    return p


# -- monomial orders on exponent tuples -------------------------------------------------


def lex_key(exps):
    return exps


def degrevlex_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


ORDER_KEYS = {"lex": lex_key, "degrevlex": degrevlex_key}
