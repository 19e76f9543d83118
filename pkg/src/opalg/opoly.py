"""Operated polynomials: exact linear combinations of bracketed words.

Coefficients are either plain rationals or elements of a ``PolyRing`` (for
patterns carrying symbolic parameters).  The product is the word concatenation
extended bilinearly; the operator extends linearly.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .coeffs import MPoly, PolyRing
from .groebner import nf_mod_ideal
from .ordering import GREATER, OrderConfig, compare, sort_words
from .words import (
    UNIT,
    GeneratorSet,
    ParseError,
    Word,
    bracket,
    parse as parse_word,
    substitute,
    to_str,
    word_sort_key,
)


class ZeroPolynomial(ValueError):
    pass


class AmbiguousLeadingCoefficient(ValueError):
    """The order-maximal word's symbolic coefficient may vanish."""


class OPoly:
    """dict from Word to nonzero coefficient (Fraction, or MPoly when ring set)."""

    __slots__ = ("ring", "terms")

    def __init__(self, terms: dict = None, ring: PolyRing = None):
        self.ring = ring
        self.terms = {}
        if terms:
            for w, c in terms.items():
                c = self._coeff(c)
                if not self._is_zero_coeff(c):
                    self.terms[w] = c

    # -- coefficient plumbing ------------------------------------------------

    def _coeff(self, c):
        if self.ring is None:
            if isinstance(c, MPoly):
                raise ValueError("symbolic coefficient in a numeric polynomial")
            return Fraction(c)
        if isinstance(c, MPoly):
            if c.ring != self.ring:
                raise ValueError("mixed coefficient rings")
            return c
        return self.ring.const(c)

    @staticmethod
    def _is_zero_coeff(c) -> bool:
        return c.is_zero if isinstance(c, MPoly) else c == 0

    def _check_compatible(self, other: "OPoly"):
        if self.ring != other.ring:
            raise ValueError("mixed coefficient rings")

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def from_word(w: Word, coeff=1, ring: PolyRing = None) -> "OPoly":
        return OPoly({w: coeff}, ring=ring)

    @staticmethod
    def zero(ring: PolyRing = None) -> "OPoly":
        return OPoly({}, ring=ring)

    def with_ring(self, ring: PolyRing) -> "OPoly":
        """Lift a numeric polynomial into a coefficient ring."""
        if self.ring is not None:
            if self.ring == ring:
                return self
            raise ValueError("polynomial already carries a different ring")
        return OPoly({w: ring.const(c) for w, c in self.terms.items()}, ring=ring)

    # -- ring operations -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, OPoly):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms.get(w, 0) + c
            if self._is_zero_coeff(self._coeff(s)):
                terms.pop(w, None)
            else:
                terms[w] = s
        return OPoly(terms, ring=self.ring)

    def __neg__(self):
        return OPoly({w: -c for w, c in self.terms.items()}, ring=self.ring)

    def __sub__(self, other):
        if not isinstance(other, OPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, MPoly)):
            return self.scale(other)
        if not isinstance(other, OPoly):
            return NotImplemented
        self._check_compatible(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                s = out.get(w, 0) + c1 * c2
                if self._is_zero_coeff(self._coeff(s)):
                    out.pop(w, None)
                else:
                    out[w] = s
        return OPoly(out, ring=self.ring)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, MPoly)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "OPoly":
        c = self._coeff(c)
        if self._is_zero_coeff(c):
            return OPoly.zero(self.ring)
        return OPoly({w: cc * c for w, cc in self.terms.items()}, ring=self.ring)

    def bracket(self) -> "OPoly":
        """Apply the operator linearly: sum c_w [w]."""
        return OPoly({bracket(w): c for w, c in self.terms.items()}, ring=self.ring)

    def __eq__(self, other):
        return (isinstance(other, OPoly) and self.ring == other.ring
                and self.terms == other.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"OPoly({self})"

    def __str__(self):
        return to_str_opoly(self)

    # -- substitution ----------------------------------------------------------------

    def subst_generators(self, mapping: dict) -> "OPoly":
        """Replace generators by words or polynomials, multiplying out."""
        values = {}
        for name, v in mapping.items():
            if isinstance(v, Word):
                v = OPoly.from_word(v, ring=self.ring)
            values[name] = v
        out = OPoly.zero(self.ring)
        for w, c in self.terms.items():
            out = out + self._expand_word(w, values).scale(c)
        return out

    def _expand_word(self, w: Word, values: dict) -> "OPoly":
        prod = OPoly.from_word(UNIT, ring=self.ring)
        for a in w.atoms:
            if isinstance(a, str):
                factor = values.get(a)
                if factor is None:
                    factor = OPoly.from_word(Word((a,)), ring=self.ring)
            else:
                factor = self._expand_word(a, values).bracket()
            prod = prod * factor
        return prod

    def into_context(self, q: Word) -> "OPoly":
        """q|_p: substitute each word of p into the star of context q."""
        out: dict = {}
        for w, c in self.terms.items():
            spliced = substitute(q, w)
            s = out.get(spliced, 0) + c
            if self._is_zero_coeff(self._coeff(s)):
                out.pop(spliced, None)
            else:
                out[spliced] = s
        return OPoly(out, ring=self.ring)

    def map_coeffs(self, fn) -> "OPoly":
        return OPoly({w: fn(c) for w, c in self.terms.items()}, ring=self.ring)

    def evaluate_coeffs(self, point: dict) -> "OPoly":
        """Specialize symbolic coefficients at a rational point."""
        if self.ring is None:
            return self
        return OPoly({w: c.evaluate(point) for w, c in self.terms.items()}, ring=None)


def leading_monomial(p: OPoly, cfg: OrderConfig, ideal_gb=None, strict: bool = False,
                     nonzero=()):
    """Order-maximal word of p with its coefficient.

    With ``ideal_gb``, symbolic coefficients are first reduced modulo the
    constraint ideal and terms whose coefficient reduces to zero are dropped.
    ``strict`` rejects a leading coefficient that could vanish at special
    parameter values; ``nonzero`` names ring variables assumed invertible,
    which certifies coefficients that are monomials in those variables.
    """
    terms = p.terms
    if ideal_gb is not None and p.ring is not None:
        terms = {}
        for w, c in p.terms.items():
            c = nf_mod_ideal(c, ideal_gb)
            if not c.is_zero:
                terms[w] = c
    if not terms:
        raise ZeroPolynomial("no leading monomial: polynomial is zero")
    best = None
    for w in terms:
        if best is None or compare(w, best, cfg) == GREATER:
            best = w
    c = terms[best]
    if strict and isinstance(c, MPoly) and not _certified_nonzero(c, nonzero):
        raise AmbiguousLeadingCoefficient(
            f"leading coefficient {c} on {to_str(best)} may vanish")
    return best, c


def _certified_nonzero(c: MPoly, nonzero) -> bool:
    """Nonzero constant, or a single monomial whose variables are all assumed
    invertible."""
    if c.is_constant:
        return not c.is_zero
    return len(c.terms) == 1 and c.variables() <= set(nonzero)


def monic(p: OPoly, cfg: OrderConfig) -> "OPoly":
    w, c = leading_monomial(p, cfg, strict=True)
    if isinstance(c, MPoly):
        c = c.constant_value()
    return p.scale(Fraction(1, 1) / c)


# -- printing ---------------------------------------------------------------------


def _coeff_parts(c):
    """(sign, body) with sign in {+1, -1}; body never starts with '-'."""
    if isinstance(c, MPoly):
        if c.is_constant:
            return _coeff_parts(c.constant_value())
        if len(c.terms) == 1:
            ((e, q),) = c.terms.items()
            body = str(MPoly(c.ring, {e: abs(q)}))
            return (1 if q > 0 else -1), body
        return 1, f"({c})"
    return (1 if c >= 0 else -1), str(abs(c))


def to_str_opoly(p: OPoly, cfg: OrderConfig = None) -> str:
    if not p.terms:
        return "0"
    if cfg is not None:
        words = sort_words(p.terms, cfg, reverse=True)
    else:
        words = sorted(p.terms, key=word_sort_key)
    parts = []
    for w in words:
        sign, body = _coeff_parts(p.terms[w])
        if w.is_unit:
            term = body
        elif body == "1":
            term = to_str(w)
        else:
            term = f"{body}*{to_str(w)}"
        parts.append((sign, term))
    first_sign, first_term = parts[0]
    out = ("-" if first_sign < 0 else "") + first_term
    for sign, term in parts[1:]:
        out += (" - " if sign < 0 else " + ") + term
    return out


# -- parsing ----------------------------------------------------------------------

_NUM = re.compile(r"\d+(/\d+)?\Z")


def parse_opoly(text: str, gens: GeneratorSet, ring: PolyRing = None) -> OPoly:
    """Parse ``coefficient word +/- ...``; identifiers outside the generator
    set are coefficient variables and require ``ring``.  A coefficient may
    multiply a parenthesized sum of terms, which must end its term."""
    chunks = _split_terms(text)
    if not chunks:
        raise ParseError("empty polynomial", 0)
    total = OPoly.zero(ring)
    for sign, chunk, at in chunks:
        coeff, word_text, word_at = _split_coeff(chunk, at, gens, ring)
        stripped = word_text.strip()
        if stripped.startswith("("):
            inner, after = _take_paren_group(stripped, word_at)
            if after.strip():
                raise ParseError("unexpected text after parenthesized sum",
                                 word_at + len(stripped) - len(after))
            sub = parse_opoly(inner, gens, ring)
            total = total + sub.scale(coeff).scale(sign)
            continue
        if stripped:
            w = _parse_word_at(word_text, gens, word_at)
        else:
            w = UNIT
        term = OPoly.from_word(w, ring=ring).scale(coeff).scale(sign)
        total = total + term
    return total


def _take_paren_group(text: str, at: int):
    """Split ``(inner)rest`` at the matching close parenthesis."""
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return text[1:i], text[i + 1:]
    raise ParseError("unbalanced parenthesis", at)


def _group_mentions_words(tok: str, gens: GeneratorSet) -> bool:
    """Whether a parenthesized group contains word material (a bracket or a
    generator name), as opposed to a pure coefficient expression."""
    if "[" in tok:
        return True
    return any(name in gens for name in re.findall(r"[A-Za-z][A-Za-z0-9_]*",
                                                   tok))


def _split_terms(text: str):
    """Split on top-level + and -, tracking signs and offsets."""
    chunks = []
    depth = 0
    sign = 1
    start = None
    lead_sign_used = False
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced bracket or parenthesis", i)
        if depth == 0 and ch in "+-" and start is None:
            # a sign may prefix only the first term; elsewhere +/- are binary
            if chunks or lead_sign_used:
                raise ParseError("misplaced sign", i)
            if ch == "-":
                sign = -sign
            lead_sign_used = True
            continue
        if depth == 0 and ch in "+-":
            chunks.append((sign, text[start:i], start))
            sign = 1 if ch == "+" else -1
            start = None
            continue
        if start is None and not ch.isspace():
            start = i
    if depth != 0:
        raise ParseError("unbalanced bracket or parenthesis", len(text))
    if start is not None:
        chunks.append((sign, text[start:], start))
    elif chunks or lead_sign_used or not text.strip():
        if not text.strip():
            raise ParseError("empty polynomial", 0)
        raise ParseError("dangling sign", len(text) - 1)
    return chunks


_FACTOR = re.compile(r"\s*(\((?:[^()]|\([^()]*\))*\)|\d+(?:/\d+)?|[A-Za-z][A-Za-z0-9_]*)\s*(\*?)")


def _split_coeff(chunk: str, at: int, gens: GeneratorSet, ring: PolyRing):
    """Peel leading coefficient factors off a term; the rest is the word."""
    coeff = Fraction(1) if ring is None else ring.one()
    pos = 0
    while pos < len(chunk):
        m = _FACTOR.match(chunk, pos)
        if not m:
            break
        tok = m.group(1)
        if tok.startswith("("):
            if _group_mentions_words(tok, gens):
                break  # a parenthesized sum of words, not a coefficient
            if ring is None:
                raise ParseError("symbolic coefficient without a coefficient ring",
                                 at + m.start(1))
            try:
                coeff = coeff * ring.parse(tok[1:-1])
            except ValueError as e:
                raise ParseError(f"bad coefficient: {e}", at + m.start(1)) from None
        elif _NUM.match(tok):
            coeff = coeff * Fraction(tok)
        elif tok not in gens and tok != "1":
            if ring is None or tok not in ring.index:
                raise ParseError(f"unknown identifier {tok!r}", at + m.start(1))
            coeff = coeff * ring.var(tok)
        else:
            break  # start of the word part
        pos = m.end()
    return coeff, chunk[pos:], at + pos


def _parse_word_at(text: str, gens: GeneratorSet, at: int) -> Word:
    try:
        return parse_word(text, gens)
    except ParseError as e:
        raise type(e)(str(e).rsplit(" (at position", 1)[0], e.position + at) from None


# -- operator identities --------------------------------------------------------------

XY = GeneratorSet(["x", "y"])
X_WORD = Word(("x",))
Y_WORD = Word(("y",))

DIFFERENTIAL = "differential"
ROTA_BAXTER = "rota_baxter"


class OpIdentity:
    """An operator identity of differential or Rota-Baxter shape.

    differential: [x y] = N(x, y);  rota_baxter: [x] [y] = [M(x, y)].
    The replacement pattern (N or M) is an OPoly in generators x, y, possibly
    with symbolic coefficients constrained by ``constraints``.
    """

    __slots__ = ("kind", "pattern", "constraints", "name")

    def __init__(self, kind: str, pattern: OPoly, constraints=(), name: str = None):
        if kind not in (DIFFERENTIAL, ROTA_BAXTER):
            raise ValueError(f"unknown identity kind {kind!r}")
        self.kind = kind
        self.pattern = pattern
        self.constraints = tuple(constraints)
        self.name = name

    @property
    def ring(self):
        return self.pattern.ring

    def identity(self) -> OPoly:
        """The defining polynomial: lhs - pattern side."""
        if self.kind == DIFFERENTIAL:
            lhs = OPoly.from_word(bracket(X_WORD * Y_WORD), ring=self.ring)
            return lhs - self.pattern
        lhs = OPoly.from_word(bracket(X_WORD) * bracket(Y_WORD), ring=self.ring)
        return lhs - self.pattern.bracket()

    def instantiate(self, u: Word, v: Word) -> OPoly:
        """The full identity polynomial evaluated at words (u, v)."""
        return self.identity().subst_generators({"x": u, "y": v})

    def pattern_at(self, u: Word, v: Word) -> OPoly:
        """Just the replacement side N(u, v) (or M(u, v))."""
        return self.pattern.subst_generators({"x": u, "y": v})

    def specialize(self, point: dict) -> "OpIdentity":
        """Numeric identity at a rational parameter point."""
        if self.ring is None:
            return self
        for g in self.constraints:
            if g.evaluate(point) != 0:
                raise ValueError(f"point violates constraint {g} = 0")
        return OpIdentity(self.kind, self.pattern.evaluate_coeffs(point),
                          name=self.name)

    def __repr__(self):
        label = self.name or self.kind
        return f"OpIdentity({label}: {self.pattern})"
