"""Bracketed words: elements of the free operated monoid on a generator set.

A word is a finite sequence of atoms.  An atom is either a generator (kept as
its name string) or a bracket ``[w]`` whose content is again a word.  The empty
sequence is the unit 1.  ``[1]`` is an ordinary atom like any other and is
never simplified away.

Each occurrence of a subword inside a word is described by a *context*: a word
containing exactly one star atom; splicing a word into the star recovers the
original.  Splicing the unit deletes the star.
"""

from __future__ import annotations

import random
from typing import Iterator, Union

STAR = "⋆"      # context hole
STAR1 = "⋆" + "1"
STAR2 = "⋆" + "2"
RESERVED = frozenset({"1", STAR, STAR1, STAR2})

Atom = Union[str, "Word"]  # str: generator name; Word w in atom position: [w]


class Word:
    """An immutable bracketed word (sequence of atoms)."""

    __slots__ = ("atoms", "_hash", "_deg", "_leaves")

    def __init__(self, atoms: tuple = ()):
        self.atoms = atoms
        self._hash = hash(atoms)
        self._deg = -1
        self._leaves = -1

    # -- basic shape -------------------------------------------------------

    @property
    def breadth(self) -> int:
        return len(self.atoms)

    @property
    def is_unit(self) -> bool:
        return not self.atoms

    @property
    def deg(self) -> int:
        """Number of generator occurrences, with multiplicity."""
        if self._deg < 0:
            d = 0
            for a in self.atoms:
                d += 1 if isinstance(a, str) else a.deg
            self._deg = d
        return self._deg

    def depth(self) -> int:
        """Maximal bracket nesting."""
        d = 0
        for a in self.atoms:
            if isinstance(a, Word):
                d = max(d, 1 + a.depth())
        return d

    @property
    def leaves(self) -> int:
        """Generator occurrences plus innermost unit brackets.

        Dominates the breadth of every nesting level, so bounding it bounds
        breadth everywhere while keeping enumeration finite.
        """
        if self._leaves < 0:
            n = 0
            for a in self.atoms:
                if isinstance(a, str):
                    n += 1
                else:
                    n += 1 if a.is_unit else a.leaves
            self._leaves = n
        return self._leaves

    # -- monoid structure ----------------------------------------------------

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if not self.atoms:
            return other
        if not other.atoms:
            return self
        return Word(self.atoms + other.atoms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self._hash == other._hash and self.atoms == other.atoms

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Word({to_str(self)!r})"

    def __str__(self) -> str:
        return to_str(self)


UNIT = Word(())


def gen_word(name: str) -> Word:
    return Word((name,))


def bracket(w: Word) -> Word:
    """The word [w] of breadth one."""
    return Word((w,))


def word_of(*atoms: Atom) -> Word:
    return Word(tuple(atoms))


def generators_in(w: Word) -> set:
    out: set = set()
    for a in w.atoms:
        if isinstance(a, str):
            out.add(a)
        else:
            out |= generators_in(a)
    return out


# -- generator sets ----------------------------------------------------------

import re as _re

_IDENT = _re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class GeneratorSet:
    """Ordered generator names; declaration order is the rank used by orders."""

    __slots__ = ("names", "rank")

    def __init__(self, names):
        names = tuple(names)
        seen = set()
        for n in names:
            if n in RESERVED:
                raise ValueError(f"generator name {n!r} is reserved")
            if not _IDENT.match(n):
                raise ValueError(f"invalid generator name {n!r}")
            if n in seen:
                raise ValueError(f"duplicate generator name {n!r}")
            seen.add(n)
        self.names = names
        self.rank = {n: i for i, n in enumerate(names)}

    def __contains__(self, name: str) -> bool:
        return name in self.rank

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"GeneratorSet({', '.join(self.names)})"


# -- printing and parsing ------------------------------------------------------


def to_str(w: Word) -> str:
    """Single-space-separated atom list; the unit prints as ``1``."""
    if w.is_unit:
        return "1"
    return " ".join(_atom_str(a) for a in w.atoms)


def _atom_str(a: Atom) -> str:
    if isinstance(a, str):
        return a
    return "[" + to_str(a) + "]"


def tokens(w: Word) -> list:
    """Flat token list: generator names and the two bracket symbols."""
    out: list = []
    _tokens_into(w, out)
    return out


def _tokens_into(w: Word, out: list) -> None:
    for a in w.atoms:
        if isinstance(a, str):
            out.append(a)
        else:
            out.append("[")
            _tokens_into(a, out)
            out.append("]")


def token_len(w: Word) -> int:
    n = 0
    for a in w.atoms:
        n += 1 if isinstance(a, str) else 2 + token_len(a)
    return n


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnbalancedBrackets(ParseError):
    pass


class UnknownGenerator(ParseError):
    pass


class EmptyBracketWithoutUnit(ParseError):
    pass


_TOKEN = _re.compile(r"\s+|\*|\[|\]|1|[A-Za-z][A-Za-z0-9_]*|.")


def _lex(text: str):
    """Yield (kind, value, position); '*' and whitespace are concatenation."""
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if tok.isspace():
            continue
        if tok == "*":
            yield "star", tok, m.start()
        elif tok == "[" or tok == "]":
            yield tok, tok, m.start()
        elif tok == "1":
            yield "unit", tok, m.start()
        elif _IDENT.match(tok):
            yield "ident", tok, m.start()
        else:
            raise ParseError(f"unexpected character {tok!r}", m.start())


def parse(text: str, gens: GeneratorSet) -> Word:
    """Parse the word grammar: ``word := "1" | atom+``, ``atom := IDENT | "[" word "]"``."""
    toks = list(_lex(text))
    pos = 0

    def parse_word(closing: bool):
        nonlocal pos
        atoms = []
        saw_unit_alone = False
        pending_star = None
        while pos < len(toks):
            kind, val, at = toks[pos]
            if kind == "]":
                break
            if kind == "star":
                if not atoms or pending_star is not None or saw_unit_alone:
                    raise ParseError("misplaced concatenation symbol '*'", at)
                pending_star = at
                pos += 1
                continue
            if kind == "unit":
                if atoms or saw_unit_alone:
                    raise ParseError("the unit symbol 1 must stand alone in its word", at)
                pos += 1
                if pos < len(toks) and toks[pos][0] not in ("]",):
                    raise ParseError("the unit symbol 1 must stand alone in its word", toks[pos][2])
                saw_unit_alone = True
                continue
            if kind == "ident":
                if val not in gens:
                    raise UnknownGenerator(f"unknown generator {val!r}", at)
                atoms.append(val)
                pending_star = None
                pos += 1
                continue
            if kind == "[":
                open_at = at
                pos += 1
                if pos < len(toks) and toks[pos][0] == "]":
                    raise EmptyBracketWithoutUnit(
                        "empty bracket: write [1] for the bracket of the unit", open_at)
                inner = parse_word(closing=True)
                if pos >= len(toks) or toks[pos][0] != "]":
                    raise UnbalancedBrackets("missing closing bracket", open_at)
                pos += 1
                atoms.append(inner)
                pending_star = None
                continue
            raise ParseError(f"unexpected token {val!r}", at)
        if pending_star is not None:
            raise ParseError("dangling concatenation symbol '*'", pending_star)
        return Word(tuple(atoms))

    if not toks:
        raise ParseError("empty input", 0)
    w = parse_word(closing=False)
    if pos < len(toks):
        kind, val, at = toks[pos]
        if kind == "]":
            raise UnbalancedBrackets("unmatched closing bracket", at)
        raise ParseError(f"unexpected token {val!r}", at)
    return w


# -- star contexts and substitution --------------------------------------------


def star_count(w: Word, star: str = STAR) -> int:
    n = 0
    for a in w.atoms:
        if isinstance(a, str):
            n += a == star
        else:
            n += star_count(a, star)
    return n


def substitute(q: Word, u: Word, star: str = STAR) -> Word:
    """Splice ``u`` into the unique ``star`` atom of ``q``.

    Splicing the unit deletes the star; a breadth-k word splices in flat.
    """
    atoms = []
    for a in q.atoms:
        if isinstance(a, str):
            if a == star:
                atoms.extend(u.atoms)
            else:
                atoms.append(a)
        else:
            atoms.append(substitute(a, u, star) if star_count(a, star) else a)
    return Word(tuple(atoms))


def substitute2(q: Word, u1: Word, u2: Word) -> Word:
    """Fill a two-star context; equals either one-at-a-time route."""
    return substitute(substitute(q, u1, STAR1), u2, STAR2)


def compose(q1: Word, q2: Word, star: str = STAR) -> Word:
    """The context obtained by plugging ``q2`` into ``q1``'s star."""
    return substitute(q1, q2, star)


def occurrences(w: Word, u: Word, star: str = STAR) -> list:
    """All contexts q with q|_u = w, left-to-right by string position, ties outside-in."""
    return [q for q, _ in occurrence_spans(w, u, star)]


def occurrence_spans(w: Word, u: Word, star: str = STAR) -> list:
    """Occurrences with their half-open token intervals [start, end)."""
    if u.is_unit:
        raise ValueError("occurrences of the unit are not enumerable")
    found: list = []
    _scan(w, u, 0, lambda rebuilt, start: found.append((rebuilt, start)), star)
    found.sort(key=lambda qs: qs[1])
    return [(q, (s, s + token_len(u))) for q, s in found]


def _scan(w: Word, u: Word, base: int, emit, star: str) -> None:
    pat = u.atoms
    k = len(pat)
    # token offset of each atom at this level
    offs = []
    off = base
    for a in w.atoms:
        offs.append(off)
        off += 1 if isinstance(a, str) else 2 + token_len(a)
    for i in range(len(w.atoms) - k + 1):
        if w.atoms[i:i + k] == pat:
            q = Word(w.atoms[:i] + (star,) + w.atoms[i + k:])
            emit(q, offs[i])
        # outside-in tie-breaking is vacuous here: a nested occurrence always
        # starts at least one token later than its enclosing bracket atom
    for i, a in enumerate(w.atoms):
        if isinstance(a, Word):
            prefix = w.atoms[:i]
            suffix = w.atoms[i + 1:]

            def emit_inner(q_inner, start, prefix=prefix, suffix=suffix):
                emit(Word(prefix + (q_inner,) + suffix), start)

            _scan(a, u, offs[i] + 1, emit_inner, star)


SEPARATED = "separated"
OVERLAPPING = "overlapping"
NESTED = "nested"


def classify_pair(w: Word, q1: Word, u1: Word, q2: Word, u2: Word) -> str:
    """Relative position of two subword occurrences of ``w`` (Def-style trichotomy)."""
    if substitute(q1, u1) != w or substitute(q2, u2) != w:
        raise ValueError("contexts do not reproduce the word")
    s1 = _star_token_offset(q1)
    s2 = _star_token_offset(q2)
    i1 = (s1, s1 + token_len(u1))
    i2 = (s2, s2 + token_len(u2))
    lo, hi = (i1, i2) if i1 <= i2 else (i2, i1)
    if lo[1] <= hi[0]:
        return SEPARATED
    if (i1[0] <= i2[0] and i2[1] <= i1[1]) or (i2[0] <= i1[0] and i1[1] <= i2[1]):
        return NESTED
    return OVERLAPPING


def _star_token_offset(q: Word, star: str = STAR) -> int:
    off = _find_star(q, 0, star)
    if off is None:
        raise ValueError("context has no star")
    return off


def _find_star(q: Word, base: int, star: str):
    off = base
    for a in q.atoms:
        if isinstance(a, str):
            if a == star:
                return off
            off += 1
        else:
            inner = _find_star(a, off + 1, star)
            if inner is not None:
                return inner
            off += 2 + token_len(a)
    return None


# -- enumeration and sampling ----------------------------------------------------


def enumerate_words(gens, max_leaves: int, max_depth: int,
                    include_unit_brackets: bool = True,
                    include_unit: bool = True) -> list:
    """All words with the given leaf and depth bounds, deterministically ordered."""
    names = tuple(gens.names if isinstance(gens, GeneratorSet) else gens)
    atom_pool = _atom_pool(names, max_leaves, max_depth, include_unit_brackets)
    out = [UNIT] if include_unit else []
    out.extend(_sequences(atom_pool, max_leaves))
    return out


def _atom_pool(names, max_leaves, max_depth, include_unit_brackets):
    """Atoms grouped by leaf count: pool[k] lists atoms with k leaves."""
    if max_depth <= 0 or max_leaves <= 0:
        pool = [[] for _ in range(max_leaves + 1)]
        if max_leaves >= 1:
            pool[1] = list(names)
        return pool
    inner = _atom_pool(names, max_leaves, max_depth - 1, include_unit_brackets)
    pool = [[] for _ in range(max_leaves + 1)]
    if max_leaves >= 1:
        pool[1] = list(names)
        if include_unit_brackets:
            pool[1].append(bracket(UNIT).atoms[0])  # the unit-content atom
    for w in _sequences(inner, max_leaves):
        pool[w.leaves].append(w)  # the word w in atom position means [w]
    return pool


def _sequences(atom_pool, max_leaves):
    """All nonempty atom sequences with total leaf count <= max_leaves."""
    results = []

    def extend(prefix, budget):
        for k in range(1, budget + 1):
            for a in atom_pool[k]:
                seq = prefix + (a,)
                results.append(Word(seq))
                extend(seq, budget - k)

    extend((), max_leaves)
    return results


def sample_word(rng: random.Random, gens, max_leaves: int, max_depth: int,
                include_unit_brackets: bool = False, allow_unit: bool = False) -> Word:
    """One random word within the bounds (not uniform; biased toward small)."""
    names = tuple(gens.names if isinstance(gens, GeneratorSet) else gens)

    def atom(depth_left, budget):
        if depth_left > 0 and rng.random() < 0.35:
            inner = build(depth_left - 1, budget, allow_empty=include_unit_brackets)
            if inner.is_unit and not include_unit_brackets:
                return rng.choice(names)
            return inner
        return rng.choice(names)

    def build(depth_left, budget, allow_empty):
        lo = 0 if allow_empty else 1
        n = rng.randint(lo, max(lo, budget))
        atoms = []
        left = budget
        for _ in range(n):
            if left <= 0:
                break
            a = atom(depth_left, left)
            atoms.append(a)
            left -= 1 if isinstance(a, str) else max(1, a.leaves)
        return Word(tuple(atoms))

    w = build(max_depth, max_leaves, allow_empty=allow_unit)
    if w.is_unit and not allow_unit:
        return gen_word(rng.choice(names))
    return w


def word_sort_key(w: Word):
    """Deterministic non-semantic key for stable listings."""
    return (w.leaves, w.depth(), token_len(w), tuple(tokens(w)))


def iter_subterms(w: Word) -> Iterator[Word]:
    """All bracket contents occurring in w, outermost first."""
    for a in w.atoms:
        if isinstance(a, Word):
            yield a
            yield from iter_subterms(a)
