"""Monomial comparison on bracketed words.

Two comparison modes share the same atom rule (degree first, generators below
brackets, generators by declared rank, brackets by recursive content
comparison):

* ``purelex`` — lexicographic on atom sequences, the unit and proper prefixes
  minimal.  This is the recursive order the rewriting system is stated with;
  the instance leading-word facts it needs (a bracketed product beats every
  product-bracket-free replacement) hold because those comparisons are decided
  strictly at the first atom by degree.  It is, however, *not* context
  monotone on prefix-comparable pairs, and not well-founded; both defects are
  observable through ``check_monomial_order`` and are guarded operationally in
  the rewrite engine.

* ``deglenlex`` — total generator degree, then breadth, then the same
  lexicographic comparison.  Context monotone and unit minimal on all inputs
  (the lex step only ever compares equal-length sequences).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .words import STAR, Word, sample_word, substitute, to_str

LESS, EQUAL, GREATER = -1, 0, 1

MODES = ("purelex", "deglenlex")


class OrderConfig:
    """Immutable comparison configuration: generator ranks plus mode."""

    __slots__ = ("rank", "mode", "gens")

    def __init__(self, gens, mode: str = "purelex"):
        if mode not in MODES:
            raise ValueError(f"unknown order mode {mode!r}")
        self.gens = gens
        self.rank = dict(gens.rank)
        self.mode = mode

    def __repr__(self):
        return f"OrderConfig({', '.join(self.rank)}; {self.mode})"


def _atom_deg(a) -> int:
    return 1 if isinstance(a, str) else a.deg


def compare_atoms(a, b, cfg: OrderConfig) -> int:
    da, db = _atom_deg(a), _atom_deg(b)
    if da != db:
        return GREATER if da > db else LESS
    a_is_gen, b_is_gen = isinstance(a, str), isinstance(b, str)
    if a_is_gen and b_is_gen:
        ra, rb = cfg.rank[a], cfg.rank[b]
        return EQUAL if ra == rb else (GREATER if ra > rb else LESS)
    if a_is_gen != b_is_gen:
        return LESS if a_is_gen else GREATER   # generators below brackets
    return compare(a, b, cfg)                  # bracket contents, recursively


def compare(u: Word, v: Word, cfg: OrderConfig) -> int:
    """Three-way comparison; total on any finite set of words."""
    if u == v:
        return EQUAL
    if cfg.mode == "deglenlex":
        if u.deg != v.deg:
            return GREATER if u.deg > v.deg else LESS
        if u.breadth != v.breadth:
            return GREATER if u.breadth > v.breadth else LESS
    for a, b in zip(u.atoms, v.atoms):
        c = compare_atoms(a, b, cfg)
        if c != EQUAL:
            return c
    if u.breadth == v.breadth:
        return EQUAL
    return GREATER if u.breadth > v.breadth else LESS   # proper prefix is smaller


def max_word(words, cfg: OrderConfig) -> Word:
    it = iter(words)
    best = next(it)
    for w in it:
        if compare(w, best, cfg) == GREATER:
            best = w
    return best


def sort_words(words, cfg: OrderConfig, reverse: bool = False) -> list:
    import functools
    return sorted(words, key=functools.cmp_to_key(lambda a, b: compare(a, b, cfg)),
                  reverse=reverse)


# -- randomized law checking -----------------------------------------------------


@dataclass
class PropertyReport:
    """Outcome of randomized order-law verification."""

    checked: int = 0
    monotonicity_violations: list = field(default_factory=list)
    unit_violations: list = field(default_factory=list)
    totality_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.monotonicity_violations or self.unit_violations
                    or self.totality_failures)

    def summary(self) -> str:
        if self.ok:
            return f"order laws hold on {self.checked} sampled triples"
        return (f"{len(self.monotonicity_violations)} monotonicity, "
                f"{len(self.unit_violations)} unit-minimality, "
                f"{len(self.totality_failures)} totality failures "
                f"on {self.checked} sampled triples")


def random_context(rng: random.Random, gens, max_leaves: int, max_depth: int) -> Word:
    """A random one-star context: sample a word, insert the star somewhere."""
    w = sample_word(rng, gens, max_leaves, max_depth, include_unit_brackets=True)
    return _insert_star(w, rng, max_depth)


def _insert_star(w: Word, rng: random.Random, depth_left: int) -> Word:
    brackets = [i for i, a in enumerate(w.atoms) if isinstance(a, Word)]
    if brackets and depth_left > 0 and rng.random() < 0.5:
        i = rng.choice(brackets)
        inner = _insert_star(w.atoms[i], rng, depth_left - 1)
        return Word(w.atoms[:i] + (inner,) + w.atoms[i + 1:])
    i = rng.randint(0, w.breadth)
    return Word(w.atoms[:i] + (STAR,) + w.atoms[i:])


def check_monomial_order(cfg: OrderConfig, sample_budget: int = 10000,
                         rng: random.Random = None, max_leaves: int = 4,
                         max_depth: int = 3) -> PropertyReport:
    """Randomized verification of the monomial-order laws for ``cfg``.

    Checks, on sampled (q, u, v): unit minimality 1 < u, totality and
    antisymmetry of the comparison, and context monotonicity
    u < v  =>  q|_u < q|_v.  Counterexample triples are collected verbatim.
    """
    rng = rng or random.Random(0)
    gens = cfg.gens
    report = PropertyReport()
    for _ in range(sample_budget):
        u = sample_word(rng, gens, max_leaves, max_depth, include_unit_brackets=True)
        v = sample_word(rng, gens, max_leaves, max_depth, include_unit_brackets=True)
        q = random_context(rng, gens, max_leaves, max_depth)
        report.checked += 1
        for w in (u, v):
            if not w.is_unit and compare(Word(()), w, cfg) != LESS:
                report.unit_violations.append(to_str(w))
        cuv, cvu = compare(u, v, cfg), compare(v, u, cfg)
        if cuv != -cvu or (cuv == EQUAL) != (u == v):
            report.totality_failures.append((to_str(u), to_str(v)))
            continue
        if cuv == EQUAL:
            continue
        small, big = (u, v) if cuv == LESS else (v, u)
        if compare(substitute(q, small), substitute(q, big), cfg) != LESS:
            report.monotonicity_violations.append(
                (to_str(q), to_str(small), to_str(big)))
    return report
