"""Rewriting of operated polynomials by operator-identity rules.

Two rule shapes exist.  A sigma rule replaces a bracketed product,
``[a b] -> N(a, b)``; a pi rule fuses adjacent operator factors,
``[a] [b] -> [M(a, b)]``.  Reduction acts on one monomial occurrence per
step, keeps a full trace, and never assumes global termination: every
loop is guarded by a step cap, and sigma termination is monitored by an
explicit multiset measure rather than taken on faith.
"""

from __future__ import annotations

from collections import namedtuple

from .groebner import buchberger, nf_mod_ideal
from .opoly import DIFFERENTIAL, OPoly, OpIdentity, to_str_opoly
from .ordering import GREATER, OrderConfig, compare
from .words import (STAR, UNIT, Word, enumerate_words, substitute, to_str,
                    token_len, word_sort_key)

NONUNIT_ONLY = "nonunit"
ALLOW_UNITS = "allow"
UNIT_POLICIES = (NONUNIT_ONLY, ALLOW_UNITS)


class NotTotallyLinear(ValueError):
    pass


class NotDRF(ValueError):
    pass


class NotRBRF(ValueError):
    pass


class ResourceLimit(RuntimeError):
    pass


# -- pattern shape predicates -------------------------------------------------------


def count_generator(w: Word, name: str) -> int:
    n = 0
    for a in w.atoms:
        if isinstance(a, str):
            n += a == name
        else:
            n += count_generator(a, name)
    return n


def is_totally_linear(p: OPoly, names=("x", "y")) -> bool:
    """Every monomial contains each listed generator exactly once."""
    return all(count_generator(w, g) == 1 for w in p.terms for g in names)


def word_is_drf(w: Word) -> bool:
    for a in w.atoms:
        if isinstance(a, Word):
            if a.breadth >= 2 or not word_is_drf(a):
                return False
    return True


def word_is_rbrf(w: Word) -> bool:
    prev_bracket = False
    for a in w.atoms:
        if isinstance(a, Word):
            if prev_bracket or not word_is_rbrf(a):
                return False
            prev_bracket = True
        else:
            prev_bracket = False
    return True


def is_drf(p: OPoly) -> bool:
    """No monomial has a bracketed-product subterm."""
    return all(word_is_drf(w) for w in p.terms)


def is_rbrf(p: OPoly) -> bool:
    """No monomial has two adjacent bracket factors."""
    return all(word_is_rbrf(w) for w in p.terms)


# -- rule schemas -------------------------------------------------------------------


class RuleSchema:
    """A sigma or pi rule family derived from one operator identity."""

    __slots__ = ("kind", "identity", "unit_policy", "order", "constraint_gb",
                 "certified_confluent")

    def __init__(self, identity: OpIdentity, unit_policy: str = NONUNIT_ONLY,
                 order: OrderConfig = None, certified_confluent: bool = False):
        if unit_policy not in UNIT_POLICIES:
            raise ValueError(f"unknown unit policy {unit_policy!r}")
        self.kind = "sigma" if identity.kind == DIFFERENTIAL else "pi"
        pattern = identity.pattern
        if not is_totally_linear(pattern):
            raise NotTotallyLinear(
                f"replacement pattern is not totally linear: {to_str_opoly(pattern)}")
        if self.kind == "sigma" and not is_drf(pattern):
            raise NotDRF(
                f"sigma replacement is not in reduced form: {to_str_opoly(pattern)}")
        if self.kind == "pi" and not is_rbrf(pattern):
            raise NotRBRF(
                f"pi replacement is not in reduced form: {to_str_opoly(pattern)}")
        self.identity = identity
        self.unit_policy = unit_policy
        self.order = order
        self.certified_confluent = certified_confluent
        if identity.constraints:
            self.constraint_gb = buchberger(list(identity.constraints),
                                            identity.ring)
        else:
            self.constraint_gb = None

    def replacement(self, a: Word, b: Word) -> OPoly:
        out = self.identity.pattern_at(a, b)
        if self.kind == "pi":
            out = out.bracket()
        return out

    def reduce_coeff(self, c):
        if self.constraint_gb is None or not hasattr(c, "ring"):
            return c
        return nf_mod_ideal(c, self.constraint_gb)

    def normalize(self, p: OPoly) -> OPoly:
        if self.constraint_gb is None or p.ring is None:
            return p
        return p.map_coeffs(lambda c: nf_mod_ideal(c, self.constraint_gb))

    def lift(self, p: OPoly) -> OPoly:
        """Match ``p`` to the pattern's coefficient ring when it has none."""
        if self.identity.ring is not None and p.ring is None:
            return p.with_ring(self.identity.ring)
        return p

    def __repr__(self):
        return f"RuleSchema({self.kind}: {self.identity!r}, {self.unit_policy})"


# A redex: ``context`` has one star where the matched subterm sits, the match
# is (a, b), and ``span`` is the matched subterm's token interval.
Redex = namedtuple("Redex", ["context", "a", "b", "span"])


def _sigma_splits(content: Word, policy: str):
    atoms = content.atoms
    for i in range(1, len(atoms)):
        yield Word(atoms[:i]), Word(atoms[i:])
    if policy == ALLOW_UNITS:
        if content.is_unit:
            yield UNIT, UNIT
        else:
            yield UNIT, content
            yield content, UNIT


def _collect_redexes(w: Word, schema: RuleSchema, inner_first: bool) -> list:
    sigma = schema.kind == "sigma"
    policy = schema.unit_policy
    out = []

    def visit(word: Word, wrap, offset: int):
        atoms = word.atoms
        pos = offset
        for i, a in enumerate(atoms):
            here = []
            a_len = 1 if isinstance(a, str) else token_len(a) + 2
            if isinstance(a, Word):
                if sigma:
                    for left, right in _sigma_splits(a, policy):
                        q = wrap(atoms[:i] + (STAR,) + atoms[i + 1:])
                        here.append(Redex(q, left, right, (pos, pos + a_len)))
                elif i + 1 < len(atoms) and isinstance(atoms[i + 1], Word):
                    # any adjacent bracket pair is a pi redex: the rule family
                    # ranges over all words, the unit policy only selects
                    # sigma content splits
                    ca, cb = a, atoms[i + 1]
                    q = wrap(atoms[:i] + (STAR,) + atoms[i + 2:])
                    b_len = token_len(cb) + 2
                    here.append(Redex(q, ca, cb, (pos, pos + a_len + b_len)))
            if not inner_first:
                out.extend(here)
            if isinstance(a, Word):
                def wrap_inner(rep, _i=i, _atoms=atoms, _wrap=wrap):
                    return _wrap(_atoms[:_i] + (Word(rep),) + _atoms[_i + 1:])
                visit(a, wrap_inner, pos + 1)
            if inner_first:
                out.extend(here)
            pos += a_len

    visit(w, Word, 0)
    return out


def find_redexes(w: Word, schema: RuleSchema) -> list:
    """All schema matches in ``w``, leftmost-outermost first."""
    return _collect_redexes(w, schema, inner_first=False)


# -- traces -------------------------------------------------------------------------

NORMAL_FORM = "normal_form"
STEP_CAP_EXCEEDED = "step_cap_exceeded"

TraceStep = namedtuple("TraceStep", ["monomial", "context", "a", "b", "coeff"])


class ReductionTrace:
    __slots__ = ("steps", "status", "order_violations")

    def __init__(self):
        self.steps = []
        self.status = NORMAL_FORM
        self.order_violations = []

    def __len__(self):
        return len(self.steps)

    def render(self) -> str:
        lines = []
        for n, s in enumerate(self.steps, 1):
            lines.append(f"{n}. {to_str(s.monomial)}  at  {to_str(s.context)}"
                         f"  with  ({to_str(s.a)}, {to_str(s.b)})")
        lines.append(f"status: {self.status}")
        if self.order_violations:
            lines.append(f"order violations: {len(self.order_violations)}")
        return "\n".join(lines)


def _monomial_key(cfg: OrderConfig):
    if cfg is None:
        return word_sort_key
    import functools
    return functools.cmp_to_key(lambda a, b: compare(a, b, cfg))


def redex_measure(p: OPoly, schema: RuleSchema):
    """Nested multiset of redex sizes: per monomial, the descending tuple of
    deg values of matched subterms; overall, the descending tuple of those.

    Tuples of naturals sorted descending compare under Python's tuple order
    exactly as the multiset order, so strict decrease is a plain ``<``.
    """
    per = []
    for w in p.terms:
        sizes = sorted((r.a.deg + r.b.deg for r in find_redexes(w, schema)),
                       reverse=True)
        if sizes:
            per.append(tuple(sizes))
    return tuple(sorted(per, reverse=True))


def normal_form(p: OPoly, schema: RuleSchema, strategy: str = "lo",
                step_cap: int = 100000, monitor: bool = False):
    """Reduce to a fixed point of the schema; returns (result, trace).

    The strategy-first redex of the order-maximal reducible monomial is
    rewritten each step.  ``monitor`` additionally asserts, per step, that
    the replaced monomial strictly dominates every replacement monomial when
    an order is configured; violations are recorded on the trace, never
    silently dropped.
    """
    if strategy not in ("lo", "li"):
        raise ValueError(f"unknown strategy {strategy!r}")
    inner_first = strategy == "li"
    trace = ReductionTrace()
    key = _monomial_key(schema.order)
    p = schema.normalize(schema.lift(p))
    while True:
        target = None
        for w in sorted(p.terms, key=key, reverse=True):
            redexes = _collect_redexes(w, schema, inner_first)
            if redexes:
                target = (w, redexes[0])
                break
        if target is None:
            trace.status = NORMAL_FORM
            return p, trace
        if len(trace.steps) >= step_cap:
            trace.status = STEP_CAP_EXCEEDED
            return p, trace
        w, redex = target
        c = p.terms[w]
        repl = schema.replacement(redex.a, redex.b).into_context(redex.context)
        if monitor and schema.order is not None:
            for m in repl.terms:
                if compare(w, m, schema.order) != GREATER:
                    trace.order_violations.append((w, m))
        delta = (repl - OPoly.from_word(w, ring=p.ring)).scale(c)
        trace.steps.append(TraceStep(w, redex.context, redex.a, redex.b, c))
        p = schema.normalize(p + delta)


# -- verdicts and joinability -------------------------------------------------------


class Verdict:
    __slots__ = ("kind", "witness", "detail")

    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"

    def __init__(self, kind: str, witness: OPoly = None, detail: str = ""):
        self.kind = kind
        self.witness = witness
        self.detail = detail

    @property
    def is_yes(self) -> bool:
        return self.kind == Verdict.YES

    def __repr__(self):
        extra = f", {self.detail}" if self.detail else ""
        return f"Verdict({self.kind}{extra})"


def _poly_key(p: OPoly):
    return frozenset(p.terms.items())


def _one_step_reducts(p: OPoly, schema: RuleSchema):
    """Every polynomial reachable in exactly one rewrite step, any position."""
    seen = set()
    for w, c in p.terms.items():
        for redex in find_redexes(w, schema):
            repl = schema.replacement(redex.a, redex.b).into_context(redex.context)
            q = schema.normalize(
                p + (repl - OPoly.from_word(w, ring=p.ring)).scale(c))
            k = _poly_key(q)
            if k not in seen:
                seen.add(k)
                yield q


def reduces_to_zero(p: OPoly, schema: RuleSchema, strategy: str = "lo",
                    step_cap: int = 10000, explore_budget: int = 2000) -> Verdict:
    """Does some reduction of ``p`` reach zero?

    Strategy reduction first; a nonzero normal form is final when the schema
    is certified confluent, and otherwise triggers exhaustive exploration of
    rewrite choices up to ``explore_budget`` distinct polynomials.  Symbolic
    coefficients count as zero when they lie in the constraint ideal.
    """
    p = schema.normalize(schema.lift(p))
    if p.is_zero:
        return Verdict(Verdict.YES, detail="zero in 0 steps")
    nf, trace = normal_form(p, schema, strategy, step_cap)
    if nf.is_zero:
        return Verdict(Verdict.YES, detail=f"zero after {len(trace)} steps")
    if trace.status == STEP_CAP_EXCEEDED:
        return Verdict(Verdict.INCONCLUSIVE, witness=nf,
                       detail=f"step cap {step_cap} exceeded")
    if schema.certified_confluent:
        return Verdict(Verdict.NO, witness=nf,
                       detail="nonzero normal form under a confluent system")
    frontier = [p]
    visited = {_poly_key(p)}
    while frontier:
        if len(visited) > explore_budget:
            return Verdict(Verdict.INCONCLUSIVE, witness=nf,
                           detail=f"exploration budget {explore_budget} exceeded")
        q = frontier.pop()
        for r in _one_step_reducts(q, schema):
            if r.is_zero:
                return Verdict(Verdict.YES, detail="zero on an explored branch")
            k = _poly_key(r)
            if k not in visited:
                visited.add(k)
                frontier.append(r)
    return Verdict(Verdict.NO, witness=nf,
                   detail=f"all {len(visited)} reachable polynomials nonzero")


def joinable(f: OPoly, g: OPoly, schema: RuleSchema, strategy: str = "lo",
             step_cap: int = 10000, explore_budget: int = 2000) -> Verdict:
    """Do ``f`` and ``g`` reach a common reduct?

    Decided through their difference first (reduction of f - g to zero
    certifies joinability); otherwise the reduct sets are intersected
    within the exploration budget.
    """
    f = schema.normalize(schema.lift(f))
    g = schema.normalize(schema.lift(g))
    if f == g:
        return Verdict(Verdict.YES, detail="equal in 0 steps")
    diff = reduces_to_zero(f - g, schema, strategy, step_cap, explore_budget)
    if diff.is_yes:
        return Verdict(Verdict.YES, detail=f"difference vanishes ({diff.detail})")

    def reduct_set(p):
        out = {_poly_key(p): p}
        frontier = [p]
        while frontier and len(out) <= explore_budget:
            q = frontier.pop()
            for r in _one_step_reducts(q, schema):
                k = _poly_key(r)
                if k not in out:
                    out[k] = r
                    frontier.append(r)
        complete = not frontier
        return out, complete

    rf, cf = reduct_set(f)
    rg, cg = reduct_set(g)
    common = set(rf) & set(rg)
    if common:
        return Verdict(Verdict.YES, detail="common reduct found by search")
    if cf and cg:
        return Verdict(Verdict.NO, witness=f - g, detail="reduct sets disjoint")
    return Verdict(Verdict.INCONCLUSIVE, witness=f - g,
                   detail="exploration budget exhausted")


# -- local confluence ---------------------------------------------------------------


class ConfluenceReport:
    __slots__ = ("words_checked", "peaks_checked", "nonjoinable", "inconclusive",
                 "bound_note")

    def __init__(self):
        self.words_checked = 0
        self.peaks_checked = 0
        self.nonjoinable = []
        self.inconclusive = []
        self.bound_note = ""

    @property
    def ok(self) -> bool:
        return not self.nonjoinable and not self.inconclusive

    def summary(self) -> str:
        verdict = "locally confluent at bound" if self.ok else "NOT confluent"
        return (f"{verdict}: {self.words_checked} words, "
                f"{self.peaks_checked} peaks, {len(self.nonjoinable)} non-joinable, "
                f"{len(self.inconclusive)} undecided ({self.bound_note})")


def local_confluence_check(schema: RuleSchema, gens, max_leaves: int = 3,
                           max_depth: int = 2, peak_cap: int = 200000,
                           explore_budget: int = 2000) -> ConfluenceReport:
    """Check joinability of every one-step peak on all words within the bound.

    Every pair of distinct redexes of every enumerated word is a peak; the
    three relative positions (separated, overlapping, nested) all arise from
    the enumeration itself.  Raises ResourceLimit when the peak count would
    exceed ``peak_cap``.
    """
    report = ConfluenceReport()
    report.bound_note = f"leaves <= {max_leaves}, depth <= {max_depth}"
    words = enumerate_words(gens, max_leaves, max_depth,
                            include_unit_brackets=True, include_unit=True)
    for w in words:
        report.words_checked += 1
        redexes = find_redexes(w, schema)
        if len(redexes) < 2:
            continue
        reducts = []
        for redex in redexes:
            repl = schema.replacement(redex.a, redex.b).into_context(redex.context)
            reducts.append(schema.normalize(repl))
        for i in range(len(reducts)):
            for j in range(i + 1, len(reducts)):
                report.peaks_checked += 1
                if report.peaks_checked > peak_cap:
                    raise ResourceLimit(
                        f"peak cap {peak_cap} exceeded at {to_str(w)}")
                verdict = joinable(reducts[i], reducts[j], schema,
                                   explore_budget=explore_budget)
                if verdict.kind == Verdict.NO:
                    report.nonjoinable.append((w, reducts[i], reducts[j]))
                elif verdict.kind == Verdict.INCONCLUSIVE:
                    report.inconclusive.append((w, reducts[i], reducts[j]))
    return report
