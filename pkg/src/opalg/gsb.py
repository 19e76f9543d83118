"""Composition checks and basis certificates for operator rewriting systems.

The generator system of a differential-shape identity is the infinite rule
family phi(u, v) = [u v] - N(u, v).  This module enumerates its compositions
at a finite truncation, decides their triviality by reduction, enumerates the
irreducible words, runs the direct-sum (composition-diamond) consequences, and
packages the differential-type / Rota-Baxter-type certificates.
"""

from __future__ import annotations

import random
import re

from .opoly import (DIFFERENTIAL, OPoly, OpIdentity, ROTA_BAXTER,
                    leading_monomial, to_str_opoly)
from .ordering import GREATER, LESS, OrderConfig, compare, random_context
from .rewrite import (NONUNIT_ONLY, ResourceLimit, RuleSchema, Verdict,
                      find_redexes, is_drf, is_rbrf, is_totally_linear,
                      normal_form, reduces_to_zero)
from .words import (GeneratorSet, STAR, UNIT, Word, enumerate_words, occurrences,
                    substitute, to_str)

BOUND_GEN_NAMES = ("u", "v", "w", "p", "q", "r", "s", "t")


class TruncationBound:
    """Word-size budget for truncated checks: words are enumerated with at
    most ``max_breadth`` generator occurrences, nesting depth at most
    ``max_depth``, over ``max_generators`` generators."""

    __slots__ = ("max_breadth", "max_depth", "max_generators")

    def __init__(self, max_breadth: int, max_depth: int, max_generators: int = 3):
        if max_breadth < 1 or max_depth < 0 or max_generators < 1:
            raise ValueError("bound components must be positive")
        if max_generators > len(BOUND_GEN_NAMES):
            raise ValueError(f"at most {len(BOUND_GEN_NAMES)} generators supported")
        self.max_breadth = max_breadth
        self.max_depth = max_depth
        self.max_generators = max_generators

    def generator_set(self) -> GeneratorSet:
        return GeneratorSet(BOUND_GEN_NAMES[:self.max_generators])

    def describe(self) -> str:
        return (f"breadth <= {self.max_breadth}, depth <= {self.max_depth}, "
                f"{self.max_generators} generators")

    def __repr__(self):
        return (f"TruncationBound({self.max_breadth}, {self.max_depth}, "
                f"{self.max_generators})")


class GeneratorSystem:
    """The rule family of one differential-shape identity, with its order."""

    __slots__ = ("identity", "order", "schema")

    def __init__(self, identity: OpIdentity, order: OrderConfig,
                 unit_policy: str = NONUNIT_ONLY):
        if identity.kind != DIFFERENTIAL:
            raise ValueError("generator systems need a differential-shape "
                             "identity; no order is available otherwise")
        self.identity = identity
        self.order = order
        self.schema = RuleSchema(identity, unit_policy=unit_policy, order=order)

    def instance(self, u: Word, v: Word, validate: bool = False) -> OPoly:
        """phi(u, v) = [u v] - N(u, v), monic with leading word [u v]."""
        inst = self.identity.instantiate(u, v)
        if validate:
            lead = Word((u * v,))
            lw, lc = leading_monomial(inst, self.order,
                                      ideal_gb=self.schema.constraint_gb)
            if lw != lead or lc != 1:
                raise ValueError(
                    f"instance at ({to_str(u)}, {to_str(v)}) is not monic with "
                    f"leading word {to_str(lead)}; got {to_str(lw)}")
        return inst

    def normal_form(self, p: OPoly, strategy: str = "lo", step_cap: int = 100000):
        return normal_form(p, self.schema, strategy, step_cap)


# -- compositions -------------------------------------------------------------------

INTERSECTION = "intersection"
INCLUDING = "including"

TRIVIAL = "trivial"
NONTRIVIAL = "nontrivial"


class CompositionRecord:
    __slots__ = ("kind", "f", "g", "w", "value", "mu", "nu", "context",
                 "verdict", "residue", "order_violations", "note")

    def __init__(self, kind, f, g, w, value, mu=None, nu=None, context=None,
                 note=""):
        self.kind = kind
        self.f = f
        self.g = g
        self.w = w
        self.value = value
        self.mu = mu
        self.nu = nu
        self.context = context
        self.verdict = None
        self.residue = None
        self.order_violations = []
        self.note = note

    def describe(self) -> str:
        place = (f"q = {to_str(self.context)}" if self.context is not None else
                 f"mu = {to_str(self.mu)}, nu = {to_str(self.nu)}")
        out = f"{self.kind} at w = {to_str(self.w)} ({place})"
        if self.verdict:
            out += f": {self.verdict}"
            if self.verdict == NONTRIVIAL and self.residue is not None:
                out += f", residue {to_str_opoly(self.residue)}"
        if self.note:
            out += f" [{self.note}]"
        return out


def _assert_monic(p: OPoly, ord: OrderConfig, nonzero=()):
    lw, lc = leading_monomial(p, ord, strict=True, nonzero=nonzero)
    one = lc == 1 or (hasattr(lc, "is_constant") and lc.is_constant
                      and lc.constant_value() == 1)
    if not one:
        raise ValueError(f"polynomial is not monic: leading coefficient {lc}")
    return lw


def compositions(f: OPoly, g: OPoly, ord: OrderConfig, nonzero=()) -> list:
    """All intersection and including compositions of the ordered pair.

    Intersections cover proper top-level overlaps (a suffix of leading(f)
    equals a prefix of leading(g)) and the equal-leading-word case with
    mu = nu = 1; an occurrence of leading(g) strictly inside leading(f)
    yields one including composition per occurrence.  Top-level containment
    of one leading word in the other is the mirrored pair's including case,
    so it is not duplicated here.
    """
    F = _assert_monic(f, ord, nonzero)
    G = _assert_monic(g, ord, nonzero)
    out = []
    m, n = F.breadth, G.breadth
    # including: leading(g) strictly inside leading(f)
    for q in occurrences(F, G):
        if q.atoms == (STAR,):
            continue
        value = f - g.into_context(q)
        out.append(CompositionRecord(INCLUDING, f, g, F, value, context=q))
    # intersections at top level
    for k in range(1, min(m, n) + 1):
        if k == m == n:
            if F == G and not (f is g or f == g):
                out.append(CompositionRecord(
                    INTERSECTION, f, g, F, f - g, mu=UNIT, nu=UNIT))
            continue
        if k == m or k == n:
            continue  # top-level containment: the mirrored including case
        if F.atoms[m - k:] == G.atoms[:k]:
            mu = Word(G.atoms[k:])
            nu = Word(F.atoms[:m - k])
            w = Word(F.atoms + G.atoms[k:])
            value = f * OPoly.from_word(mu) - OPoly.from_word(nu) * g
            out.append(CompositionRecord(INTERSECTION, f, g, w, value,
                                         mu=mu, nu=nu))
    return out


def is_trivial(comp: CompositionRecord, sys: GeneratorSystem,
               step_cap: int = 100000) -> str:
    """Reduce the composition value; trivial iff the normal form vanishes.

    Also asserts each rewritten monomial stays below the ambient word w,
    recording violations on the record instead of hiding them.
    """
    nf, trace = normal_form(comp.value, sys.schema, "lo", step_cap)
    for step in trace.steps:
        if compare(step.monomial, comp.w, sys.order) != LESS:
            comp.order_violations.append(step.monomial)
    if trace.status != "normal_form":
        comp.verdict = NONTRIVIAL
        comp.residue = nf
        comp.note = (comp.note + " step cap exceeded").strip()
        return comp.verdict
    comp.verdict = TRIVIAL if nf.is_zero else NONTRIVIAL
    comp.residue = None if nf.is_zero else nf
    return comp.verdict


# -- truncated basis check ----------------------------------------------------------


class GsbReport:
    __slots__ = ("pattern", "bound", "argument_words", "certify",
                 "intersections_checked", "intersections_reduced",
                 "including_configs", "including_instances_certified",
                 "trivial_count", "nontrivial", "order_violations", "samples")

    def __init__(self, pattern: str, bound: TruncationBound, argument_words: int,
                 certify: str = "transfer"):
        self.pattern = pattern
        self.bound = bound
        self.argument_words = argument_words
        self.certify = certify
        self.intersections_checked = 0
        self.intersections_reduced = 0
        self.including_configs = 0
        self.including_instances_certified = 0
        self.trivial_count = 0
        self.nontrivial = []
        self.order_violations = 0
        self.samples = []

    @property
    def ok(self) -> bool:
        return not self.nontrivial and self.order_violations == 0

    def describe(self) -> str:
        verdict = ("Groebner-Shirshov at the bound" if self.ok
                   else f"{len(self.nontrivial)} nontrivial compositions")
        return (f"{self.pattern}: {verdict} ({self.bound.describe()}; "
                f"{self.argument_words} argument words, "
                f"{self.intersections_checked} intersections "
                f"({self.intersections_reduced} reduced, rest by substitution "
                f"transfer), {self.including_configs} including configurations "
                f"certifying {self.including_instances_certified} instances, "
                f"{self.order_violations} order violations)")

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "bound": {"max_breadth": self.bound.max_breadth,
                      "max_depth": self.bound.max_depth,
                      "max_generators": self.bound.max_generators},
            "argument_words": self.argument_words,
            "certify": self.certify,
            "intersections_checked": self.intersections_checked,
            "intersections_reduced": self.intersections_reduced,
            "including_configs": self.including_configs,
            "including_instances_certified": self.including_instances_certified,
            "trivial": self.trivial_count,
            "nontrivial": [c.describe() for c in self.nontrivial],
            "order_violations": self.order_violations,
            "ok": self.ok,
        }


def _record(report: GsbReport, comp: CompositionRecord, sys: GeneratorSystem,
            step_cap: int, keep: int = 3):
    verdict = is_trivial(comp, sys, step_cap)
    report.order_violations += len(comp.order_violations)
    if verdict == TRIVIAL:
        report.trivial_count += 1
        if len(report.samples) < keep:
            report.samples.append(comp)
    else:
        report.nontrivial.append(comp)


class _NFCache:
    """Per-schema memo of the leftmost-outermost normal form of each word.

    Rewriting acts monomial by monomial, so the strategy normal form of a
    combination is the matching combination of the per-word normal forms;
    caching those makes repeated composition checks cheap.  Each cached trace
    is also audited: no rewritten monomial may exceed the root word.
    """

    __slots__ = ("schema", "step_cap", "map", "order_violations")

    def __init__(self, schema: RuleSchema, step_cap: int):
        self.schema = schema
        self.step_cap = step_cap
        self.map = {}
        self.order_violations = 0

    def nf_word(self, w: Word) -> OPoly:
        hit = self.map.get(w)
        if hit is not None:
            return hit
        nf, trace = normal_form(OPoly.from_word(w, ring=self.schema.identity.ring),
                                self.schema, "lo", self.step_cap)
        if trace.status != "normal_form":
            raise ResourceLimit(f"step cap {self.step_cap} hit at {to_str(w)}")
        order = self.schema.order
        if order is not None:
            for step in trace.steps:
                if compare(step.monomial, w, order) == GREATER:
                    self.order_violations += 1
        self.map[w] = nf
        return nf

    def reduce(self, p: OPoly) -> OPoly:
        out = OPoly.zero(p.ring)
        for w, c in p.terms.items():
            out = out + self.nf_word(w).scale(c)
        return self.schema.normalize(out)


def gsb_check_truncated(sys: GeneratorSystem, bound: TruncationBound,
                        step_cap: int = 100000, certify: str = "transfer",
                        sample_size: int = 200, rng: random.Random = None,
                        max_reductions: int = 2000000) -> GsbReport:
    """Check triviality of every composition of instance pairs at the bound.

    Intersection compositions are in bijection with triples (r, s, t) of
    bound words such that both split arguments stay inside the bound: the
    pair phi(r s, t), phi(r, s t) overlaps at [r s t].  In ``transfer`` mode
    the triple of distinct single generators is reduced once and certifies
    every other triple, because substituting r, s, t for the generators maps
    each rewrite step of the trace to a rewrite step (or a cancellation) of
    the instance; a deterministic sample of triples is reduced concretely on
    top of that.  In ``concrete`` mode every triple is reduced.

    Including compositions are enumerated per structural configuration (host
    word, nested redex, side), with the host's other argument kept generic;
    the same substitution argument transfers each configuration's verdict to
    every bound word in the spectator slot.
    """
    if certify not in ("transfer", "concrete"):
        raise ValueError(f"unknown certification mode {certify!r}")
    rng = rng or random.Random(7)
    gens = bound.generator_set()
    B = bound.max_breadth
    words = enumerate_words(gens, B, bound.max_depth,
                            include_unit_brackets=False, include_unit=False)
    by_leaves = {}
    for w in words:
        by_leaves.setdefault(w.leaves, []).append(w)
    report = GsbReport(sys.identity.name or "pattern", bound, len(words), certify)
    ident = sys.identity
    cache = _NFCache(sys.schema, step_cap)
    budget = [max_reductions]

    def check_triple(r, s, t):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimit(f"reduction cap {max_reductions} exceeded")
        value = ident.pattern_at(r, s * t) - ident.pattern_at(r * s, t)
        w = Word((r * s * t,))
        report.intersections_reduced += 1
        for m in value.terms:
            if compare(m, w, sys.order) != LESS:
                report.order_violations += 1
        residue = cache.reduce(value)
        if residue.is_zero:
            if len(report.samples) < 3:
                comp = CompositionRecord(INTERSECTION, sys.instance(r * s, t),
                                         sys.instance(r, s * t), w, value,
                                         mu=UNIT, nu=UNIT)
                comp.verdict = TRIVIAL
                report.samples.append(comp)
            return True
        comp = CompositionRecord(INTERSECTION, sys.instance(r * s, t),
                                 sys.instance(r, s * t), w, value,
                                 mu=UNIT, nu=UNIT)
        comp.verdict = NONTRIVIAL
        comp.residue = residue
        report.nontrivial.append(comp)
        return False

    # intersections: f = phi(r s, t), g = phi(r, s t), overlap at [r s t];
    # the bracket leading words cancel, leaving N(r, s t) - N(r s, t)
    triples = []
    for ls in sorted(by_leaves):
        arg_max = B - ls
        sides = [w for l in sorted(by_leaves) if l <= arg_max
                 for w in by_leaves[l]]
        for s in by_leaves[ls]:
            for r in sides:
                for t in sides:
                    report.intersections_checked += 1
                    triples.append((r, s, t))
    if certify == "transfer" and bound.max_generators < 3:
        report.certify = certify = "concrete"  # need 3 independent slots
    if certify == "concrete":
        for r, s, t in triples:
            if check_triple(r, s, t):
                report.trivial_count += 1
    else:
        names = gens.names
        master = (Word((names[0],)), Word((names[1],)), Word((names[2],)))
        master_ok = check_triple(*master)
        picks = rng.sample(triples, min(sample_size, len(triples)))
        sample_ok = all([check_triple(r, s, t) for (r, s, t) in picks])
        if master_ok and sample_ok:
            report.trivial_count = report.intersections_checked
    report.order_violations += cache.order_violations

    # including: nested redexes of [host . spectator], spectator generic
    spect_gens = GeneratorSet(tuple(gens.names) + ("zspec",))
    spectator = Word(("zspec",))
    spect_order = OrderConfig(spect_gens, sys.order.mode)
    spect_sys = GeneratorSystem(sys.identity, spect_order,
                                unit_policy=sys.schema.unit_policy)
    spect_cache = _NFCache(spect_sys.schema, step_cap)
    star_only = (STAR,)
    for host in words:
        for u1, v1 in ((host, spectator), (spectator, host)):
            lead = Word((u1 * v1,))
            f = spect_sys.instance(u1, v1)
            for redex in find_redexes(lead, spect_sys.schema):
                if redex.context.atoms == star_only:
                    continue  # top-level splits are the intersection cases
                g = spect_sys.instance(redex.a, redex.b)
                value = f - g.into_context(redex.context)
                report.including_configs += 1
                report.including_instances_certified += len(words)
                budget[0] -= 1
                if budget[0] < 0:
                    raise ResourceLimit(
                        f"reduction cap {max_reductions} exceeded")
                for m in value.terms:
                    if compare(m, lead, spect_order) != LESS:
                        report.order_violations += 1
                residue = spect_cache.reduce(value)
                if residue.is_zero:
                    # one trivial configuration certifies every spectator word
                    report.trivial_count += len(words)
                else:
                    comp = CompositionRecord(INCLUDING, f, g, lead, value,
                                             context=redex.context,
                                             note="spectator argument generic")
                    comp.verdict = NONTRIVIAL
                    comp.residue = residue
                    report.nontrivial.append(comp)
    report.order_violations += spect_cache.order_violations
    return report


# -- irreducible words and direct-sum checks ----------------------------------------


def irr_enumerate(sys: GeneratorSystem, bound: TruncationBound,
                  gens: GeneratorSet = None) -> set:
    """All bound words carrying no redex of the system's schema."""
    gens = gens or bound.generator_set()
    out = set()
    for w in enumerate_words(gens, bound.max_breadth, bound.max_depth,
                             include_unit_brackets=True, include_unit=True):
        if not find_redexes(w, sys.schema):
            out.add(w)
    return out


class CdlReport:
    __slots__ = ("words_checked", "irr_size", "irr_unit_surplus", "failures",
                 "ideal_zeros", "ideal_samples")

    def __init__(self):
        self.words_checked = 0
        self.irr_size = 0
        self.irr_unit_surplus = 0
        self.failures = []
        self.ideal_zeros = 0
        self.ideal_samples = 0

    @property
    def ok(self) -> bool:
        return not self.failures and self.ideal_zeros == self.ideal_samples

    def describe(self) -> str:
        state = "passes" if self.ok else f"FAILS ({len(self.failures)} failures)"
        return (f"direct-sum check {state}: {self.words_checked} words into a "
                f"{self.irr_size}-word irreducible span "
                f"({self.irr_unit_surplus} containing unit brackets), "
                f"{self.ideal_zeros}/{self.ideal_samples} ideal elements to zero")


def _contains_unit_bracket(w: Word) -> bool:
    for a in w.atoms:
        if isinstance(a, Word) and (a.is_unit or _contains_unit_bracket(a)):
            return True
    return False


def cdl_direct_sum_check(sys: GeneratorSystem, bound: TruncationBound,
                         rng: random.Random = None, ideal_samples: int = 100,
                         gens: GeneratorSet = None) -> CdlReport:
    """Executable direct-sum consequences of the basis property.

    Every bound word must normalize into the irreducible span, irreducible
    words must be fixed, and random elements of the rule ideal must vanish.
    """
    rng = rng or random.Random(0)
    gens = gens or bound.generator_set()
    report = CdlReport()
    irr = irr_enumerate(sys, bound, gens)
    report.irr_size = len(irr)
    report.irr_unit_surplus = sum(1 for w in irr if _contains_unit_bracket(w))
    all_words = enumerate_words(gens, bound.max_breadth, bound.max_depth,
                                include_unit_brackets=True, include_unit=True)
    for w in all_words:
        report.words_checked += 1
        nf, trace = sys.normal_form(OPoly.from_word(w))
        if trace.status != "normal_form":
            report.failures.append((w, "step cap"))
            continue
        if w in irr and nf != OPoly.from_word(w, ring=nf.ring):
            report.failures.append((w, "irreducible word moved"))
            continue
        for m in nf.terms:
            if find_redexes(m, sys.schema):
                report.failures.append((w, f"reducible support word {to_str(m)}"))
                break
    # ideal elements q|phi(u, v); rejection-sample the assembled word so the
    # reductions stay tractable a little past the bound
    pool = [w for w in all_words if not w.is_unit]
    max_host_leaves = bound.max_breadth + 3
    max_host_depth = bound.max_depth + 1
    for _ in range(ideal_samples):
        host = None
        for _attempt in range(200):
            u = rng.choice(pool)
            v = rng.choice(pool)
            q = random_context(rng, gens, bound.max_breadth, bound.max_depth)
            host = substitute(q, Word((u * v,)))
            if host.leaves <= max_host_leaves and host.depth() <= max_host_depth:
                break
        elem = sys.instance(u, v).into_context(q)
        nf, trace = sys.normal_form(elem)
        report.ideal_samples += 1
        if nf.is_zero and trace.status == "normal_form":
            report.ideal_zeros += 1
        else:
            report.failures.append((host, "ideal element residue"))
    return report


# -- operator-identity type certificates --------------------------------------------

UVW = GeneratorSet(("u", "v", "w"))
U_WORD = Word(("u",))
V_WORD = Word(("v",))
W_WORD = Word(("w",))


class TypeReport:
    __slots__ = ("kind", "accepted", "reason", "witness", "verdict", "pattern",
                 "constraints")

    def __init__(self, kind, pattern, constraints=()):
        self.kind = kind
        self.pattern = pattern
        self.constraints = tuple(constraints)
        self.accepted = False
        self.reason = ""
        self.witness = None
        self.verdict = None

    @property
    def inconclusive(self) -> bool:
        return self.verdict is not None and self.verdict.kind == Verdict.INCONCLUSIVE

    def describe(self) -> str:
        label = "differential type" if self.kind == DIFFERENTIAL else "Rota-Baxter type"
        if self.accepted:
            return f"accepted: {label}"
        out = f"rejected: not {label} ({self.reason})"
        if self.witness is not None and not self.witness.is_zero:
            out += f"; witness {to_str_opoly(self.witness)}"
        return out


def _structure_reject(report: TypeReport, reason: str) -> TypeReport:
    report.accepted = False
    report.reason = reason
    return report


def dt_check(pattern: OPoly, constraints=(), strategy: str = "lo",
             order_mode: str = "purelex", step_cap: int = 10000,
             explore_budget: int = 4000) -> TypeReport:
    """Certificate that [x y] -> pattern defines a differential-shape identity
    whose associativity defect rewrites to zero over three fresh generators."""
    report = TypeReport(DIFFERENTIAL, pattern, constraints)
    if not is_totally_linear(pattern):
        return _structure_reject(report, "not totally linear in x, y")
    if not is_drf(pattern):
        return _structure_reject(report, "contains a bracketed product")
    ident = OpIdentity(DIFFERENTIAL, pattern, tuple(constraints))
    schema = RuleSchema(ident, order=OrderConfig(UVW, order_mode))
    defect = (ident.pattern_at(U_WORD * V_WORD, W_WORD)
              - ident.pattern_at(U_WORD, V_WORD * W_WORD))
    verdict = reduces_to_zero(defect, schema, strategy, step_cap, explore_budget)
    report.verdict = verdict
    report.accepted = verdict.is_yes
    if not report.accepted:
        report.reason = f"defect does not rewrite to zero ({verdict.detail})"
        report.witness = verdict.witness
    return report


def rbt_check(pattern: OPoly, constraints=(), strategy: str = "lo",
              step_cap: int = 10000, explore_budget: int = 2000) -> TypeReport:
    """Certificate that [x][y] -> [pattern] defines a Rota-Baxter-shape
    identity: the operated associativity defect M(M(u,v),w) - M(u,M(v,w))
    rewrites to zero within budget (no termination certificate exists, so
    the verdict may be inconclusive)."""
    report = TypeReport(ROTA_BAXTER, pattern, constraints)
    if not is_totally_linear(pattern):
        return _structure_reject(report, "not totally linear in x, y")
    if not is_rbrf(pattern):
        return _structure_reject(report, "contains adjacent bracket factors")
    ident = OpIdentity(ROTA_BAXTER, pattern, tuple(constraints))
    schema = RuleSchema(ident, unit_policy=NONUNIT_ONLY)
    ring = ident.ring
    m_uv = pattern.subst_generators({"x": U_WORD, "y": V_WORD})
    m_vw = pattern.subst_generators({"x": V_WORD, "y": W_WORD})
    defect = (pattern.subst_generators(
                  {"x": m_uv, "y": OPoly.from_word(W_WORD, ring=ring)})
              - pattern.subst_generators(
                  {"x": OPoly.from_word(U_WORD, ring=ring), "y": m_vw}))
    verdict = reduces_to_zero(defect, schema, strategy, step_cap, explore_budget)
    report.verdict = verdict
    report.accepted = verdict.is_yes
    if not report.accepted:
        report.reason = f"defect does not rewrite to zero ({verdict.detail})"
        report.witness = verdict.witness
    return report


# -- the free operator on differential words ----------------------------------------

_ORDER_SUFFIX = re.compile(r"^(.*)_([0-9]+)$")


def raise_order(name: str) -> str:
    """z -> z_1 -> z_2 -> ...: the next derivative marker of a generator."""
    m = _ORDER_SUFFIX.match(name)
    if m:
        return f"{m.group(1)}_{int(m.group(2)) + 1}"
    return name + "_1"


def free_dt_operator_nf(u: Word, identity: OpIdentity) -> OPoly:
    """The induced operator d on bracket-free words over derivative markers.

    d(z_i) raises the marker; on longer words d(u1 u2...uk) expands the
    replacement pattern at (u1, u2...uk) with bracket slots read as recursive
    applications of d.  The result is always bracket-free.
    """
    pattern = identity.pattern
    ring = identity.ring
    if u.is_unit:
        raise ValueError("the recursion does not define d at the unit")
    if any(isinstance(a, Word) for a in u.atoms):
        raise ValueError("d acts on bracket-free words over derivative markers")
    for mono in pattern.terms:
        for sub in _unit_brackets(mono):
            raise ValueError(
                "patterns with unit-bracket terms induce no operator on "
                f"bracket-free words (offending monomial {to_str(mono)})")

    def d_word(w: Word) -> OPoly:
        atoms = w.atoms
        if len(atoms) == 1:
            return OPoly.from_word(Word((raise_order(atoms[0]),)), ring=ring)
        return eval_pattern(Word(atoms[:1]), Word(atoms[1:]))

    def d_poly(p: OPoly) -> OPoly:
        out = OPoly.zero(ring)
        for w, c in p.terms.items():
            out = out + d_word(w).scale(c)
        return out

    def interp(word: Word, a: Word, b: Word) -> OPoly:
        out = OPoly.from_word(UNIT, ring=ring)
        for atom in word.atoms:
            if atom == "x":
                factor = OPoly.from_word(a, ring=ring)
            elif atom == "y":
                factor = OPoly.from_word(b, ring=ring)
            else:
                factor = d_poly(interp(atom, a, b))
            out = out * factor
        return out

    def eval_pattern(a: Word, b: Word) -> OPoly:
        out = OPoly.zero(ring)
        for mono, coeff in pattern.terms.items():
            out = out + interp(mono, a, b).scale(coeff)
        return out

    return d_word(u)


def _unit_brackets(w: Word):
    for a in w.atoms:
        if isinstance(a, Word):
            if a.is_unit:
                yield a
            else:
                yield from _unit_brackets(a)


def delta_view(p: OPoly) -> OPoly:
    """Collapse pure derivative towers: a bracket around a single generator
    becomes the raised generator, recursively.  Words in reduced form over
    derivative markers become bracket-free under this view."""

    def atom_view(a):
        if isinstance(a, str):
            return a
        inner = tuple(atom_view(x) for x in a.atoms)
        if len(inner) == 1 and isinstance(inner[0], str):
            return raise_order(inner[0])
        return Word(inner)

    out = OPoly.zero(p.ring)
    for w, c in p.terms.items():
        out = out + OPoly.from_word(Word(tuple(atom_view(a) for a in w.atoms)),
                                    c, ring=p.ring)
    return out
