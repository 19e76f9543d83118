"""Classification of operator identities by ansatz reduction.

A candidate replacement pattern with indeterminate coefficients is reduced
against its own rules; the surviving monomial coefficients give a polynomial
constraint system whose solution components are the admissible identities.
Components are matched against the built-in catalog by sampling points in
both directions.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .catalog import Family, families
from .coeffs import MPoly, PolyRing
from .gsb import dt_check, rbt_check
from .opoly import DIFFERENTIAL, OPoly, OpIdentity, ROTA_BAXTER, to_str_opoly
from .ordering import OrderConfig
from .rewrite import NONUNIT_ONLY, NORMAL_FORM, RuleSchema, normal_form
from .solve import SolutionComponent, find_representative, sample_points, \
    solve_components
from .words import GeneratorSet, UNIT, Word, enumerate_words, to_str, \
    word_sort_key

XY = GeneratorSet(("x", "y"))
UVW = GeneratorSet(("u", "v", "w"))
U_WORD = Word(("u",))
V_WORD = Word(("v",))
W_WORD = Word(("w",))


class ReductionBudgetExceeded(RuntimeError):
    """The defect reduction did not reach a fixed point within the budget."""


class Ansatz:
    """A totally linear candidate pattern with indeterminate coefficients."""

    __slots__ = ("mode", "terms", "ring", "pattern")

    def __init__(self, mode: str, terms):
        self.mode = mode
        self.terms = tuple(terms)
        names = [name for name, _ in self.terms]
        self.ring = PolyRing(names)
        poly = {}
        for name, word in self.terms:
            poly[word] = self.ring.var(name)
        self.pattern = OPoly(poly, ring=self.ring)

    def identity(self) -> OpIdentity:
        return OpIdentity(self.mode, self.pattern)

    def specialize(self, point: dict) -> OPoly:
        """The numeric pattern at a coefficient assignment."""
        return self.pattern.evaluate_coeffs(point)

    def coefficient_point(self, pattern: OPoly):
        """Express a concrete pattern in this ansatz's coordinates, or None
        if its support leaves the ansatz's monomial space."""
        by_word = {w: n for n, w in self.terms}
        point = {name: Fraction(0) for name, _ in self.terms}
        for w, c in pattern.terms.items():
            name = by_word.get(w)
            if name is None:
                return None
            if isinstance(c, MPoly):
                if not c.is_constant:
                    return None
                c = c.constant_value()
            point[name] = c
        return point

    def describe(self) -> str:
        body = " + ".join(f"{n}*{to_str(w)}" for n, w in self.terms)
        return f"{self.mode} ansatz with {len(self.terms)} terms: {body}"

    def __repr__(self):
        return f"Ansatz({self.mode}, {len(self.terms)} terms)"


def _total_brackets(w: Word) -> int:
    n = 0
    for a in w.atoms:
        if isinstance(a, Word):
            n += 1 + _total_brackets(a)
    return n


def _gen_positions(w: Word, out=None):
    """Generator names in reading order, descending into brackets."""
    if out is None:
        out = []
    for a in w.atoms:
        if isinstance(a, Word):
            _gen_positions(a, out)
        else:
            out.append(a)
    return out


def _tower_heights(w: Word):
    """For a two-atom product of iterated single brackets, the (generator,
    height) of each factor; None when the word has another shape."""
    heights = []
    for a in w.atoms:
        h = 0
        while isinstance(a, Word):
            if len(a.atoms) != 1:
                return None
            h += 1
            a = a.atoms[0]
        heights.append((a, h))
    return heights


def build_ansatz(mode: str, max_op_degree: int,
                 include_unit_terms: bool = False,
                 include_reversed: bool = True) -> Ansatz:
    """Enumerate all admissible totally linear monomials in x and y up to the
    operator degree and attach a fresh coefficient to each.

    Differential mode admits reduced (bracket-of-product-free) monomials with
    per-factor tower height up to the degree; Rota-Baxter mode admits
    monomials free of adjacent brackets with total bracket count up to the
    degree.  ``include_unit_terms`` adds unit-bracket factors within the same
    budget; ``include_reversed`` keeps the y-before-x arrangements.
    """
    if max_op_degree < 0:
        raise ValueError("operator degree must be nonnegative")
    from .rewrite import word_is_drf, word_is_rbrf
    unit_budget = max_op_degree if include_unit_terms else 0
    if mode == DIFFERENTIAL:
        shape_ok = word_is_drf
        max_depth = max_op_degree
    elif mode == ROTA_BAXTER:
        shape_ok = word_is_rbrf
        max_depth = max_op_degree
    else:
        raise ValueError(f"unknown mode {mode!r}")
    picked = []
    for w in enumerate_words(XY, 2 + unit_budget, max_depth,
                             include_unit_brackets=include_unit_terms,
                             include_unit=False):
        gens = _gen_positions(w)
        if sorted(gens) != ["x", "y"]:
            continue
        if not include_reversed and gens != ["x", "y"]:
            continue
        if not shape_ok(w):
            continue
        if mode == ROTA_BAXTER and _total_brackets(w) > max_op_degree:
            continue
        picked.append(w)
    picked.sort(key=word_sort_key)
    terms = []
    counter = itertools.count()
    for w in picked:
        name = None
        if mode == DIFFERENTIAL and not include_unit_terms:
            towers = _tower_heights(w)
            if towers and len(towers) == 2:
                (g1, h1), (g2, h2) = towers
                name = (f"a{h1}{h2}" if (g1, g2) == ("x", "y")
                        else f"b{h1}{h2}")
        if name is None:
            name = f"c{next(counter):02d}"
        terms.append((name, w))
    return Ansatz(mode, terms)


class Equation:
    __slots__ = ("poly", "monomial", "unresolved")

    def __init__(self, poly, monomial, unresolved):
        self.poly = poly
        self.monomial = monomial
        self.unresolved = unresolved

    def describe(self) -> str:
        tag = " (unresolved: unit-bracket residue)" if self.unresolved else ""
        return f"{self.poly} = 0   from {to_str(self.monomial)}{tag}"


class ConstraintSystem:
    __slots__ = ("ansatz", "equations", "strategy", "step_cap")

    def __init__(self, ansatz, equations, strategy, step_cap):
        self.ansatz = ansatz
        self.equations = tuple(equations)
        self.strategy = strategy
        self.step_cap = step_cap

    def polynomials(self):
        return [eq.poly for eq in self.equations if not eq.unresolved]

    def unresolved(self):
        return [eq for eq in self.equations if eq.unresolved]

    def satisfied_at(self, point: dict) -> bool:
        return all(eq.poly.evaluate(point) == 0 for eq in self.equations
                   if not eq.unresolved)

    def describe(self) -> str:
        lines = [f"{len(self.equations)} constraints "
                 f"({len(self.unresolved())} unresolved), "
                 f"strategy {self.strategy}"]
        lines += ["  " + eq.describe() for eq in self.equations]
        return "\n".join(lines)


def _unit_residue(w: Word) -> bool:
    """A unit bracket nested inside another bracket, the shape the reduction
    cannot interpret canonically."""
    def inside(word, depth):
        for a in word.atoms:
            if isinstance(a, Word):
                if a.is_unit and depth > 0:
                    return True
                if inside(a, depth + 1):
                    return True
        return False
    return inside(w, 0)


def ansatz_defect(ansatz: Ansatz) -> OPoly:
    """The associativity defect of the candidate pattern over fresh
    generators u, v, w."""
    pattern = ansatz.pattern
    if ansatz.mode == DIFFERENTIAL:
        ident = ansatz.identity()
        return (ident.pattern_at(U_WORD * V_WORD, W_WORD)
                - ident.pattern_at(U_WORD, V_WORD * W_WORD))
    m_uv = pattern.subst_generators({"x": U_WORD, "y": V_WORD})
    m_vw = pattern.subst_generators({"x": V_WORD, "y": W_WORD})
    return (pattern.subst_generators(
                {"x": m_uv, "y": OPoly.from_word(W_WORD, ring=ansatz.ring)})
            - pattern.subst_generators(
                {"x": OPoly.from_word(U_WORD, ring=ansatz.ring), "y": m_vw}))


def extract_constraints(ansatz: Ansatz, strategy: str = "lo",
                        step_cap: int = 4000) -> ConstraintSystem:
    """Reduce the defect with the ansatz's own rules and read off one
    equation per surviving monomial."""
    ident = ansatz.identity()
    order = OrderConfig(UVW) if ansatz.mode == DIFFERENTIAL else None
    schema = RuleSchema(ident, unit_policy=NONUNIT_ONLY, order=order)
    defect = ansatz_defect(ansatz)
    nf, trace = normal_form(defect, schema, strategy, step_cap)
    if trace.status != NORMAL_FORM:
        raise ReductionBudgetExceeded(
            f"defect reduction exceeded {step_cap} steps "
            f"({len(nf.terms)} monomials pending)")
    equations = []
    for w in sorted(nf.terms, key=word_sort_key):
        coeff = nf.terms[w]
        if not isinstance(coeff, MPoly):
            coeff = ansatz.ring.const(coeff)
        equations.append(Equation(coeff, w, _unit_residue(w)))
    return ConstraintSystem(ansatz, equations, strategy, step_cap)


class ClassifyResult:
    __slots__ = ("ansatz", "system", "components", "audit_failures")

    def __init__(self, ansatz, system, components, audit_failures):
        self.ansatz = ansatz
        self.system = system
        self.components = tuple(components)
        self.audit_failures = tuple(audit_failures)

    def describe(self) -> str:
        lines = [self.ansatz.describe(),
                 f"{len(self.system.equations)} constraints, "
                 f"{len(self.components)} components"]
        for n, comp in enumerate(self.components, 1):
            lines.append(f"  component {n}: {comp.describe()}")
        if self.system.unresolved():
            lines.append(f"  unresolved unit constraints: "
                         f"{len(self.system.unresolved())}")
        if self.audit_failures:
            lines.append(f"  AUDIT FAILURES: {len(self.audit_failures)}")
        return "\n".join(lines)


def _audit_component(ansatz: Ansatz, comp: SolutionComponent) -> bool:
    point = comp.representative
    if point is None:
        point = find_representative(comp.basis, comp.nonzero, ansatz.ring)
    if point is None:
        return False
    pattern = ansatz.specialize(point)
    if ansatz.mode == DIFFERENTIAL:
        return dt_check(pattern).accepted
    return rbt_check(pattern).accepted


def classify(ansatz: Ansatz, budget: int = 4000,
             strategy: str = "lo") -> ClassifyResult:
    """Extract constraints, split the solution set into components, and
    self-audit each component's representative with the matching type check.
    Components failing the audit are reported, never silently emitted."""
    system = extract_constraints(ansatz, strategy, budget)
    components = solve_components(system.polynomials(), ansatz.ring)
    passed, failed = [], []
    for comp in components:
        (passed if _audit_component(ansatz, comp) else failed).append(comp)
    return ClassifyResult(ansatz, system, passed, failed)


# -- catalog matching ----------------------------------------------------------------


class MatchReport:
    __slots__ = ("component_matches", "unmatched_components", "mismatches",
                 "family_coverage", "uncovered_families", "samples")

    def __init__(self, samples):
        self.samples = samples
        self.component_matches = {}
        self.unmatched_components = []
        self.mismatches = []
        self.family_coverage = {}
        self.uncovered_families = []

    @property
    def ok(self) -> bool:
        return not (self.unmatched_components or self.uncovered_families
                    or self.mismatches)

    def describe(self) -> str:
        lines = [f"catalog match at {self.samples} samples per component: "
                 f"{'clean' if self.ok else 'with defects'}"]
        for idx in sorted(self.component_matches):
            lines.append(f"  component {idx + 1} -> {self.component_matches[idx]}")
        for idx in self.unmatched_components:
            lines.append(f"  component {idx + 1} -> UNMATCHED")
        for key, count in sorted(self.family_coverage.items()):
            lines.append(f"  family {key}: {count} representative(s) covered")
        for key in self.uncovered_families:
            lines.append(f"  family {key}: NOT COVERED")
        if self.mismatches:
            lines.append(f"  {len(self.mismatches)} sample mismatches")
        return "\n".join(lines)


def _family_inspace_components(fam: Family, ansatz: Ansatz):
    """Components of the family's parameter space whose patterns stay inside
    the ansatz's monomial support."""
    ring = fam.ring()
    ident = fam.identity()
    support = {w for _, w in ansatz.terms}
    eqs = [c for c in ident.constraints]
    for w, coeff in ident.pattern.terms.items():
        if w not in support:
            if not isinstance(coeff, MPoly):
                coeff = ring.const(coeff)
            eqs.append(coeff)
    for poly in eqs:
        if poly.is_constant and poly.constant_value() != 0:
            return []  # a fixed out-of-space term: nothing to cover
    return solve_components(eqs, ring)


def match_catalog(result: ClassifyResult, catalog=None, samples: int = 20,
                  rng: random.Random = None) -> MatchReport:
    """Bidirectional containment between components and catalog families.

    Every component must specialize, at each sampled rational point, into a
    single catalog family; every family specialization living inside the
    ansatz space must satisfy some component.  Unmatched items are listed.
    """
    rng = rng or random.Random(0)
    ansatz = result.ansatz
    catalog = catalog if catalog is not None else families(ansatz.mode)
    report = MatchReport(samples)

    for idx, comp in enumerate(result.components):
        points = sample_points(comp.basis, comp.nonzero, ansatz.ring,
                               samples, rng, strict=False)
        hits = {fam.key: 0 for fam in catalog}
        for point in points:
            pattern = ansatz.specialize(point)
            matched = False
            for fam in catalog:
                if fam.membership(pattern) is not None:
                    hits[fam.key] += 1
                    matched = True
            if not matched:
                report.mismatches.append((idx, point))
        full = [key for key, n in hits.items() if n == len(points)]
        if full and points:
            report.component_matches[idx] = full[0]
        else:
            report.unmatched_components.append(idx)

    for fam in catalog:
        covered = 0
        reachable = 0
        for fcomp in _family_inspace_components(fam, ansatz):
            fpoints = sample_points(fcomp.basis, fcomp.nonzero, fam.ring(),
                                    max(1, samples // 4), rng, strict=False)
            for fpoint in fpoints:
                pattern = fam.specialize(fpoint).pattern
                point = ansatz.coefficient_point(pattern)
                if point is None:
                    continue
                reachable += 1
                if any(comp.contains_point(point)
                       for comp in result.components):
                    covered += 1
        report.family_coverage[fam.key] = covered
        if covered < reachable:
            report.uncovered_families.append(fam.key)
    return report
