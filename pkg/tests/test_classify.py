"""Ansatz construction, constraint extraction, and catalog matching."""

import itertools
import random
from fractions import Fraction

import pytest

from opalg.catalog import FAMILIES
from opalg.classify import (Ansatz, ReductionBudgetExceeded, ansatz_defect,
                            build_ansatz, classify, extract_constraints,
                            match_catalog)
from opalg.coeffs import PolyRing
from opalg.gsb import dt_check
from opalg.opoly import DIFFERENTIAL, ROTA_BAXTER
from opalg.solve import solve_components
from opalg.words import GeneratorSet, parse, to_str

XY = GeneratorSet(("x", "y"))


def w(text):
    return parse(text, XY)


def three_term():
    return Ansatz(DIFFERENTIAL,
                  [("a", w("x [y]")), ("b", w("[x] y")), ("e", w("x y"))])


# -- ansatz construction -------------------------------------------------------------


def test_dt_degree2_has_18_terms_with_tower_names():
    ans = build_ansatz(DIFFERENTIAL, 2)
    assert len(ans.terms) == 18
    names = {n for n, _ in ans.terms}
    assert names == {f"{s}{i}{j}" for s in "ab" for i in range(3)
                     for j in range(3)}
    lookup = {n: to_str(word) for n, word in ans.terms}
    assert lookup["a00"] == "x y"
    assert lookup["b00"] == "y x"
    assert lookup["a21"] == "[[x]] [y]"
    assert lookup["b12"] == "[y] [[x]]"


def test_dt_degree0_is_the_two_products():
    ans = build_ansatz(DIFFERENTIAL, 0)
    assert [(n, to_str(word)) for n, word in ans.terms] == \
        [("a00", "x y"), ("b00", "y x")]


def test_dt_degree2_without_reversed_has_9_terms():
    ans = build_ansatz(DIFFERENTIAL, 2, include_reversed=False)
    assert len(ans.terms) == 9
    assert all(n.startswith("a") for n, _ in ans.terms)


def test_rbt_degree1_with_units_is_the_14_monomials():
    ans = build_ansatz(ROTA_BAXTER, 1, include_unit_terms=True)
    got = {to_str(word) for _, word in ans.terms}
    assert got == {"x y", "y x", "[x] y", "[y] x", "x [y]", "y [x]",
                   "[x y]", "[y x]", "[1] x y", "[1] y x", "x [1] y",
                   "y [1] x", "x y [1]", "y x [1]"}
    assert len(ans.terms) == 14


def test_rbt_degree1_without_units_has_8_terms():
    ans = build_ansatz(ROTA_BAXTER, 1)
    got = {to_str(word) for _, word in ans.terms}
    assert got == {"x y", "y x", "[x] y", "[y] x", "x [y]", "y [x]",
                   "[x y]", "[y x]"}


def test_rbt_degree_counts_total_brackets():
    ans = build_ansatz(ROTA_BAXTER, 2)
    words = {to_str(word) for _, word in ans.terms}
    assert "[[x] y]" in words
    assert "[[x y]]" in words
    assert "[x] [y]" not in words  # adjacent brackets are a redex shape


def test_build_ansatz_rejects_bad_input():
    with pytest.raises(ValueError):
        build_ansatz(DIFFERENTIAL, -1)
    with pytest.raises(ValueError):
        build_ansatz("lie", 2)


def test_ansatz_specialize_and_coefficient_point_roundtrip():
    ans = three_term()
    point = {"a": Fraction(1), "b": Fraction(1), "e": Fraction(5)}
    pattern = ans.specialize(point)
    assert ans.coefficient_point(pattern) == point
    assert ans.coefficient_point(pattern + pattern) == \
        {"a": Fraction(2), "b": Fraction(2), "e": Fraction(10)}
    outside = pattern + pattern.subst_generators({"x": w("[x y]").atoms[0]})
    assert ans.coefficient_point(outside) is None


# -- constraint extraction -----------------------------------------------------------


def test_three_term_constraints_match_hand_reduction():
    system = extract_constraints(three_term())
    assert sorted(str(p) for p in system.polynomials()) == \
        ["-a*e + b*e", "-a^2 + a", "b^2 - b"]
    assert [to_str(eq.monomial) for eq in system.equations] == \
        ["u v w", "[u] v w", "u v [w]"]
    assert not system.unresolved()


def test_three_term_defect_before_reduction():
    defect = ansatz_defect(three_term())
    texts = {to_str(word): str(c) for word, c in defect.terms.items()}
    assert texts == {"u v [w]": "a", "[u v] w": "b", "u [v w]": "-a",
                     "[u] v w": "-b"}


def test_budget_exhaustion_raises():
    with pytest.raises(ReductionBudgetExceeded):
        extract_constraints(three_term(), step_cap=1)


def test_rbt_extraction_counts_and_unit_residues():
    plain = extract_constraints(build_ansatz(ROTA_BAXTER, 1), step_cap=6000)
    assert len(plain.equations) == 108
    assert not plain.unresolved()

    units = extract_constraints(build_ansatz(ROTA_BAXTER, 1,
                                             include_unit_terms=True),
                                step_cap=6000)
    assert len(units.equations) == 330
    flagged = units.unresolved()
    assert len(flagged) == 112
    assert all("[1]" in to_str(eq.monomial) for eq in flagged)
    # the flag names exactly the nested-unit shapes
    assert any(to_str(eq.monomial).startswith("[[1]]") for eq in flagged)
    top_level_only = [eq for eq in units.equations
                      if "[1]" in to_str(eq.monomial) and not eq.unresolved]
    assert top_level_only, "plain unit-bracket factors stay solvable"


def test_satisfied_at_agrees_with_direct_check():
    system = extract_constraints(three_term())
    good = {"a": Fraction(1), "b": Fraction(1), "e": Fraction(3)}
    bad = {"a": Fraction(1), "b": Fraction(0), "e": Fraction(3)}
    assert system.satisfied_at(good)
    assert not system.satisfied_at(bad)


# -- classification ------------------------------------------------------------------


def test_three_term_classifies_into_four_components():
    res = classify(three_term())
    assert len(res.components) == 4
    assert not res.audit_failures
    descs = [c.describe() for c in res.components]
    assert descs == ["b = 0, a = 0",
                     "b - 1 = 0, a - 1 = 0",
                     "e = 0, b = 0, a - 1 = 0",
                     "e = 0, b - 1 = 0, a = 0"]


def test_four_component_oracle_direct():
    ring = PolyRing(("a", "b", "e"))
    a, b, e = ring.var("a"), ring.var("b"), ring.var("e")
    comps = solve_components([a * a - a, b * b - b, e * (a - b)], ring)
    assert len(comps) == 4


def test_classification_is_deterministic():
    first = classify(three_term())
    second = classify(three_term())
    assert [c.describe() for c in first.components] == \
        [c.describe() for c in second.components]
    assert first.system.describe() == second.system.describe()
    m1 = match_catalog(first, samples=4)
    m2 = match_catalog(second, samples=4)
    assert m1.describe() == m2.describe()


def test_brute_force_agreement_on_small_grid():
    """Exhaustive {0, 1, -1} coefficients: a point solves the extracted
    constraints exactly when the specialized pattern passes the full check."""
    ans = three_term()
    system = extract_constraints(ans)
    values = [Fraction(0), Fraction(1), Fraction(-1)]
    names = [n for n, _ in ans.terms]
    for combo in itertools.product(values, repeat=len(names)):
        point = dict(zip(names, combo))
        direct = dt_check(ans.specialize(point)).accepted
        assert direct == system.satisfied_at(point), point


def test_dt_degree1_classification_matches_catalog():
    res = classify(build_ansatz(DIFFERENTIAL, 1))
    assert len(res.components) == 6
    assert not res.audit_failures
    report = match_catalog(res, samples=6)
    assert report.ok
    assert report.component_matches == \
        {0: "dt1", 1: "dt2", 2: "dt1", 3: "dt1", 4: "dt5", 5: "dt6"}
    assert not report.uncovered_families
    assert not report.mismatches


def test_dt_degree0_classification():
    res = classify(build_ansatz(DIFFERENTIAL, 0))
    assert len(res.components) == 1
    assert res.components[0].describe() == "b00 = 0"
    report = match_catalog(res, samples=6)
    assert report.ok
    assert report.component_matches == {0: "dt1"}


def test_rbt_degree1_classification_matches_catalog():
    res = classify(build_ansatz(ROTA_BAXTER, 1))
    assert len(res.components) == 8
    assert not res.audit_failures
    report = match_catalog(res, samples=3)
    assert report.ok
    assert report.component_matches == \
        {0: "rbt14", 1: "rbt13", 2: "rbt6", 3: "rbt2", 4: "rbt4",
         5: "rbt1", 6: "rbt5", 7: "rbt3"}


def test_match_report_describe_mentions_defects():
    res = classify(three_term())
    report = match_catalog(res, samples=4)
    text = report.describe()
    assert "catalog match" in text
    assert report.ok == ("clean" in text)
