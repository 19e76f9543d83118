"""Composition machinery, truncated basis checks, and type certificates."""

import random
from fractions import Fraction

import pytest

from opalg.catalog import DT_FAMILIES, RBT_FAMILIES, named_pattern
from opalg.gsb import (GeneratorSystem, TruncationBound, cdl_direct_sum_check,
                       compositions, delta_view, dt_check, free_dt_operator_nf,
                       gsb_check_truncated, INCLUDING, INTERSECTION, irr_enumerate,
                       is_trivial, raise_order, rbt_check)
from opalg.opoly import (DIFFERENTIAL, OPoly, OpIdentity, parse_opoly,
                         to_str_opoly)
from opalg.ordering import OrderConfig
from opalg.rewrite import ResourceLimit, Verdict
from opalg.words import GeneratorSet, Word, parse, to_str, word_sort_key

XY = GeneratorSet(("x", "y"))
DER = named_pattern("derivation")


# -- compositions of ordinary polynomials --------------------------------------------

def test_including_compositions():
    ordc = OrderConfig(XY)
    f = parse_opoly("x y x", XY)
    g = parse_opoly("x - 1", XY)
    comps = compositions(f, g, ordc)
    assert [c.kind for c in comps] == [INCLUDING, INCLUDING]
    got = {(to_str(c.context), to_str_opoly(c.value, ordc)) for c in comps}
    assert got == {("⋆ y x", "y x"), ("x y ⋆", "x y")}


def test_overlap_composition_value():
    ordc = OrderConfig(XY)
    f = parse_opoly("x y - 1", XY)
    g = parse_opoly("y x - 1", XY)
    (c,) = compositions(f, g, ordc)
    assert c.kind == INTERSECTION
    assert to_str(c.w) == "x y x"
    assert c.value.is_zero  # (xy-1)x - x(yx-1) cancels exactly


def test_equal_leading_word_composition():
    ordc = OrderConfig(XY)
    f = parse_opoly("x x - x", XY)
    g = parse_opoly("x x - 1", XY)
    comps = {(c.kind, to_str(c.w)): c for c in compositions(f, g, ordc)}
    # the leading word xx overlaps itself at distance one and coincides at
    # distance zero, giving two intersection compositions
    assert set(comps) == {(INTERSECTION, "x x"), (INTERSECTION, "x x x")}
    assert comps[(INTERSECTION, "x x")].value == parse_opoly("1 - x", XY)
    assert comps[(INTERSECTION, "x x x")].value == parse_opoly("x - x x", XY)
    # a rule never composes the equal-word case with itself, but the
    # self-overlap at xxx remains
    self_comps = compositions(f, f, ordc)
    assert [(c.kind, to_str(c.w)) for c in self_comps] == [(INTERSECTION,
                                                            "x x x")]
    assert self_comps[0].value == parse_opoly("x x - x", XY).scale(0) + \
        (f * OPoly.from_word(parse("x", XY)) -
         OPoly.from_word(parse("x", XY)) * f)


def test_compositions_require_monic():
    ordc = OrderConfig(XY)
    with pytest.raises(ValueError):
        compositions(parse_opoly("2*x y", XY), parse_opoly("x", XY), ordc)


# -- generator systems ---------------------------------------------------------------

def test_generator_system_instance():
    bound = TruncationBound(3, 2, 3)
    sys = GeneratorSystem(DER, OrderConfig(bound.generator_set()))
    u = parse("u", bound.generator_set())
    v = parse("[v] w", bound.generator_set())
    inst = sys.instance(u, v, validate=True)
    assert to_str_opoly(inst, sys.order) == "[u [v] w] - [u] [v] w - u [[v] w]"


def test_generator_system_rejects_pi_identity():
    with pytest.raises(ValueError):
        GeneratorSystem(named_pattern("average"), OrderConfig(XY))


def test_truncation_bound_validation():
    with pytest.raises(ValueError):
        TruncationBound(0, 2, 3)
    with pytest.raises(ValueError):
        TruncationBound(3, 2, 99)
    assert "breadth <= 3" in TruncationBound(3, 2, 3).describe()


# -- truncated basis check -----------------------------------------------------------

def test_transfer_and_concrete_modes_agree_small():
    bound = TruncationBound(2, 1, 3)
    sys = GeneratorSystem(DER, OrderConfig(bound.generator_set()))
    conc = gsb_check_truncated(sys, bound, certify="concrete")
    tran = gsb_check_truncated(sys, bound, certify="transfer")
    assert conc.ok and tran.ok
    assert conc.intersections_checked == tran.intersections_checked == 216
    assert conc.including_configs == tran.including_configs == 18
    assert conc.trivial_count == tran.trivial_count == 216 + 18 * 51
    assert conc.order_violations == tran.order_violations == 0
    assert conc.intersections_reduced == 216
    assert tran.intersections_reduced < conc.intersections_reduced


def test_gsb_report_serialization():
    bound = TruncationBound(2, 1, 2)
    sys = GeneratorSystem(DER, OrderConfig(bound.generator_set()))
    rep = gsb_check_truncated(sys, bound)
    data = rep.to_dict()
    assert data["ok"] is True
    assert data["bound"] == {"max_breadth": 2, "max_depth": 1,
                             "max_generators": 2}
    assert data["nontrivial"] == []
    assert "Groebner-Shirshov" in rep.describe()


def test_gsb_detects_non_basis():
    # y [x] is not differential type, so compositions must fail to resolve
    ident = OpIdentity(DIFFERENTIAL, parse_opoly("y [x]", XY))
    bound = TruncationBound(2, 1, 3)
    sys = GeneratorSystem(ident, OrderConfig(bound.generator_set()))
    rep = gsb_check_truncated(sys, bound, certify="concrete")
    assert not rep.ok
    assert rep.nontrivial


def test_gsb_reduction_cap():
    bound = TruncationBound(2, 1, 3)
    sys = GeneratorSystem(DER, OrderConfig(bound.generator_set()))
    with pytest.raises(ResourceLimit):
        gsb_check_truncated(sys, bound, certify="concrete", max_reductions=5)


def test_is_trivial_marks_records():
    ordc = OrderConfig(XY)
    sys = GeneratorSystem(DER, ordc)
    f = sys.instance(parse("x", XY), parse("y x", XY))
    g = sys.instance(parse("x y", XY), parse("x", XY))
    comps = compositions(f, g, ordc)
    assert comps, "equal leading words must give the split-pair composition"
    for comp in comps:
        assert is_trivial(comp, sys) == "trivial"
        assert comp.residue is None
        assert "trivial" in comp.describe()


# -- irreducible words and the direct-sum check --------------------------------------

def test_irr_enumeration_single_generator():
    Z = GeneratorSet(("z",))
    sys = GeneratorSystem(DER, OrderConfig(Z))
    irr = irr_enumerate(sys, TruncationBound(2, 2, 1), gens=Z)
    plain = sorted((w for w in irr if "1" not in to_str(w)), key=word_sort_key)
    assert [to_str(w) for w in plain] == [
        "z", "[z]", "[[z]]", "z z", "[z] z", "z [z]", "[z] [z]",
        "[[z]] z", "z [[z]]", "[[z]] [z]", "[z] [[z]]", "[[z]] [[z]]"]
    assert parse("[z z]", Z) not in irr
    assert len(irr) == 31  # 12 plain + unit + 18 with unit brackets


def test_cdl_direct_sum_small_bound():
    bound = TruncationBound(2, 2, 2)
    sys = GeneratorSystem(DER, OrderConfig(bound.generator_set()))
    rep = cdl_direct_sum_check(sys, bound, rng=random.Random(1),
                               ideal_samples=25)
    assert rep.ok
    assert rep.ideal_zeros == 25
    assert rep.failures == []
    assert "passes" in rep.describe()


def test_cdl_flags_non_confluent_pattern():
    ident = OpIdentity(DIFFERENTIAL, parse_opoly("y [x]", XY))
    bound = TruncationBound(2, 1, 2)
    sys = GeneratorSystem(ident, OrderConfig(bound.generator_set()))
    rep = cdl_direct_sum_check(sys, bound, rng=random.Random(1),
                               ideal_samples=40)
    assert not rep.ok


# -- type certificates ---------------------------------------------------------------

def test_dt_check_accepts_all_catalog_families():
    for fam in DT_FAMILIES:
        ident = fam.identity()
        rep = dt_check(ident.pattern, ident.constraints)
        assert rep.accepted, fam.key


def test_rbt_check_accepts_all_catalog_families():
    for fam in RBT_FAMILIES:
        ident = fam.identity()
        rep = rbt_check(ident.pattern, ident.constraints)
        assert rep.accepted, fam.key
        assert not rep.inconclusive


def test_dt_check_rejects_right_twist_with_witness():
    rep = dt_check(parse_opoly("y [x]", XY))
    assert not rep.accepted
    assert rep.verdict.kind == Verdict.NO
    got = to_str_opoly(rep.witness, OrderConfig(GeneratorSet(("u", "v", "w"))))
    assert got == "w v [u] - v w [u]"


def test_dt_check_structural_rejections():
    assert "totally linear" in dt_check(parse_opoly("x [y] + x x", XY)).reason
    assert "bracketed product" in dt_check(parse_opoly("[x y]", XY)).reason


def test_rbt_check_structural_rejections():
    assert "totally linear" in rbt_check(parse_opoly("x [y] + y", XY)).reason
    assert "adjacent bracket" in rbt_check(parse_opoly("[x] [y]", XY)).reason


def test_dt1_constraint_matters():
    # without the constraint b^2 = b + ce the family-1 pattern must fail
    fam = DT_FAMILIES[0]
    ident = fam.identity()
    with_constraint = dt_check(ident.pattern, ident.constraints)
    without = dt_check(ident.pattern, ())
    assert with_constraint.accepted
    assert not without.accepted


def test_type_report_describe():
    ok = dt_check(DER.pattern)
    assert ok.describe() == "accepted: differential type"
    bad = rbt_check(parse_opoly("[x] [y]", XY))
    assert bad.describe().startswith("rejected: not Rota-Baxter type")


# -- free operator on derivative markers ---------------------------------------------

def test_raise_order_naming():
    assert raise_order("z") == "z_1"
    assert raise_order("z_1") == "z_2"
    assert raise_order("a_9") == "a_10"


def test_free_operator_leibniz():
    Z = GeneratorSet(("z",))
    d = free_dt_operator_nf(parse("z z", Z), DER)
    assert d == parse_opoly("z z_1 + z_1 z", GeneratorSet(("z", "z_1")))
    d3 = free_dt_operator_nf(parse("z z z", Z), DER)
    assert d3 == parse_opoly("z z z_1 + z z_1 z + z_1 z z",
                             GeneratorSet(("z", "z_1")))


def test_free_operator_weight_term():
    Z = GeneratorSet(("z",))
    wl = named_pattern("weight:2")
    d = free_dt_operator_nf(parse("z z", Z), wl)
    assert d == parse_opoly("z z_1 + z_1 z + 2*z_1 z_1",
                            GeneratorSet(("z", "z_1")))


def test_free_operator_agrees_with_rewriting():
    from opalg.rewrite import RuleSchema, normal_form
    Z = GeneratorSet(("z",))
    for spec in ("derivation", "weight:lam", "weight:-1"):
        ident = named_pattern(spec)
        schema = RuleSchema(ident, order=OrderConfig(Z))
        for text in ("z z", "z z z"):
            w = parse(text, Z)
            direct = free_dt_operator_nf(w, ident)
            nf, _ = normal_form(OPoly.from_word(Word((w,))), schema)
            assert delta_view(nf) == direct, (spec, text)


def test_free_operator_second_application_bracket_free():
    Z = GeneratorSet(("z",))
    first = free_dt_operator_nf(parse("z z", Z), DER)
    second = OPoly.zero(DER.ring)
    for w, c in first.terms.items():
        second = second + free_dt_operator_nf(w, DER).scale(c)
    expect = parse_opoly("z z_2 + 2*z_1 z_1 + z_2 z",
                         GeneratorSet(("z", "z_1", "z_2")))
    assert second == expect


def test_free_operator_rejections():
    Z = GeneratorSet(("z",))
    with pytest.raises(ValueError):
        free_dt_operator_nf(Word(()), DER)
    with pytest.raises(ValueError):
        free_dt_operator_nf(parse("[z]", Z), DER)
    td_like = OpIdentity(DIFFERENTIAL, parse_opoly("x [1] y", XY))
    with pytest.raises(ValueError):
        free_dt_operator_nf(parse("z z", Z), td_like)
