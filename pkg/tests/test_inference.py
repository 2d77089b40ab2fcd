import pytest

from eqsketch.core import (Specification, SpecMorphism, identity_morphism,
                           iso_search, spec_equal, validate_morphism)
from eqsketch.errors import BudgetExceeded, NoMatch, NotParallel
from eqsketch.inference import (STRUCTURAL_RULES, Fraction, RuleTag, TriState,
                                apply_rule, compose_fractions,
                                congruence_classes, identity_fraction,
                                is_entailment, match_morphism, rule, saturate,
                                terms_equal)
from eqsketch.models import check_model

from conftest import CORPUS


@pytest.mark.parametrize("tag", STRUCTURAL_RULES)
def test_rule_application_gives_generic_extension(tag):
    r = rule(tag)
    h = r.hypothesis.copy()
    m = SpecMorphism(r.hypothesis, h, {x: x for x in h.types},
                     {t: t for t in h.terms})
    out, emb = apply_rule(r, h, m)
    assert validate_morphism(emb) == []
    assert bool(iso_search(out, r.extension))


@pytest.mark.parametrize("tag", STRUCTURAL_RULES)
def test_rule_application_is_idempotent(tag):
    r = rule(tag)
    h = r.hypothesis.copy()
    ident = {x: x for x in h.types}
    m = SpecMorphism(r.hypothesis, h, ident, {t: t for t in h.terms})
    out1, _ = apply_rule(r, h, m)
    m2 = SpecMorphism(r.hypothesis, out1, ident, {t: t for t in h.terms})
    out2, _ = apply_rule(r, out1, m2)
    assert bool(iso_search(out1, out2))


def test_apply_rule_rejects_bad_match():
    r = rule(RuleTag.COMPOSITION)
    s = CORPUS["single_term"]()
    bad = match_morphism(r, s, {"X": "X", "Y": "Y", "Z": "Y"},
                         {"f": "f", "g": "f"})
    with pytest.raises(NoMatch):
        apply_rule(r, s, bad)


def test_saturate_adds_identities_and_unit():
    sat = saturate(CORPUS["single_type"](), depth=0)
    s = sat.spec
    assert s.terminal is not None
    assert "X" in s.identities
    assert "X" in s.collapsings
    assert validate_morphism(sat.embedding) == []


def test_saturate_depth_bounds_composites():
    s = CORPUS["comp_chain"]()
    shallow = saturate(s, depth=0)
    assert all(k in s.compositions for k in shallow.spec.compositions
               if k[0] in s.terms and k[1] in s.terms)
    deep = saturate(s, depth=1)
    assert len(deep.spec.compositions) > len(shallow.spec.compositions)


def test_saturate_trace_mentions_rules():
    sat = saturate(CORPUS["endo"](), depth=1)
    tags = {st.tag for st in sat.trace}
    assert RuleTag.IDENTITY in tags
    assert RuleTag.COMPOSITION in tags


def test_saturate_budget():
    s = Specification()
    s.add_type("X")
    for i in range(6):
        s.add_term(f"t{i}", "X", "X")
    with pytest.raises(BudgetExceeded):
        saturate(s, depth=3, cap=60)


def _idem_spec():
    s = Specification()
    s.add_type("X")
    s.add_term("u", "X", "X")
    s.add_term("v", "X", "X")
    s.add_term("uv", "X", "X")
    s.compositions[("u", "v")] = "uv"
    s.add_equation("uv", "u")
    s.add_term("w", "X", "X")
    return s


def test_terms_equal_equal_by_congruence():
    s = _idem_spec()
    # (v.u).u ~ v.(u.u)-style reasoning: derived composite collapses to u
    sat = saturate(s, 1)
    big = sat.spec
    c = big.compositions[("u", big.identities["X"])]
    assert terms_equal(big, c, "u", depth=1).state is TriState.EQUAL


def test_terms_equal_distinct_with_countermodel():
    s = _idem_spec()
    v = terms_equal(s, "u", "w", depth=2)
    assert v.state is TriState.DISTINCT_AT_BOUND
    m = v.countermodel
    assert m is not None
    assert check_model(s, m) == []
    dom = m.carriers["X"]
    assert any(m.apply("u", x) != m.apply("w", x) for x in dom)


def test_terms_equal_requires_parallel():
    s = CORPUS["two_parallel"]()
    s.add_term("h", "Y", "Y")
    with pytest.raises(NotParallel):
        terms_equal(s, "f", "h", depth=1)


def test_congruence_tuple_eta():
    # a map into a product equals the tuple of its projections
    s = CORPUS["product_heavy"]()
    uf = congruence_classes(s)
    c1 = s.compositions[("t", "p1")]
    assert uf.find(c1) == uf.find("f")


def test_is_entailment_positive_derived_content():
    s1 = CORPUS["comp_chain"]()
    s = s1.copy()
    s.add_term("id_Z", "Z", "Z")
    s.identities["Z"] = "id_Z"
    s.add_term("h", "X", "Z")
    s.compositions[("gf", "id_Z")] = "h"
    tau = SpecMorphism(s1, s, {x: x for x in s1.types},
                       {t: t for t in s1.terms})
    assert is_entailment(tau, depth=2).state is TriState.EQUAL


def test_is_entailment_negative_free_term():
    s1 = CORPUS["single_type"]()
    s = s1.copy()
    s.add_term("k", "X", "X")
    tau = SpecMorphism(s1, s, {"X": "X"}, {})
    v = is_entailment(tau, depth=2)
    assert v.state is TriState.DISTINCT_AT_BOUND


def test_fraction_composition_preserves_entailment_flag():
    s = CORPUS["single_type"]()
    f1 = identity_fraction(s)
    f2 = identity_fraction(s)
    out = compose_fractions(f1, f2)
    assert out.denominator_is_entailment
    assert spec_equal(out.source, s)


def test_rule_fraction_shape():
    for tag in STRUCTURAL_RULES:
        r = rule(tag)
        fr = r.fraction()
        assert isinstance(fr, Fraction)
        assert spec_equal(fr.numerator.target, r.extension)
        assert validate_morphism(fr.numerator) == []
        assert validate_morphism(fr.denominator) == []
