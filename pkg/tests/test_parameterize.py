import pytest

from eqsketch.core import SpecMorphism, iso_search, spec_equal, validate
from eqsketch.decorate import DecoratedSpecification, purify, undecorate
from eqsketch.errors import PurityViolation
from eqsketch.inference import TriState, is_entailment, terms_equal
from eqsketch.parameterize import (check_ell_natural,
                                   check_param_restricts_to_embed, ell,
                                   embed_A, embed_a, parameterize,
                                   parameterize_morphism)

from conftest import CORPUS, DECORATED


def test_embed_A_adds_one_fresh_type():
    s = CORPUS["endo"]()
    p = embed_A(s)
    assert p.parameter_type in p.base.types
    assert len(p.base.types) == len(s.types) + 1
    assert p.base.terms == s.terms


def test_embed_A_avoids_name_clash():
    s = CORPUS["single_type"]()
    s.add_type("A")
    p = embed_A(s)
    assert p.parameter_type != "A"
    assert "A" in p.base.types


def test_embed_a_adds_unit_and_constant():
    pc = embed_a(embed_A(CORPUS["single_type"]()))
    s = pc.base.base
    assert s.terminal is not None
    a = s.terms[pc.parameter_constant]
    assert a.dom == s.terminal and a.cod == pc.base.parameter_type


def test_parameterize_single_general_term():
    par = parameterize(DECORATED["endo"]())
    p = par.spec.base
    assert validate(p) == []
    assert "s" not in p.terms
    sp = par.lift["s"]
    prod = p.terms[sp].dom
    assert p.products[(par.spec.parameter_type, "X")][0] == prod
    assert p.terms[sp].cod == "X"
    # pure content untouched
    assert p.terms["e"].dom == "U" and p.terms["e"].cod == "X"


def test_parameterize_unpacks_as_pair():
    spec, lift = parameterize(DECORATED["endo"]())
    assert spec.parameter_type in spec.base.types
    assert "s" in lift


def test_parameterize_translates_equations():
    par = parameterize(DECORATED["idempotent"]())
    p = par.spec.base
    assert validate(p) == []
    # the translated idempotency equation mentions the lifted terms
    (eq,) = p.equations
    assert par.lift["s"] in eq or par.lift["ss"] in eq


def test_parameterize_all_pure_is_plain_embedding():
    for name in ("endo", "monoid_core", "product_heavy", "empty"):
        assert check_param_restricts_to_embed(CORPUS[name]()), name


def test_triangle_does_not_commute_with_general_terms():
    d = DECORATED["endo"]()
    par = parameterize(d)
    emb = embed_A(undecorate(d))
    res = iso_search(par.spec.base, emb.base)
    assert not res and res.definitive


def test_parameterize_morphism_identity():
    d = DECORATED["endo"]()
    par = parameterize(d)
    u = SpecMorphism(d.base, d.base, {x: x for x in d.base.types},
                     {t: t for t in d.base.terms})
    m = parameterize_morphism(d, d, u, par1=par, par2=par)
    for t in par.spec.base.terms:
        assert m.term_map[t] == t


def test_parameterize_morphism_purity_violation():
    d_pure = purify(CORPUS["endo"]())
    d_gen = DECORATED["endo"]()
    u = SpecMorphism(d_pure.base, d_gen.base,
                     {x: x for x in d_pure.base.types},
                     {t: t for t in d_pure.base.terms})
    with pytest.raises(PurityViolation):
        parameterize_morphism(d_pure, d_gen, u)


def test_ell_is_identity_on_pure_terms():
    d = DECORATED["endo"]()
    res = ell(d)
    assert res.morphism.term_map["e"] == "e"
    assert res.morphism.type_map["X"] == "X"


def test_ell_general_term_formula():
    d = DECORATED["endo"]()
    res = ell(d)
    img = res.morphism.term_map["s"]
    tgt = res.target
    # image is a composite of the parameter tuple with the lifted term
    ((w, sp),) = [k for k, v in tgt.compositions.items() if v == img]
    assert sp == res.parameterization.lift["s"]
    ((ax, idx),) = [k for k, v in tgt.tuples.items() if v == w]
    assert tgt.identities["X"] == idx
    ((tux, a),) = [k for k, v in tgt.compositions.items() if v == ax]
    assert tgt.collapsings["X"] == tux
    assert a == res.constant


def test_ell_morphism_validates_and_extension_is_entailment():
    for name in ("endo", "two_ops"):
        res = ell(DECORATED[name]())
        from eqsketch.core import validate_morphism
        assert validate_morphism(res.morphism) == [], name
        assert is_entailment(res.extension, depth=3).state is TriState.EQUAL, name


def test_ell_all_pure_is_identity():
    d = purify(CORPUS["endo"]())
    res = ell(d)
    for t in d.base.terms:
        assert res.morphism.term_map[t] == t


def test_ell_respects_composition_up_to_congruence():
    d = DECORATED["idempotent"]()
    res = ell(d)
    tgt = res.target
    lf = res.morphism.term_map["s"]
    lc = res.morphism.term_map["ss"]
    key = (lf, lf)
    assert tgt.compositions.get(key) == lc
    v = terms_equal(tgt, lc, lf, depth=2)
    assert v.state is TriState.EQUAL  # the lifted equation still holds


def test_check_ell_natural_identity():
    for name, mk in DECORATED.items():
        d = mk()
        u = SpecMorphism(d.base, d.base, {x: x for x in d.base.types},
                         {t: t for t in d.base.terms})
        assert check_ell_natural(d, d, u), name
