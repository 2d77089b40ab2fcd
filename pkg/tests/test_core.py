import pytest

from eqsketch.core import (Specification, SpecMorphism, compose, coproduct,
                           identity_morphism, iso_search, pushout,
                           pushout_universal_check, spec_equal, validate,
                           validate_morphism)
from eqsketch.errors import SourceTargetMismatch
from eqsketch.yoneda import ElementaryPoint, elementary

from conftest import CORPUS


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_validates(name):
    assert validate(CORPUS[name]()) == []


def test_validate_flags_nonparallel_equation():
    s = Specification()
    for x in "XYZ":
        s.add_type(x)
    s.add_term("f", "X", "Y")
    s.add_term("g", "X", "Z")
    s.equations.add(("f", "g"))
    assert validate(s)


def test_identity_is_composition_unit():
    s = CORPUS["endo"]()
    i = identity_morphism(s)
    f = SpecMorphism(s, s, {"X": "X", "U": "U"}, {"e": "e", "s": "s"})
    assert compose(i, f).term_map == f.term_map
    assert compose(f, i).type_map == f.type_map


def test_compose_rejects_mismatch():
    s1, s2 = CORPUS["single_type"](), CORPUS["single_term"]()
    f = identity_morphism(s1)
    g = identity_morphism(s2)
    with pytest.raises(SourceTargetMismatch):
        compose(f, g)


def test_coproduct_is_disjoint_union():
    out, in1, in2 = coproduct(CORPUS["single_term"](), CORPUS["single_type"]())
    assert len(out.types) == 3
    assert len(out.terms) == 1
    assert validate_morphism(in1) == []
    assert validate_morphism(in2) == []


def test_pushout_glues_terms_along_shared_type():
    # two generic arrows glued at codomain/domain: 3 types, 2 terms
    t1 = elementary(ElementaryPoint.TERM)
    t2 = elementary(ElementaryPoint.TERM)
    point = Specification()
    point.add_type("P")
    f = SpecMorphism(point, t1, {"P": "Y"}, {})
    g = SpecMorphism(point, t2, {"P": "X"}, {})
    out, in1, in2 = pushout(f, g)
    assert len(out.types) == 3
    assert len(out.terms) == 2
    assert validate_morphism(in1) == []
    assert validate_morphism(in2) == []
    assert in1.type_map["Y"] == in2.type_map["X"]


def test_pushout_identity_span_is_isomorphic():
    s = CORPUS["monoid_core"]()
    i = identity_morphism(s)
    out, _1, _2 = pushout(i, i)
    assert bool(iso_search(s, out))


def test_pushout_universal_property():
    t1 = elementary(ElementaryPoint.TERM)
    t2 = elementary(ElementaryPoint.TERM)
    point = Specification()
    point.add_type("P")
    f = SpecMorphism(point, t1, {"P": "Y"}, {})
    g = SpecMorphism(point, t2, {"P": "X"}, {})
    # cocone into a chain spec gluing the same way
    chain = CORPUS["comp_chain"]()
    c1 = SpecMorphism(t1, chain, {"X": "X", "Y": "Y"}, {"f": "f"})
    c2 = SpecMorphism(t2, chain, {"X": "Y", "Y": "Z"}, {"f": "g"})
    assert pushout_universal_check(f, g, c1, c2)


def test_pushout_merges_clashing_features():
    # both legs mark the composite of the same pair: results are merged,
    # not duplicated
    cons = elementary(ElementaryPoint.CONS)
    comp1 = elementary(ElementaryPoint.COMP)
    comp2 = elementary(ElementaryPoint.COMP)
    inc = {"X": "X", "Y": "Y", "Z": "Z"}
    f = SpecMorphism(cons, comp1, inc, {"f": "f", "g": "g"})
    g = SpecMorphism(cons, comp2, inc, {"f": "f", "g": "g"})
    out, _1, _2 = pushout(f, g)
    assert len(out.terms) == 3
    assert len(out.compositions) == 1


def test_iso_search_finds_renaming():
    s = CORPUS["endo"]()
    r = Specification()
    r.add_type("A")
    r.add_type("One")
    r.terminal = "One"
    r.add_term("const", "One", "A")
    r.add_term("step", "A", "A")
    res = iso_search(s, r)
    assert res and validate_morphism(res.iso) == []


def test_iso_search_definitive_negative():
    res = iso_search(CORPUS["single_term"](), CORPUS["two_parallel"]())
    assert not res and res.definitive


def test_spec_equal_is_exact():
    assert spec_equal(CORPUS["endo"](), CORPUS["endo"]())
    assert not spec_equal(CORPUS["endo"](), CORPUS["single_type"]())
