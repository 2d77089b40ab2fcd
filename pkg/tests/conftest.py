import pytest

from eqsketch.core import Specification
from eqsketch.decorate import DecoratedSpecification


def empty_spec():
    return Specification()


def single_type():
    s = Specification()
    s.add_type("X")
    return s


def single_term():
    s = Specification()
    s.add_type("X")
    s.add_type("Y")
    s.add_term("f", "X", "Y")
    return s


def endo_plain():
    # a pure constant and a self-map; the running example everywhere
    s = Specification()
    s.add_type("X")
    s.add_type("U")
    s.terminal = "U"
    s.add_term("e", "U", "X")
    s.add_term("s", "X", "X")
    return s


def two_parallel():
    s = single_term()
    s.add_term("g", "X", "Y")
    return s


def with_identity():
    s = Specification()
    s.add_type("X")
    s.add_term("id_X", "X", "X")
    s.identities["X"] = "id_X"
    return s


def comp_chain():
    s = Specification()
    for x in "XYZ":
        s.add_type(x)
    s.add_term("f", "X", "Y")
    s.add_term("g", "Y", "Z")
    s.add_term("gf", "X", "Z")
    s.compositions[("f", "g")] = "gf"
    return s


def product_pair():
    s = Specification()
    s.add_type("Y1")
    s.add_type("Y2")
    s.add_type("P")
    s.add_term("p1", "P", "Y1")
    s.add_term("p2", "P", "Y2")
    s.products[("Y1", "Y2")] = ("P", "p1", "p2")
    return s


def product_heavy():
    s = product_pair()
    s.add_type("X")
    s.add_term("f", "X", "Y1")
    s.add_term("g", "X", "Y2")
    s.add_term("t", "X", "P")
    s.tuples[("f", "g")] = "t"
    s.add_term("c1", "X", "Y1")
    s.compositions[("t", "p1")] = "c1"
    s.add_type("Q")
    s.add_term("q1", "Q", "Y2")
    s.add_term("q2", "Q", "Y1")
    s.products[("Y2", "Y1")] = ("Q", "q1", "q2")
    return s


def collapse_spec():
    s = Specification()
    s.add_type("U")
    s.terminal = "U"
    s.add_type("X")
    s.add_term("tu_X", "X", "U")
    s.collapsings["X"] = "tu_X"
    return s


def monoid_core():
    # unit laws encoded as potential features rather than raw equations:
    # mul . <e.tu_M, id_M> = id_M and mul . <id_M, e.tu_M> = id_M
    s = Specification()
    s.add_type("U")
    s.terminal = "U"
    s.add_type("M")
    s.add_type("M2")
    s.add_term("p1", "M2", "M")
    s.add_term("p2", "M2", "M")
    s.products[("M", "M")] = ("M2", "p1", "p2")
    s.add_term("mul", "M2", "M")
    s.add_term("e", "U", "M")
    s.add_term("id_M", "M", "M")
    s.identities["M"] = "id_M"
    s.add_term("tu_M", "M", "U")
    s.collapsings["M"] = "tu_M"
    s.add_term("e_c", "M", "M")
    s.compositions[("tu_M", "e")] = "e_c"
    s.add_term("lpair", "M", "M2")
    s.tuples[("e_c", "id_M")] = "lpair"
    s.compositions[("lpair", "mul")] = "id_M"
    s.add_term("rpair", "M", "M2")
    s.tuples[("id_M", "e_c")] = "rpair"
    s.compositions[("rpair", "mul")] = "id_M"
    return s


CORPUS = {
    "empty": empty_spec,
    "single_type": single_type,
    "single_term": single_term,
    "endo": endo_plain,
    "two_parallel": two_parallel,
    "with_identity": with_identity,
    "comp_chain": comp_chain,
    "product_pair": product_pair,
    "product_heavy": product_heavy,
    "collapse": collapse_spec,
    "monoid_core": monoid_core,
}


def endo_decorated():
    return DecoratedSpecification(endo_plain(), {"e"})


def idempotent_decorated():
    s = endo_plain()
    s.add_term("ss", "X", "X")
    s.compositions[("s", "s")] = "ss"
    s.add_equation("ss", "s")
    return DecoratedSpecification(s, {"e"})


def two_ops_decorated():
    s = Specification()
    s.add_type("X")
    s.add_term("f", "X", "X")
    s.add_term("g", "X", "X")
    return DecoratedSpecification(s, set())


DECORATED = {
    "endo": endo_decorated,
    "idempotent": idempotent_decorated,
    "two_ops": two_ops_decorated,
}


@pytest.fixture
def corpus():
    return {name: mk() for name, mk in CORPUS.items()}


@pytest.fixture
def decorated_corpus():
    return {name: mk() for name, mk in DECORATED.items()}
