"""The logic engine: inference rules as fractions, rule application as
pushout, bounded saturation, congruence-closure term equality, and
entailment checking.

A rule is a fraction: an inclusion of the generic hypothesis figure into
its generic extension (the denominator, an entailment) together with a
selection of the conclusion inside the extension (the numerator).
Applying a rule to a matched occurrence in a specification is a pushout
along the denominator.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple

from .core import (Specification, SpecMorphism, Term, TermName, eqpair,
                   fresh_name, identity_morphism, pushout, spec_equal,
                   validate, validate_morphism)
from .errors import BudgetExceeded, NoMatch, NotParallel
from .yoneda import ElementaryPoint, elementary


class TriState(Enum):
    EQUAL = "equal"
    DISTINCT_AT_BOUND = "distinct-at-bound"
    UNKNOWN = "unknown"


@dataclass
class Verdict:
    state: TriState
    countermodel: Optional[object] = None  # a models.FiniteModel when distinct

    def __bool__(self) -> bool:
        return self.state is TriState.EQUAL


class RuleTag(Enum):
    COMPOSITION = "composition"
    IDENTITY = "identity"
    BINARY_PRODUCT = "binary-product"
    BINARY_TUPLE = "binary-tuple"
    TERMINAL_TYPE = "terminal-type"
    COLLAPSING = "collapsing"
    # equality rules enlarging the structural set; they drive the
    # congruence closure in terms_equal
    REFLEXIVITY = "reflexivity"
    SYMMETRY = "symmetry"
    TRANSITIVITY = "transitivity"
    CONG_COMPOSITION = "congruence-of-composition"
    CONG_TUPLE = "congruence-of-tuple"


STRUCTURAL_RULES = (RuleTag.COMPOSITION, RuleTag.IDENTITY, RuleTag.BINARY_PRODUCT,
                    RuleTag.BINARY_TUPLE, RuleTag.TERMINAL_TYPE, RuleTag.COLLAPSING)

# hypothesis figure, extension figure, conclusion figure, conclusion selection
_RULE_DATA = {
    RuleTag.COMPOSITION: (ElementaryPoint.CONS, ElementaryPoint.COMP,
                          ElementaryPoint.TERM,
                          ({"X": "X", "Y": "Z"}, {"f": "gf"})),
    RuleTag.IDENTITY: (ElementaryPoint.TYPE, ElementaryPoint.SELID,
                       ElementaryPoint.TERM,
                       ({"X": "X", "Y": "X"}, {"f": "id_X"})),
    RuleTag.BINARY_PRODUCT: (ElementaryPoint.TYPE2, ElementaryPoint.PROD2,
                             ElementaryPoint.CONE2,
                             ({"X": "P", "Y1": "Y1", "Y2": "Y2"},
                              {"f": "p1", "g": "p2"})),
    RuleTag.BINARY_TUPLE: (ElementaryPoint.CONE2, ElementaryPoint.TUPLE2,
                           ElementaryPoint.TERM,
                           ({"X": "X", "Y": "P"}, {"f": "t"})),
    RuleTag.TERMINAL_TYPE: (ElementaryPoint.UNIT, ElementaryPoint.PROD0,
                            ElementaryPoint.TYPE, ({"X": "U"}, {})),
    RuleTag.COLLAPSING: (ElementaryPoint.TYPE, ElementaryPoint.TUPLE0,
                         ElementaryPoint.TERM,
                         ({"X": "X", "Y": "U"}, {"f": "tu_X"})),
}


@dataclass
class Fraction:
    """A cospan: numerator into a common extension, denominator an
    entailment from the other endpoint into the same extension."""
    numerator: SpecMorphism    # S -> S1'
    denominator: SpecMorphism  # S1 -> S1'
    denominator_is_entailment: bool = True

    @property
    def source(self) -> Specification:
        return self.numerator.source

    @property
    def dest(self) -> Specification:
        return self.denominator.source


def identity_fraction(s: Specification) -> Fraction:
    i = identity_morphism(s)
    return Fraction(i, i)


@dataclass
class InferenceRule:
    tag: RuleTag
    hypothesis: Specification
    extension: Specification
    inclusion: SpecMorphism   # hypothesis -> extension (the denominator)
    conclusion: Specification
    selection: SpecMorphism   # conclusion -> extension (the numerator)

    def fraction(self) -> Fraction:
        return Fraction(self.selection, self.inclusion)


def rule(tag: RuleTag) -> InferenceRule:
    """One of the six structural rules as a fraction of generic figures."""
    if tag not in _RULE_DATA:
        raise ValueError(f"{tag} is an equality rule; it has no generic figure here")
    hyp_pt, ext_pt, con_pt, (sel_t, sel_m) = _RULE_DATA[tag]
    hyp = elementary(hyp_pt)
    ext = elementary(ext_pt)
    con = elementary(con_pt)
    incl = SpecMorphism(hyp, ext, {x: x for x in hyp.types},
                        {t: t for t in hyp.terms})
    sel = SpecMorphism(con, ext, dict(sel_t), dict(sel_m))
    return InferenceRule(tag, hyp, ext, incl, con, sel)


def apply_rule(r: InferenceRule, s: Specification,
               match: SpecMorphism) -> Tuple[Specification, SpecMorphism]:
    """Pushout of the rule's denominator along a match of its hypothesis.

    The returned morphism s -> s' is an entailment by construction."""
    if not spec_equal(match.source, r.hypothesis) or not spec_equal(match.target, s):
        raise NoMatch("match must go from the rule's hypothesis into the specification")
    if validate_morphism(match):
        raise NoMatch("; ".join(validate_morphism(match)))
    _out, _in1, in2 = pushout(r.inclusion, match)
    return _out, in2


def match_morphism(r: InferenceRule, s: Specification,
                   type_map: Dict[str, str], term_map: Dict[str, str]) -> SpecMorphism:
    return SpecMorphism(r.hypothesis, s, type_map, term_map)


# ---------------------------------------------------------------------------
# Saturation
# ---------------------------------------------------------------------------

@dataclass
class TraceStep:
    tag: RuleTag
    match: Dict[str, str]
    generated: Tuple[str, ...]

    def line(self) -> str:
        binds = " ".join(f"{k}={v}" for k, v in sorted(self.match.items()))
        gen = " ".join(self.generated)
        return f"{self.tag.value} [{binds}] -> {gen}"


@dataclass
class Saturation:
    spec: Specification
    embedding: SpecMorphism
    trace: List[TraceStep]
    depth_of: Dict[TermName, int]


def saturate(s: Specification, depth: int, cap: int = 4000) -> Saturation:
    """Apply the structural rules to fixpoint, keeping composites and
    tuples of structural depth <= depth.

    New products are only formed for pairs that already carry a product
    mark; free product formation would generate types without bound and
    adds nothing to term equality over the declared signature.
    """
    errs = validate(s)
    if errs:
        raise ValueError("saturate requires a valid specification: " + errs[0])
    out = s.copy()
    trace: List[TraceStep] = []
    depth_of: Dict[TermName, int] = {t: 0 for t in out.terms}

    def fresh(base: str) -> str:
        return fresh_name(base, out.all_names())

    # terminal type
    if out.terminal is None:
        u = fresh("One")
        out.add_type(u)
        out.terminal = u
        trace.append(TraceStep(RuleTag.TERMINAL_TYPE, {}, (u,)))
    changed = True
    while changed:
        changed = False
        if len(out.terms) > cap:
            raise BudgetExceeded(f"term universe exceeded {cap}")
        for x in sorted(out.types):
            if x not in out.identities:
                n = fresh(f"id_{x}")
                out.add_term(n, x, x)
                out.identities[x] = n
                depth_of[n] = 0
                trace.append(TraceStep(RuleTag.IDENTITY, {"X": x}, (n,)))
                changed = True
            if x not in out.collapsings:
                n = fresh(f"tu_{x}")
                out.add_term(n, x, out.terminal)
                out.collapsings[x] = n
                depth_of[n] = 0
                trace.append(TraceStep(RuleTag.COLLAPSING, {"X": x}, (n,)))
                changed = True
        snapshot = sorted(out.terms)
        for f, g in ((f, g) for f in snapshot for g in snapshot):
            if out.terms[f].cod != out.terms[g].dom:
                continue
            if (f, g) in out.compositions:
                continue
            dnew = max(depth_of.get(f, 0), depth_of.get(g, 0)) + 1
            if dnew > depth:
                continue
            n = fresh(f"{g}_o_{f}")
            out.add_term(n, out.terms[f].dom, out.terms[g].cod)
            out.compositions[(f, g)] = n
            depth_of[n] = dnew
            trace.append(TraceStep(RuleTag.COMPOSITION, {"f": f, "g": g}, (n,)))
            changed = True
            if len(out.terms) > cap:
                raise BudgetExceeded(f"term universe exceeded {cap}")
        for f, g in ((f, g) for f in snapshot for g in snapshot):
            if out.terms[f].dom != out.terms[g].dom:
                continue
            key = (out.terms[f].cod, out.terms[g].cod)
            if key not in out.products or (f, g) in out.tuples:
                continue
            dnew = max(depth_of.get(f, 0), depth_of.get(g, 0)) + 1
            if dnew > depth:
                continue
            n = fresh(f"pair_{f}_{g}")
            out.add_term(n, out.terms[f].dom, out.products[key][0])
            out.tuples[(f, g)] = n
            depth_of[n] = dnew
            trace.append(TraceStep(RuleTag.BINARY_TUPLE, {"f": f, "g": g}, (n,)))
            changed = True
            if len(out.terms) > cap:
                raise BudgetExceeded(f"term universe exceeded {cap}")
    m = SpecMorphism(s, out, {x: x for x in s.types}, {t: t for t in s.terms})
    return Saturation(out, m, trace, depth_of)


# ---------------------------------------------------------------------------
# Congruence closure
# ---------------------------------------------------------------------------

class _UF:
    def __init__(self):
        self.parent: Dict[str, str] = {}

    def find(self, x: str) -> str:
        p = self.parent
        if x not in p:
            p[x] = x
            return x
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: str, b: str) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:  # canonical representative: lexicographically least
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def congruence_classes(s: Specification) -> _UF:
    """Union-find closing the spec's equations under the laws of a
    category with chosen finite products, over the declared universe."""
    uf = _UF()
    for t in s.terms:
        uf.find(t)
    for (t1, t2) in s.equations:
        uf.union(t1, t2)
    id_class = {x: uf.find(i) for x, i in s.identities.items()}
    changed = True
    while changed:
        changed = False

        def unify(a: str, b: str) -> None:
            nonlocal changed
            if uf.union(a, b):
                changed = True

        comp_by_key: Dict[Tuple[str, str], List[str]] = {}
        for (f, g), c in s.compositions.items():
            comp_by_key.setdefault((uf.find(f), uf.find(g)), []).append(c)
        # congruence of composition
        for results in comp_by_key.values():
            for other in results[1:]:
                unify(results[0], other)
        # identity laws
        id_classes = {uf.find(i) for i in s.identities.values()}
        for (f, g), c in s.compositions.items():
            if uf.find(g) in id_classes:
                unify(c, f)
            if uf.find(f) in id_classes:
                unify(c, g)
        # associativity: (h.g).f = h.(g.f)
        comp_pairs = list(s.compositions.items())
        by_first: Dict[str, List[Tuple[str, str]]] = {}
        comp_class: Dict[Tuple[str, str], str] = {}
        for (f, g), c in comp_pairs:
            by_first.setdefault(uf.find(f), []).append((g, c))
            comp_class[(uf.find(f), uf.find(g))] = uf.find(c)
        for (f, g), gf in comp_pairs:
            # composites (gf, h) -> r1; need (g, h) -> hg and (f, hg) -> r2
            for (h, r1) in by_first.get(uf.find(gf), []):
                hg = comp_class.get((uf.find(g), uf.find(h)))
                if hg is None:
                    continue
                r2 = comp_class.get((uf.find(f), uf.find(hg)))
                if r2 is not None:
                    unify(r1, r2)
        # congruence of tupling
        tup_by_key: Dict[Tuple[str, str], List[str]] = {}
        for (f, g), t in s.tuples.items():
            tup_by_key.setdefault((uf.find(f), uf.find(g)), []).append(t)
        for results in tup_by_key.values():
            for other in results[1:]:
                unify(results[0], other)
        # projections of a tuple recover the components
        proj_class: Dict[Tuple[str, str], Tuple[str, str]] = {
            key: (uf.find(p1), uf.find(p2)) for key, (_p, p1, p2) in s.products.items()}
        for (f, g), t in s.tuples.items():
            key = (s.terms[f].cod, s.terms[g].cod)
            pc = proj_class.get(key)
            if pc is None:
                continue
            for (u, v), c in s.compositions.items():
                if uf.find(u) != uf.find(t):
                    continue
                if uf.find(v) == pc[0]:
                    unify(c, f)
                elif uf.find(v) == pc[1]:
                    unify(c, g)
        # a map into a product is the tuple of its projections
        prod_types = {p: key for key, (p, _1, _2) in s.products.items()}
        for h in s.terms.values():
            key = prod_types.get(h.cod)
            if key is None:
                continue
            pc = proj_class[key]
            a = b = None
            for (u, v), c in s.compositions.items():
                if uf.find(u) != uf.find(h.name):
                    continue
                if uf.find(v) == pc[0]:
                    a = c
                elif uf.find(v) == pc[1]:
                    b = c
            if a is None or b is None:
                continue
            for (u, v), t in s.tuples.items():
                if uf.find(u) == uf.find(a) and uf.find(v) == uf.find(b):
                    unify(t, h.name)
        # all parallel maps into the terminal type agree
        if s.terminal is not None:
            into_unit: Dict[str, str] = {}
            for t in s.terms.values():
                if t.cod != s.terminal:
                    continue
                if t.dom in into_unit:
                    unify(into_unit[t.dom], t.name)
                else:
                    into_unit[t.dom] = t.name
    return uf


def terms_equal(s: Specification, t1: TermName, t2: TermName, depth: int,
                max_carrier: int = 2, countermodel_cap: int = 200000,
                sat_cap: int = 800) -> Verdict:
    """Decide equality of two parallel terms in the presented theory, up
    to the saturation depth; inequality is witnessed by a finite model."""
    if t1 not in s.terms or t2 not in s.terms:
        raise NotParallel(f"unknown term {t1 if t1 not in s.terms else t2}")
    if not s.parallel(t1, t2):
        raise NotParallel(f"{t1} and {t2} are not parallel")
    if t1 == t2:
        return Verdict(TriState.EQUAL)
    # widen the universe one level at a time: most proofs close early, and
    # a dense level-k universe makes the closure quadratic-to-cubic, so a
    # blown budget falls through to the semantic check instead
    for level in range(depth + 1):
        try:
            sat = saturate(s, level, cap=sat_cap)
        except BudgetExceeded:
            break
        uf = congruence_classes(sat.spec)
        if uf.find(t1) == uf.find(t2):
            return Verdict(TriState.EQUAL)
    cm = _find_countermodel(s, t1, t2, max_carrier, countermodel_cap)
    if cm is not None:
        return Verdict(TriState.DISTINCT_AT_BOUND, cm)
    return Verdict(TriState.UNKNOWN)


def _carrier_choices(s: Specification, max_carrier: int):
    from .models import _base_types
    base = _base_types(s)
    for sizes in itertools.product(range(1, max_carrier + 1), repeat=len(base)):
        yield {x: tuple(range(k)) for x, k in zip(base, sizes)}


def _find_countermodel(s: Specification, t1: TermName, t2: TermName,
                       max_carrier: int, cap: int):
    from .models import enumerate_models
    from .errors import SearchSpaceTooLarge
    for carriers in _carrier_choices(s, max_carrier):
        try:
            candidates = enumerate_models(s, carriers, cap=cap)
        except SearchSpaceTooLarge:
            continue
        for m in candidates:
            dom = m.carriers[s.terms[t1].dom]
            if any(m.apply(t1, v) != m.apply(t2, v) for v in dom):
                return m
    return None


# ---------------------------------------------------------------------------
# Entailment checking
# ---------------------------------------------------------------------------

def is_entailment(tau: SpecMorphism, depth: int = 3,
                  max_carrier: int = 2) -> Verdict:
    """Is the extra content of the target derivable from the source?

    EQUAL means yes (tau is an entailment at this bound).  A separating
    model yields DISTINCT_AT_BOUND; everything else is UNKNOWN.
    """
    errs = validate_morphism(tau)
    if errs:
        raise ValueError("is_entailment requires a valid morphism: " + errs[0])
    s1, s = tau.source, tau.target
    if len(set(tau.type_map.values())) != len(tau.type_map) or \
            len(set(tau.term_map.values())) != len(tau.term_map):
        return Verdict(TriState.UNKNOWN)  # only extensions are analysed
    from .parameterize import (ensure_collapse, ensure_comp, ensure_identity,
                               ensure_product, ensure_terminal, ensure_tuple)
    big = s1.copy()
    inv_t = {v: k for k, v in tau.type_map.items()}
    inv_m = {v: k for k, v in tau.term_map.items()}
    phi_t: Dict[str, str] = dict(inv_t)
    phi_m: Dict[str, str] = dict(inv_m)

    # map new types; each must be derivable as a terminal or product type
    new_types = [x for x in sorted(s.types) if x not in inv_t]
    progress = True
    while new_types and progress:
        progress = False
        for x in list(new_types):
            if x == s.terminal:
                phi_t[x] = ensure_terminal(big)
                new_types.remove(x)
                progress = True
                continue
            for (y1, y2), (p, _1, _2) in s.products.items():
                if p == x and y1 in phi_t and y2 in phi_t:
                    phi_t[x] = ensure_product(big, phi_t[y1], phi_t[y2])[0]
                    new_types.remove(x)
                    progress = True
                    break
    if new_types:
        return _semantic_entailment_check(tau, max_carrier)
    # map new terms, in rounds since marks may chain
    new_terms = [t for t in sorted(s.terms) if t not in inv_m]
    mark_of: Dict[str, Tuple[str, tuple]] = {}
    for x, i in s.identities.items():
        mark_of.setdefault(i, ("identity", (x,)))
    for (f, g), c in s.compositions.items():
        mark_of.setdefault(c, ("compose", (f, g)))
    for key, (p, p1, p2) in s.products.items():
        mark_of.setdefault(p1, ("proj1", key))
        mark_of.setdefault(p2, ("proj2", key))
    for (f, g), t in s.tuples.items():
        mark_of.setdefault(t, ("tuple", (f, g)))
    for x, c in s.collapsings.items():
        mark_of.setdefault(c, ("collapse", (x,)))
    progress = True
    while progress and new_terms:
        progress = False
        for t in list(new_terms):
            rec = mark_of.get(t)
            img: Optional[str] = None
            if rec is None:
                return _semantic_entailment_check(tau, max_carrier)
            kind, args = rec
            if kind == "identity":
                x = phi_t.get(args[0])
                img = ensure_identity(big, x) if x else None
            elif kind == "collapse":
                x = phi_t.get(args[0])
                img = ensure_collapse(big, x) if x else None
            elif kind == "compose":
                f, g = (phi_m.get(a) for a in args)
                img = ensure_comp(big, f, g) if f and g else None
            elif kind == "tuple":
                f, g = (phi_m.get(a) for a in args)
                img = ensure_tuple(big, f, g) if f and g else None
            elif kind in ("proj1", "proj2"):
                y1, y2 = (phi_t.get(a) for a in args)
                prod = ensure_product(big, y1, y2) if y1 and y2 else None
                img = prod[1 if kind == "proj1" else 2] if prod else None
            if img is not None:
                phi_m[t] = img
                new_terms.remove(t)
                progress = True
    if new_terms:
        return Verdict(TriState.UNKNOWN)  # a new term without a derivable recipe
    # obligations: equations of s and marks of s not present in s1
    obligations: List[Tuple[str, str]] = []
    for (a, b) in s.equations:
        src_eq = eqpair(inv_m[a], inv_m[b]) if a in inv_m and b in inv_m else None
        if src_eq is not None and (src_eq in s1.equations or src_eq[0] == src_eq[1]):
            continue
        obligations.append((phi_m[a], phi_m[b]))
    for (f, g), c in s.compositions.items():
        if f in inv_m and g in inv_m and c in inv_m and \
                s1.compositions.get((inv_m[f], inv_m[g])) == inv_m[c]:
            continue
        obligations.append((ensure_comp(big, phi_m[f], phi_m[g]), phi_m[c]))
    for (f, g), t in s.tuples.items():
        if f in inv_m and g in inv_m and t in inv_m and \
                s1.tuples.get((inv_m[f], inv_m[g])) == inv_m[t]:
            continue
        obligations.append((ensure_tuple(big, phi_m[f], phi_m[g]), phi_m[t]))
    for x, i in s.identities.items():
        if x in inv_t and i in inv_m and s1.identities.get(inv_t[x]) == inv_m[i]:
            continue
        obligations.append((ensure_identity(big, phi_t[x]), phi_m[i]))
    for x, c in s.collapsings.items():
        if x in inv_t and c in inv_m and s1.collapsings.get(inv_t[x]) == inv_m[c]:
            continue
        obligations.append((ensure_collapse(big, phi_t[x]), phi_m[c]))
    uf = congruence_classes(big)
    unproven = [(a, b) for (a, b) in obligations if uf.find(a) != uf.find(b)]
    if unproven:
        # widen the term universe before giving up on a proof
        for dd in range(min(depth, 2), 0, -1):
            try:
                big = saturate(big, dd).spec
            except BudgetExceeded:
                continue
            uf = congruence_classes(big)
            unproven = [(a, b) for (a, b) in unproven
                        if uf.find(a) != uf.find(b)]
            break
    if not unproven:
        return Verdict(TriState.EQUAL)
    for (a, b) in unproven:
        cm = _find_countermodel_in(big, a, b, max_carrier)
        if cm is not None:
            return Verdict(TriState.DISTINCT_AT_BOUND, cm)
    return Verdict(TriState.UNKNOWN)


def _find_countermodel_in(big: Specification, a: str, b: str, max_carrier: int):
    if a not in big.terms or b not in big.terms or not big.parallel(a, b):
        return None
    return _find_countermodel(big, a, b, max_carrier, 200000)


def _semantic_entailment_check(tau: SpecMorphism, max_carrier: int) -> Verdict:
    """Fallback: look for a small model of the source without a unique
    extension along tau; finding one refutes the entailment."""
    from .errors import SearchSpaceTooLarge
    from .models import FiniteModel, _base_types, enumerate_models
    s1, s = tau.source, tau.target
    for carriers in _carrier_choices(s1, max_carrier):
        try:
            sources = enumerate_models(s1, carriers, cap=200000)
        except SearchSpaceTooLarge:
            continue
        for m in sources:
            # transport carriers/functions along tau and count extensions
            fixed = FiniteModel(
                {tau.type_map[x]: m.carriers[x] for x in s1.types},
                {tau.term_map[t]: m.functions[t] for t in s1.terms})
            base = _base_types(s)
            missing = [x for x in base if x not in fixed.carriers]
            choices = [c for c in _carrier_choices_for(missing, max_carrier)]
            count = 0
            for extra in choices:
                try:
                    count += len(enumerate_models(s, {**extra}, fixed=fixed,
                                                  cap=200000))
                except SearchSpaceTooLarge:
                    count = 1  # cannot conclude from this source model
                    break
                if count > 1:
                    break
            if count != 1:
                return Verdict(TriState.DISTINCT_AT_BOUND, m)
    return Verdict(TriState.UNKNOWN)


def _carrier_choices_for(names: List[str], max_carrier: int):
    if not names:
        yield {}
        return
    for sizes in itertools.product(range(0, max_carrier + 1), repeat=len(names)):
        yield {x: tuple(range(k)) for x, k in zip(names, sizes)}


# ---------------------------------------------------------------------------
# Fraction composition
# ---------------------------------------------------------------------------

def compose_fractions(rho1: Fraction, rho2: Fraction) -> Fraction:
    """Cospan composition via pushout; the entailment mark propagates."""
    if not spec_equal(rho1.dest, rho2.source):
        raise ValueError("fractions are not composable")
    # pushout of rho1.denominator's target against rho2.numerator's target
    _p, q1, q2 = pushout(rho1.denominator, rho2.numerator)
    from .core import compose as cmor
    num = cmor(rho1.numerator, q1)
    den = cmor(rho2.denominator, q2)
    return Fraction(num, den,
                    rho1.denominator_is_entailment and rho2.denominator_is_entailment)
