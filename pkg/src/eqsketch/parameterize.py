"""Parameterization: from a decorated specification to one with a
distinguished parameter type A, and parameter passing.

Types and pure terms are kept as they are; every general term
f: X -> Y is replaced by f': A*X -> Y.  The lift (written ``sharp``
below) sends a general f to f' and a pure f to the composite
f . eps_X, where proj_X: A*X -> A and eps_X: A*X -> X are the
projections of the on-demand product A*X.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Tuple

from .core import (Specification, SpecMorphism, TermName, TypeName,
                   fresh_name)
from .decorate import DecoratedSpecification, undecorate, validate_decorated
from .errors import PurityViolation


@dataclass
class ParameterizedSpecification:
    base: Specification
    parameter_type: TypeName


@dataclass
class ParameterizedSpecificationWithConstant:
    base: ParameterizedSpecification
    parameter_constant: TermName


# ---------------------------------------------------------------------------
# ensure-helpers: add a derived feature to a mutable spec, reusing an
# existing mark when the site is already filled
# ---------------------------------------------------------------------------

def ensure_identity(s: Specification, x: TypeName) -> TermName:
    if x in s.identities:
        return s.identities[x]
    n = fresh_name(f"id_{x}", s.all_names())
    s.add_term(n, x, x)
    s.identities[x] = n
    return n


def ensure_terminal(s: Specification) -> TypeName:
    if s.terminal is None:
        u = fresh_name("One", s.all_names())
        s.add_type(u)
        s.terminal = u
    return s.terminal


def ensure_collapse(s: Specification, x: TypeName) -> TermName:
    if x in s.collapsings:
        return s.collapsings[x]
    u = ensure_terminal(s)
    n = fresh_name(f"tu_{x}", s.all_names())
    s.add_term(n, x, u)
    s.collapsings[x] = n
    return n


def ensure_product(s: Specification, y1: TypeName, y2: TypeName,
                   names: Optional[Tuple[str, str, str]] = None
                   ) -> Tuple[TypeName, TermName, TermName]:
    if (y1, y2) in s.products:
        return s.products[(y1, y2)]
    hint_p, hint_1, hint_2 = names or (f"{y1}*{y2}", f"p1_{y1}*{y2}", f"p2_{y1}*{y2}")
    p = fresh_name(hint_p, s.all_names())
    s.add_type(p)
    p1 = fresh_name(hint_1, s.all_names())
    s.add_term(p1, p, y1)
    p2 = fresh_name(hint_2, s.all_names())
    s.add_term(p2, p, y2)
    s.products[(y1, y2)] = (p, p1, p2)
    return (p, p1, p2)


def ensure_comp(s: Specification, f: TermName, g: TermName) -> TermName:
    """The marked composite g . f (first f, then g)."""
    if (f, g) in s.compositions:
        return s.compositions[(f, g)]
    n = fresh_name(f"{g}_o_{f}", s.all_names())
    s.add_term(n, s.terms[f].dom, s.terms[g].cod)
    s.compositions[(f, g)] = n
    return n


def ensure_tuple(s: Specification, f: TermName, g: TermName) -> TermName:
    if (f, g) in s.tuples:
        return s.tuples[(f, g)]
    p, _1, _2 = ensure_product(s, s.terms[f].cod, s.terms[g].cod)
    n = fresh_name(f"pair_{f}_{g}", s.all_names())
    s.add_term(n, s.terms[f].dom, p)
    s.tuples[(f, g)] = n
    return n


# ---------------------------------------------------------------------------
# The embeddings
# ---------------------------------------------------------------------------

def embed_A(s: Specification) -> ParameterizedSpecification:
    """View a plain specification as parameterized: adjoin one fresh
    parameter type, altering nothing else."""
    out = s.copy()
    a = fresh_name("A", out.all_names())
    out.add_type(a)
    return ParameterizedSpecification(out, a)


def embed_a(p: ParameterizedSpecification) -> ParameterizedSpecificationWithConstant:
    """Adjoin a constant a: 1 -> A of the parameter type (and a terminal
    type when there is none)."""
    out = p.base.copy()
    u = ensure_terminal(out)
    a = fresh_name("a", out.all_names())
    out.add_term(a, u, p.parameter_type)
    return ParameterizedSpecificationWithConstant(
        ParameterizedSpecification(out, p.parameter_type), a)


# ---------------------------------------------------------------------------
# The parameterization translation
# ---------------------------------------------------------------------------

@dataclass
class Parameterization:
    source: DecoratedSpecification
    spec: ParameterizedSpecification
    lift: Dict[TermName, TermName]
    aprods: Dict[TypeName, Tuple[TypeName, TermName, TermName]]

    def __iter__(self) -> Iterator:
        # supports the two-view calling convention: spec, lift = parameterize(d)
        yield self.spec
        yield self.lift


def _aprod(spec: Specification, a: TypeName, x: TypeName,
           aprods: Dict[TypeName, Tuple[TypeName, TermName, TermName]]
           ) -> Tuple[TypeName, TermName, TermName]:
    if x not in aprods:
        aprods[x] = ensure_product(spec, a, x,
                                   (f"{a}*{x}", f"proj_{x}", f"eps_{x}"))
    return aprods[x]


def _sharp(spec: Specification, a: TypeName, d: DecoratedSpecification,
           lift: Dict[TermName, TermName],
           aprods: Dict[TypeName, Tuple[TypeName, TermName, TermName]],
           t: TermName) -> TermName:
    """The lift of a term of the decorated base: f' when general,
    f . eps_X when pure."""
    if t in lift:
        return lift[t]
    dom = d.base.terms[t].dom
    _p, _proj, eps = _aprod(spec, a, dom, aprods)
    c = ensure_comp(spec, eps, t)
    lift[t] = c
    return c


def parameterize(d: DecoratedSpecification) -> Parameterization:
    """Replace every general feature by a parameterized one.

    Pure content is copied unchanged.  Each general f: X -> Y becomes a
    fresh f': A*X -> Y; a general composition mark g.f = c becomes the
    mark g# . <proj_X, f#> = c' and a general pairing mark <f,g> = t
    becomes <f#, g#> = t'; equations are lifted componentwise.
    """
    errs = validate_decorated(d)
    if errs:
        raise ValueError("parameterize requires a valid decorated input: " + errs[0])
    base = d.base
    p = Specification()
    p.types = set(base.types)
    p.terminal = base.terminal
    for t in base.terms.values():
        if d.is_pure(t.name):
            p.add_term(t.name, t.dom, t.cod)
    p.identities = dict(base.identities)
    p.collapsings = dict(base.collapsings)
    p.products = {k: v for k, v in base.products.items()}
    for (f, g), c in base.compositions.items():
        if d.is_pure(f) and d.is_pure(g) and d.is_pure(c):
            p.compositions[(f, g)] = c
    for (f, g), t in base.tuples.items():
        if d.is_pure(f) and d.is_pure(g) and d.is_pure(t):
            p.tuples[(f, g)] = t
    for (t1, t2) in base.equations:
        if d.is_pure(t1) and d.is_pure(t2):
            p.equations.add((t1, t2))

    a = fresh_name("A", p.all_names() | base.all_names())
    p.add_type(a)
    lift: Dict[TermName, TermName] = {}
    aprods: Dict[TypeName, Tuple[TypeName, TermName, TermName]] = {}
    for f in sorted(d.general_terms()):
        dom, cod = base.terms[f].dom, base.terms[f].cod
        prod, _proj, _eps = _aprod(p, a, dom, aprods)
        prime = fresh_name(f + "'", p.all_names())
        p.add_term(prime, prod, cod)
        lift[f] = prime

    def sharp(t: TermName) -> TermName:
        return _sharp(p, a, d, lift, aprods, t)

    for (f, g), c in sorted(base.compositions.items()):
        if d.is_pure(f) and d.is_pure(g) and d.is_pure(c):
            continue
        x = base.terms[f].dom
        y = base.terms[g].dom
        _px, proj_x, _epsx = _aprod(p, a, x, aprods)
        fs, gs = sharp(f), sharp(g)
        _aprod(p, a, y, aprods)
        w = ensure_tuple(p, proj_x, fs)   # <proj_X, f#>: A*X -> A*Y
        cs = sharp(c)
        if (w, gs) not in p.compositions and cs not in p.compositions.values():
            p.compositions[(w, gs)] = cs
        else:
            p.add_equation(ensure_comp(p, w, gs), cs)
    for (f, g), t in sorted(base.tuples.items()):
        if d.is_pure(f) and d.is_pure(g) and d.is_pure(t):
            continue
        fs, gs = sharp(f), sharp(g)
        ts = sharp(t)
        if (fs, gs) not in p.tuples and ts not in p.tuples.values():
            p.tuples[(fs, gs)] = ts
        else:
            p.add_equation(ensure_tuple(p, fs, gs), ts)
    for (t1, t2) in sorted(base.equations):
        if d.is_pure(t1) and d.is_pure(t2):
            continue
        p.add_equation(sharp(t1), sharp(t2))
    return Parameterization(d, ParameterizedSpecification(p, a), lift, aprods)


def parameterize_morphism(d1: DecoratedSpecification, d2: DecoratedSpecification,
                          u: SpecMorphism,
                          par1: Optional[Parameterization] = None,
                          par2: Optional[Parameterization] = None) -> SpecMorphism:
    """The induced morphism between parameterization outputs; the target
    may be extended by sharps of pure images on demand."""
    for t in d1.base.terms:
        if d1.is_pure(t) and not d2.is_pure(u.term_map[t]):
            raise PurityViolation(f"{t} is pure but its image {u.term_map[t]} is not")
    par1 = par1 or parameterize(d1)
    par2 = par2 or parameterize(d2)
    p1 = par1.spec.base
    p2 = par2.spec.base.copy()
    a2 = par2.spec.parameter_type
    aprods2 = dict(par2.aprods)
    lift2 = dict(par2.lift)
    type_map: Dict[TypeName, TypeName] = {x: u.type_map[x] for x in d1.base.types}
    type_map[par1.spec.parameter_type] = a2
    term_map: Dict[TermName, TermName] = {}
    for t in d1.base.terms:
        if d1.is_pure(t):
            term_map[t] = u.term_map[t]
    for x, (prod, proj, eps) in par1.aprods.items():
        ux = u.type_map[x]
        prod2, proj2, eps2 = _aprod(p2, a2, ux, aprods2)
        type_map[prod] = prod2
        term_map[proj] = proj2
        term_map[eps] = eps2
    for f in d1.general_terms():
        term_map[par1.lift[f]] = _sharp(p2, a2, d2, lift2, aprods2, u.term_map[f])
    # sharps of pure terms of d1 that were materialized in p1
    for f, fs in par1.lift.items():
        if fs in term_map or f not in d1.base.terms:
            continue
        term_map[fs] = _sharp(p2, a2, d2, lift2, aprods2, u.term_map[f])
    # remaining derived terms of p1 (pair tuples, glue composites) by recipe
    progress = True
    while progress:
        progress = False
        for (f, g), c in p1.compositions.items():
            if c not in term_map and f in term_map and g in term_map:
                term_map[c] = ensure_comp(p2, term_map[f], term_map[g])
                progress = True
        for (f, g), t in p1.tuples.items():
            if t not in term_map and f in term_map and g in term_map:
                term_map[t] = ensure_tuple(p2, term_map[f], term_map[g])
                progress = True
    for x in p1.types:
        if x not in type_map:
            for (y1, y2), (prod, p1n, p2n) in p1.products.items():
                if prod == x and y1 in type_map and y2 in type_map:
                    q, q1, q2 = ensure_product(p2, type_map[y1], type_map[y2])
                    type_map[x] = q
                    term_map.setdefault(p1n, q1)
                    term_map.setdefault(p2n, q2)
    return SpecMorphism(p1, p2, type_map, term_map)


# ---------------------------------------------------------------------------
# Theorem-style checks
# ---------------------------------------------------------------------------

def check_param_restricts_to_embed(s: Specification, budget: int = 200000) -> bool:
    """Parameterizing the all-pure decoration of s must give exactly s
    plus a parameter type: the translation restricts to the plain
    embedding on pure content."""
    from .core import iso_search
    from .decorate import purify
    par = parameterize(purify(s))
    emb = embed_A(s)
    res = iso_search(par.spec.base, emb.base, budget=budget,
                     pin_types={par.spec.parameter_type: emb.parameter_type})
    return bool(res)


# ---------------------------------------------------------------------------
# Parameter passing
# ---------------------------------------------------------------------------

@dataclass
class EllResult:
    """Substituting the distinguished constant for the parameter slot.

    ``morphism`` maps the plain specification (with a adjoined) into an
    extension of the parameterized one; ``extension`` is the inclusion of
    the parameterized specification into that extension.
    """
    morphism: SpecMorphism
    extension: SpecMorphism
    parameterization: Parameterization
    constant: TermName

    @property
    def source(self) -> Specification:
        return self.morphism.source

    @property
    def target(self) -> Specification:
        return self.morphism.target


def ell(d: DecoratedSpecification,
        par: Optional[Parameterization] = None) -> EllResult:
    """Parameter passing: pure terms are untouched; a general f: X -> Y
    goes to f' . <a.tu_X, id_X> (the tuple plays <a, id_X> once 1*X is
    identified with X)."""
    base = undecorate(d)
    if par is None:
        par = parameterize(d)
    src_pc = embed_a(embed_A(base))
    src = src_pc.base.base
    tgt_pc = embed_a(par.spec)
    tgt0 = tgt_pc.base.base
    a_const = tgt_pc.parameter_constant
    ext = tgt0.copy()

    type_map: Dict[TypeName, TypeName] = {x: x for x in base.types}
    type_map[src_pc.base.parameter_type] = par.spec.parameter_type
    type_map[src.terminal] = ext.terminal
    term_map: Dict[TermName, TermName] = {src_pc.parameter_constant: a_const}

    def ell_term(f: TermName) -> TermName:
        if d.is_pure(f):
            return f
        x = base.terms[f].dom
        idx = ensure_identity(ext, x)
        tux = ensure_collapse(ext, x)
        ax = ensure_comp(ext, tux, a_const)          # a . tu_X : X -> A
        w = ensure_tuple(ext, ax, idx)               # <a.tu_X, id_X>: X -> A*X
        return ensure_comp(ext, w, par.lift[f])

    for f in sorted(base.terms):
        term_map[f] = ell_term(f)
    # preserve the structural marks of the source on their images
    for (f, g), c in base.compositions.items():
        key = (term_map[f], term_map[g])
        if ext.compositions.get(key, term_map[c]) != term_map[c]:
            ext.add_equation(ext.compositions[key], term_map[c])
        else:
            ext.compositions[key] = term_map[c]
    for (f, g), t in base.tuples.items():
        key = (term_map[f], term_map[g])
        if ext.tuples.get(key, term_map[t]) != term_map[t]:
            ext.add_equation(ext.tuples[key], term_map[t])
        else:
            ext.tuples[key] = term_map[t]
    for x, i in base.identities.items():
        if x not in ext.identities:
            ext.identities[x] = term_map[i]
        elif ext.identities[x] != term_map[i]:
            ext.add_equation(ext.identities[x], term_map[i])
    for x, c in base.collapsings.items():
        if x not in ext.collapsings:
            ext.collapsings[x] = term_map[c]
        elif ext.collapsings[x] != term_map[c]:
            ext.add_equation(ext.collapsings[x], term_map[c])
    for (t1, t2) in base.equations:
        ext.add_equation(term_map[t1], term_map[t2])

    morph = SpecMorphism(src, ext, type_map, term_map)
    incl = SpecMorphism(tgt0, ext, {x: x for x in tgt0.types},
                        {t: t for t in tgt0.terms})
    return EllResult(morph, incl, par, a_const)


def check_ell_natural(d1: DecoratedSpecification, d2: DecoratedSpecification,
                      u: SpecMorphism, depth: int = 4) -> bool:
    """Does substituting the parameter commute with translating along u?

    Both composites around the square are evaluated on every generator of
    d1's base; images are compared with terms_equal inside an extension of
    the parameterized target."""
    from .inference import TriState, terms_equal
    for t in d1.base.terms:
        if d1.is_pure(t) and not d2.is_pure(u.term_map[t]):
            raise PurityViolation(f"{t} is pure but its image {u.term_map[t]} is not")
    par2 = parameterize(d2)
    e2 = ell(d2, par=par2)
    ext = e2.target.copy()
    a2 = par2.spec.parameter_type
    aprods2 = dict(par2.aprods)
    lift2 = dict(par2.lift)
    for f in sorted(d1.base.terms):
        uf = u.term_map[f]
        path_a = e2.morphism.term_map[uf]
        if d1.is_pure(f):
            path_b = uf                      # both legs act as the identity
        else:
            x2 = u.type_map[d1.base.terms[f].dom]
            _aprod(ext, a2, x2, aprods2)
            idx = ensure_identity(ext, x2)
            tux = ensure_collapse(ext, x2)
            ax = ensure_comp(ext, tux, e2.constant)
            w = ensure_tuple(ext, ax, idx)
            fs = _sharp(ext, a2, d2, lift2, aprods2, uf)
            path_b = ensure_comp(ext, w, fs)
        if path_a == path_b:
            continue
        if terms_equal(ext, path_a, path_b, depth).state is not TriState.EQUAL:
            return False
    return True
