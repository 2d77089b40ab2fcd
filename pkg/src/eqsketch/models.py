"""Finite set-valued models: checking, brute-force enumeration,
homomorphism search, parameter passing, terminal models and the
exact-parameterization report.

Chosen structure is cartesian: a marked product type carries the set of
ordered pairs of the factor carriers and the terminal type carries the
canonical one-element set ``((),)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .core import Specification, TermName, TypeName
from .decorate import DecoratedSpecification, pure_part, undecorate
from .errors import InvalidAlpha, SearchSpaceTooLarge, Unassigned
from .parameterize import Parameterization, parameterize

UNIT_ELEMENT: Tuple = ()
DEFAULT_CANDIDATE_CAP = 10_000_000


@dataclass
class FiniteModel:
    carriers: Dict[TypeName, Tuple] = field(default_factory=dict)
    functions: Dict[TermName, Dict] = field(default_factory=dict)

    def carrier(self, x: TypeName) -> Tuple:
        return self.carriers[x]

    def apply(self, t: TermName, x):
        return self.functions[t][x]

    def table(self, t: TermName) -> Dict:
        return self.functions[t]

    def copy(self) -> "FiniteModel":
        return FiniteModel({k: tuple(v) for k, v in self.carriers.items()},
                           {k: dict(v) for k, v in self.functions.items()})

    def canonical(self) -> Tuple:
        """Hashable, order-insensitive form used for comparisons and sorting."""
        cs = tuple(sorted((k, tuple(v)) for k, v in self.carriers.items()))
        fs = tuple(sorted((k, tuple(sorted(tab.items(), key=repr)))
                          for k, tab in self.functions.items()))
        return (cs, fs)


def check_model(s: Specification, m: FiniteModel) -> List[str]:
    """Empty iff m is a model of s with the chosen cartesian structure."""
    for x in s.types:
        if x not in m.carriers:
            raise Unassigned(f"type {x}")
    for t in s.terms:
        if t not in m.functions:
            raise Unassigned(f"term {t}")
    out: List[str] = []
    for (y1, y2), (p, _p1, _p2) in s.products.items():
        want = {(a, b) for a in m.carriers[y1] for b in m.carriers[y2]}
        if set(m.carriers[p]) != want:
            out.append(f"carrier of product type {p} is not the set of pairs")
    if s.terminal is not None and tuple(m.carriers[s.terminal]) != (UNIT_ELEMENT,):
        out.append(f"carrier of terminal {s.terminal} is not the canonical singleton")
    for t in s.terms.values():
        tab = m.functions[t.name]
        dom = m.carriers[t.dom]
        cod = set(m.carriers[t.cod])
        for x in dom:
            if x not in tab:
                out.append(f"term {t.name}: no value at {x!r}")
            elif tab[x] not in cod:
                out.append(f"term {t.name}: value at {x!r} outside carrier of {t.cod}")
    if out:
        return out
    for x, i in s.identities.items():
        for v in m.carriers[x]:
            if m.apply(i, v) != v:
                out.append(f"identity {i}: not the identity at {v!r}")
    for (f, g), c in s.compositions.items():
        for v in m.carriers[s.terms[f].dom]:
            if m.apply(c, v) != m.apply(g, m.apply(f, v)):
                out.append(f"composite {c} != {g} after {f} at {v!r}")
    for (y1, y2), (p, p1, p2) in s.products.items():
        for (a, b) in m.carriers[p]:
            if m.apply(p1, (a, b)) != a or m.apply(p2, (a, b)) != b:
                out.append(f"projections of {p} are not coordinate projections")
                break
    for (f, g), t in s.tuples.items():
        for v in m.carriers[s.terms[f].dom]:
            if m.apply(t, v) != (m.apply(f, v), m.apply(g, v)):
                out.append(f"tuple {t} is not the pairing of {f},{g} at {v!r}")
    for x, c in s.collapsings.items():
        for v in m.carriers[x]:
            if m.apply(c, v) != UNIT_ELEMENT:
                out.append(f"collapsing {c}: not constant at {v!r}")
    for (t1, t2) in sorted(s.equations):
        for v in m.carriers[s.terms[t1].dom]:
            if m.apply(t1, v) != m.apply(t2, v):
                out.append(f"equation {t1} = {t2} fails at {v!r}")
                break
    return out


def derived_carriers(s: Specification, base_carriers: Dict[TypeName, Sequence]) -> Dict[TypeName, Tuple]:
    """Carriers for all types: products and the terminal are forced."""
    carriers: Dict[TypeName, Tuple] = {x: tuple(v) for x, v in base_carriers.items()}
    if s.terminal is not None:
        carriers[s.terminal] = (UNIT_ELEMENT,)
    changed = True
    while changed:
        changed = False
        for (y1, y2), (p, _1, _2) in s.products.items():
            if p not in carriers and y1 in carriers and y2 in carriers:
                carriers[p] = tuple((a, b) for a in carriers[y1] for b in carriers[y2])
                changed = True
    missing = sorted(x for x in s.types if x not in carriers)
    if missing:
        raise Unassigned(f"no carrier for type(s) {', '.join(missing)}")
    return carriers


def _forced_terms(s: Specification) -> Dict[TermName, Tuple[str, tuple]]:
    """Terms whose tables are determined by marks, with their recipe."""
    forced: Dict[TermName, Tuple[str, tuple]] = {}
    for x, i in s.identities.items():
        forced[i] = ("identity", (x,))
    for (y1, y2), (p, p1, p2) in s.products.items():
        forced[p1] = ("proj1", (p,))
        forced[p2] = ("proj2", (p,))
    for x, c in s.collapsings.items():
        forced[c] = ("collapse", (x,))
    for (f, g), c in s.compositions.items():
        if c not in forced:
            forced[c] = ("compose", (f, g))
    for (f, g), t in s.tuples.items():
        if t not in forced:
            forced[t] = ("tuple", (f, g))
    return forced


def _propagate_forced(s: Specification, carriers, functions, forced) -> bool:
    """Fill in forced tables from their ingredients; False on conflict."""
    pending = {t: r for t, r in forced.items()}
    progress = True
    while pending and progress:
        progress = False
        for t, (kind, args) in sorted(pending.items()):
            tab = None
            if kind == "identity":
                tab = {v: v for v in carriers[args[0]]}
            elif kind == "proj1":
                tab = {v: v[0] for v in carriers[args[0]]}
            elif kind == "proj2":
                tab = {v: v[1] for v in carriers[args[0]]}
            elif kind == "collapse":
                tab = {v: UNIT_ELEMENT for v in carriers[args[0]]}
            elif kind == "compose":
                f, g = args
                if f in functions and g in functions:
                    tab = {v: functions[g][functions[f][v]]
                           for v in carriers[s.terms[f].dom]}
            elif kind == "tuple":
                f, g = args
                if f in functions and g in functions:
                    tab = {v: (functions[f][v], functions[g][v])
                           for v in carriers[s.terms[f].dom]}
            if tab is None:
                continue
            if t in functions and functions[t] != tab:
                return False
            functions[t] = tab
            del pending[t]
            progress = True
            break
    # leftover recipes waiting on terms that never arrive indicate a bug
    return not pending


def enumerate_models(s: Specification,
                     base_carriers: Dict[TypeName, Sequence],
                     fixed: Optional[FiniteModel] = None,
                     cap: int = DEFAULT_CANDIDATE_CAP) -> List[FiniteModel]:
    """All models of s over the given base carriers extending ``fixed``.

    Product/terminal carriers and mark-determined tables are forced; the
    remaining term tables are enumerated exhaustively and filtered by
    ``check_model``.  Deterministic order.
    """
    merged_base = dict(base_carriers)
    if fixed is not None:
        for x, v in fixed.carriers.items():
            merged_base.setdefault(x, tuple(v))
    carriers = derived_carriers(s, merged_base)
    forced = _forced_terms(s)
    fixed_funcs = dict(fixed.functions) if fixed is not None else {}
    free = sorted(t for t in s.terms if t not in forced and t not in fixed_funcs)
    spaces = []
    total = 1
    for t in free:
        dom = carriers[s.terms[t].dom]
        cod = carriers[s.terms[t].cod]
        total *= len(cod) ** len(dom)
        if total > cap:
            raise SearchSpaceTooLarge(f"{total} candidates exceed cap {cap}")
        spaces.append((t, dom, cod))
    out: List[FiniteModel] = []
    for combo in itertools.product(*[itertools.product(cod, repeat=len(dom))
                                     for (_t, dom, cod) in spaces]):
        functions: Dict[TermName, Dict] = {k: dict(v) for k, v in fixed_funcs.items()}
        for (t, dom, _cod), values in zip(spaces, combo):
            functions[t] = dict(zip(dom, values))
        if not _propagate_forced(s, carriers, functions, forced):
            continue
        m = FiniteModel(dict(carriers), functions)
        if not check_model(s, m):
            out.append(m)
    out.sort(key=lambda m: m.canonical())
    return out


@dataclass
class ModelHom:
    components: Dict[TypeName, Dict]

    def apply(self, x: TypeName, v):
        return self.components[x][v]


def _base_types(s: Specification) -> List[TypeName]:
    derived = {p for (_k, (p, _1, _2)) in s.products.items()}
    if s.terminal is not None:
        derived.add(s.terminal)
    return sorted(x for x in s.types if x not in derived)


def hom_search(s: Specification, m: FiniteModel, n: FiniteModel,
               fix_types: Sequence[TypeName] = ()) -> List[ModelHom]:
    """All homomorphisms m -> n; components on product/terminal types are
    forced, components listed in ``fix_types`` are required to be the
    identity."""
    base = _base_types(s)
    choice_types = [x for x in base if x not in set(fix_types)]
    spaces = []
    for x in choice_types:
        spaces.append([dict(zip(m.carriers[x], values))
                       for values in itertools.product(n.carriers[x],
                                                       repeat=len(m.carriers[x]))])
    out: List[ModelHom] = []
    for combo in itertools.product(*spaces):
        comp: Dict[TypeName, Dict] = {x: {v: v for v in m.carriers[x]}
                                      for x in fix_types}
        comp.update(dict(zip(choice_types, combo)))
        if _complete_hom(s, m, n, comp) and _hom_commutes(s, m, n, comp):
            out.append(ModelHom(comp))
    out.sort(key=lambda h: tuple(sorted((x, tuple(sorted(tab.items(), key=repr)))
                                        for x, tab in h.components.items())))
    return out


def _complete_hom(s, m, n, comp) -> bool:
    if s.terminal is not None:
        comp[s.terminal] = {UNIT_ELEMENT: UNIT_ELEMENT}
    changed = True
    while changed:
        changed = False
        for (y1, y2), (p, _1, _2) in s.products.items():
            if p not in comp and y1 in comp and y2 in comp:
                comp[p] = {(a, b): (comp[y1][a], comp[y2][b])
                           for (a, b) in m.carriers[p]}
                changed = True
    return all(x in comp for x in s.types)


def _hom_commutes(s, m, n, comp) -> bool:
    for t in s.terms.values():
        hx = comp[t.dom]
        hy = comp[t.cod]
        for v in m.carriers[t.dom]:
            if hy[m.apply(t.name, v)] != n.apply(t.name, hx[v]):
                return False
    return True


# ---------------------------------------------------------------------------
# Parameter passing
# ---------------------------------------------------------------------------

def pass_parameter(d: DecoratedSpecification, par: Parameterization,
                   m_a: FiniteModel, alpha) -> FiniteModel:
    """Instantiate the parameter: build a model of the plain specification
    from a model of the parameterized one and an argument.

    Pure terms keep their interpretation; a general term f is interpreted
    as x |-> M(f')(alpha, x)."""
    if alpha not in m_a.carriers[par.spec.parameter_type]:
        raise InvalidAlpha(repr(alpha))
    base = undecorate(d)
    carriers = {x: tuple(m_a.carriers[x]) for x in base.types}
    functions: Dict[TermName, Dict] = {}
    for t in sorted(base.terms):
        if d.is_pure(t):
            functions[t] = {v: m_a.apply(t, v) for v in carriers[base.terms[t].dom]}
        else:
            primed = par.lift[t]
            functions[t] = {v: m_a.apply(primed, (alpha, v))
                            for v in carriers[base.terms[t].dom]}
    return FiniteModel(carriers, functions)


def terminal_model(d: DecoratedSpecification,
                   m_0: FiniteModel,
                   base_carriers: Dict[TypeName, Sequence],
                   par: Optional[Parameterization] = None,
                   cap: int = DEFAULT_CANDIDATE_CAP) -> Tuple[FiniteModel, List[FiniteModel]]:
    """The record-of-functions model: the parameter carrier is the set of
    models of the plain specification extending ``m_0``, and a primed term
    applies the record's field.

    Returns the model of the parameterized specification together with the
    enumerated extension list (index i of the list is the carrier element i).
    """
    if par is None:
        par = parameterize(d)
    base = undecorate(d)
    extensions = enumerate_models(base, base_carriers, fixed=m_0, cap=cap)
    p = par.spec.base
    a_type = par.spec.parameter_type
    carriers = derived_carriers(
        p, {**{x: tuple(v) for x, v in base_carriers.items()},
            **{x: tuple(v) for x, v in m_0.carriers.items() if x in p.types},
            a_type: tuple(range(len(extensions)))})
    functions: Dict[TermName, Dict] = {}
    for t in sorted(p.terms):
        if t in base.terms and d.is_pure(t):
            functions[t] = {v: m_0.apply(t, v) for v in carriers[p.terms[t].dom]}
    for f in sorted(d.general_terms()):
        primed = par.lift[f]
        dom = base.terms[f].dom
        functions[primed] = {(i, x): extensions[i].apply(f, x)
                             for i in range(len(extensions))
                             for x in carriers[dom]}
    forced = _forced_terms(p)
    ok = _propagate_forced(p, carriers, functions, forced)
    if not ok:
        raise AssertionError("terminal model construction hit a mark conflict")
    return FiniteModel(carriers, functions), extensions


def is_terminal(d: DecoratedSpecification, candidate: FiniteModel,
                m_0: FiniteModel, base_carriers: Dict[TypeName, Sequence],
                bound: int, par: Optional[Parameterization] = None,
                cap: int = DEFAULT_CANDIDATE_CAP) -> bool:
    """True iff every model of the parameterized specification extending
    m_0 with a parameter carrier of size <= bound has exactly one
    homomorphism into ``candidate`` fixing the shared part."""
    if par is None:
        par = parameterize(d)
    p = par.spec.base
    a_type = par.spec.parameter_type
    fix = sorted(x for x in p.types if x != a_type and x in _base_types(p))
    for size in range(bound + 1):
        carriers = {**{x: tuple(v) for x, v in base_carriers.items()},
                    a_type: tuple(range(size))}
        others = enumerate_models(p, carriers, fixed=m_0, cap=cap)
        for n in others:
            homs = hom_search(p, n, candidate, fix_types=fix)
            if len(homs) != 1:
                return False
    return True


@dataclass
class ExactnessReport:
    parameter_count: int
    model_count: int
    bijection: List[Tuple[object, int]]  # (alpha, index of extending model)
    injective: bool
    surjective: bool

    @property
    def exact(self) -> bool:
        return self.injective and self.surjective

    def lines(self) -> List[str]:
        out = [f"parameter carrier size: {self.parameter_count}",
               f"models extending the fixed pure part: {self.model_count}",
               f"bijection: {'yes' if self.exact else 'no'}"]
        for (alpha, idx) in self.bijection:
            out.append(f"  {alpha!r} <-> model {idx}")
        return out


def exactness_check(d: DecoratedSpecification, m_0: FiniteModel,
                    base_carriers: Dict[TypeName, Sequence],
                    cap: int = DEFAULT_CANDIDATE_CAP) -> ExactnessReport:
    """Build the record model, pass every argument through it, and verify
    the arguments are in bijection with the models extending m_0."""
    par = parameterize(d)
    m_a, extensions = terminal_model(d, m_0, base_carriers, par=par, cap=cap)
    keys = [e.canonical() for e in extensions]
    index = {k: i for i, k in enumerate(keys)}
    a_type = par.spec.parameter_type
    bijection: List[Tuple[object, int]] = []
    hit = set()
    injective = True
    for alpha in m_a.carriers[a_type]:
        m = pass_parameter(d, par, m_a, alpha)
        k = m.canonical()
        idx = index.get(k, -1)
        if idx in hit:
            injective = False
        hit.add(idx)
        bijection.append((alpha, idx))
    surjective = (-1 not in hit) and len(hit) == len(extensions)
    return ExactnessReport(len(m_a.carriers[a_type]), len(extensions),
                           bijection, injective, surjective)
