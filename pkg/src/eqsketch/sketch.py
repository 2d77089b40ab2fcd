"""Generic limit sketches, finite set-valued realizations, and the fixed
sketch whose realizations are exactly the equational specifications.

A sketch is a graph with potential features: identities, composites,
limit cones, tuples, monomorphism marks and arrow equalities.  A finite
realization assigns a finite set to each point and a function to each
arrow; ``check_realization`` decides whether the potential features are
sent to real ones.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .core import Specification, fresh_name
from .errors import InvalidRealization, UnassignedArrow, UnassignedPoint

Point = str
ArrowName = str
Path = Tuple[ArrowName, ...]  # arrows applied left to right


@dataclass(frozen=True)
class Arrow:
    name: ArrowName
    src: Point
    tgt: Point


@dataclass(frozen=True)
class Cone:
    """A potential limit cone over a finite base diagram.

    ``base_points`` maps node ids to sketch points; ``base_arrows`` are
    labelled edges between nodes; ``projections`` maps some nodes to the
    projection arrows out of the vertex.  Nodes without a projection must
    be reachable from projected ones through base arrows, so that the
    comparison with the computed limit is determined.
    """
    name: str
    vertex: Point
    base_points: Tuple[Tuple[str, Point], ...]
    base_arrows: Tuple[Tuple[str, str, ArrowName], ...] = ()
    projections: Tuple[Tuple[str, ArrowName], ...] = ()


@dataclass(frozen=True)
class PotentialTuple:
    """An arrow marked as the mediating map into a cone's vertex."""
    cone: str
    components: Tuple[Tuple[str, ArrowName], ...]  # node id -> component arrow
    result: ArrowName


@dataclass
class LimitSketch:
    points: Set[Point] = field(default_factory=set)
    arrows: Dict[ArrowName, Arrow] = field(default_factory=dict)
    potential_identities: Dict[Point, ArrowName] = field(default_factory=dict)
    potential_compositions: Dict[Tuple[ArrowName, ArrowName], ArrowName] = field(
        default_factory=dict)
    potential_cones: Dict[str, Cone] = field(default_factory=dict)
    potential_tuples: List[PotentialTuple] = field(default_factory=list)
    mono_marks: Set[ArrowName] = field(default_factory=set)
    arrow_equalities: List[Tuple[Path, Path]] = field(default_factory=list)

    def add_point(self, p: Point) -> None:
        self.points.add(p)

    def add_arrow(self, name: ArrowName, src: Point, tgt: Point) -> None:
        self.arrows[name] = Arrow(name, src, tgt)


def _path_endpoints(sk: LimitSketch, path: Path) -> Optional[Tuple[Point, Point]]:
    if not path:
        return None
    cur = None
    start = None
    for a in path:
        ar = sk.arrows.get(a)
        if ar is None:
            return None
        if start is None:
            start = ar.src
            cur = ar.tgt
        else:
            if ar.src != cur:
                return None
            cur = ar.tgt
    return (start, cur)


def validate_sketch(sk: LimitSketch) -> List[str]:
    out: List[str] = []
    for a in sk.arrows.values():
        if a.src not in sk.points or a.tgt not in sk.points:
            out.append(f"arrow {a.name}: endpoint not a point")
    for p, a in sk.potential_identities.items():
        ar = sk.arrows.get(a)
        if ar is None or ar.src != p or ar.tgt != p:
            out.append(f"potential identity at {p}: {a} is not {p} -> {p}")
    for (a1, a2), a3 in sk.potential_compositions.items():
        x, y, z = sk.arrows.get(a1), sk.arrows.get(a2), sk.arrows.get(a3)
        if x is None or y is None or z is None:
            out.append(f"potential composition ({a1},{a2}): unknown arrow")
            continue
        if x.tgt != y.src:
            out.append(f"potential composition ({a1},{a2}): not consecutive")
        if z.src != x.src or z.tgt != y.tgt:
            out.append(f"potential composite {a3} of ({a1},{a2}): wrong endpoints")
    seen_vertices: Set[Point] = set()
    for c in sk.potential_cones.values():
        if c.vertex in seen_vertices:
            out.append(f"cone {c.name}: duplicate potential cone at vertex {c.vertex}")
        seen_vertices.add(c.vertex)
        nodes = dict(c.base_points)
        for n, p in nodes.items():
            if p not in sk.points:
                out.append(f"cone {c.name}: node {n} at unknown point {p}")
        for (n1, n2, a) in c.base_arrows:
            ar = sk.arrows.get(a)
            if n1 not in nodes or n2 not in nodes or ar is None:
                out.append(f"cone {c.name}: bad base arrow {a}")
            elif ar.src != nodes[n1] or ar.tgt != nodes[n2]:
                out.append(f"cone {c.name}: base arrow {a} endpoints mismatch")
        projected = set()
        for (n, a) in c.projections:
            projected.add(n)
            ar = sk.arrows.get(a)
            if n not in nodes or ar is None:
                out.append(f"cone {c.name}: bad projection {a}")
            elif ar.src != c.vertex or ar.tgt != nodes[n]:
                out.append(f"cone {c.name}: projection {a} is not {c.vertex} -> {nodes[n]}")
        # every unprojected node must be reachable from a projected one
        reach = set(projected)
        changed = True
        while changed:
            changed = False
            for (n1, n2, _a) in c.base_arrows:
                if n1 in reach and n2 not in reach:
                    reach.add(n2)
                    changed = True
        for n in nodes:
            if n not in reach:
                out.append(f"cone {c.name}: node {n} not determined by projections")
    for pt in sk.potential_tuples:
        c = sk.potential_cones.get(pt.cone)
        if c is None:
            out.append(f"potential tuple into unknown cone {pt.cone}")
            continue
        res = sk.arrows.get(pt.result)
        if res is None or res.tgt != c.vertex:
            out.append(f"potential tuple {pt.result}: must end at {c.vertex}")
        nodes = dict(c.base_points)
        for (n, a) in pt.components:
            ar = sk.arrows.get(a)
            if n not in nodes or ar is None or (res is not None and ar.src != res.src) \
                    or (ar is not None and ar.tgt != nodes.get(n)):
                out.append(f"potential tuple {pt.result}: bad component {a}")
    for a in sk.mono_marks:
        if a not in sk.arrows:
            out.append(f"mono mark on unknown arrow {a}")
    for (p1, p2) in sk.arrow_equalities:
        e1, e2 = _path_endpoints(sk, p1), _path_endpoints(sk, p2)
        if e1 is None or e2 is None or e1 != e2:
            out.append(f"arrow equality {p1} = {p2}: paths not parallel")
    return out


@dataclass
class FiniteRealization:
    point_sets: Dict[Point, Tuple] = field(default_factory=dict)
    functions: Dict[ArrowName, Dict] = field(default_factory=dict)

    def elements(self, p: Point) -> Tuple:
        return self.point_sets[p]

    def apply(self, arrow: ArrowName, x):
        return self.functions[arrow][x]

    def apply_path(self, path: Path, x):
        for a in path:
            x = self.functions[a][x]
        return x


def check_realization(sk: LimitSketch, r: FiniteRealization) -> List[str]:
    """Decide whether r sends every potential feature to a real one."""
    for p in sk.points:
        if p not in r.point_sets:
            raise UnassignedPoint(p)
    for a in sk.arrows:
        if a not in r.functions:
            raise UnassignedArrow(a)
    out: List[str] = []
    for a in sk.arrows.values():
        fn = r.functions[a.name]
        src = r.point_sets[a.src]
        tgt = set(r.point_sets[a.tgt])
        for x in src:
            if x not in fn:
                out.append(f"arrow {a.name}: no value at {x!r}")
            elif fn[x] not in tgt:
                out.append(f"arrow {a.name}: value at {x!r} outside target set")
    if out:
        return out
    for p, a in sk.potential_identities.items():
        for x in r.point_sets[p]:
            if r.apply(a, x) != x:
                out.append(f"potential identity {a}: not the identity at {x!r}")
    for (a1, a2), a3 in sk.potential_compositions.items():
        for x in r.point_sets[sk.arrows[a1].src]:
            if r.apply(a3, x) != r.apply(a2, r.apply(a1, x)):
                out.append(f"potential composition ({a1},{a2}) != {a3} at {x!r}")
    for a in sorted(sk.mono_marks):
        fn = r.functions[a]
        seen: Dict[object, object] = {}
        for x in r.point_sets[sk.arrows[a].src]:
            y = fn[x]
            if y in seen:
                out.append(f"mono {a}: {seen[y]!r} and {x!r} collide")
            else:
                seen[y] = x
    for (p1, p2) in sk.arrow_equalities:
        start = _path_endpoints(sk, p1)[0]
        for x in r.point_sets[start]:
            if r.apply_path(p1, x) != r.apply_path(p2, x):
                out.append(f"arrow equality {p1} = {p2} fails at {x!r}")
    for c in sorted(sk.potential_cones.values(), key=lambda c: c.name):
        out.extend(_check_cone(sk, r, c))
    for pt in sk.potential_tuples:
        out.extend(_check_tuple(sk, r, pt))
    return out


def _limit_assignments(r: FiniteRealization, c: Cone) -> List[Dict[str, object]]:
    nodes = sorted(dict(c.base_points))
    points = dict(c.base_points)
    sets = [r.point_sets[points[n]] for n in nodes]
    result = []
    for combo in itertools.product(*sets):
        nu = dict(zip(nodes, combo))
        if all(r.apply(a, nu[n1]) == nu[n2] for (n1, n2, a) in c.base_arrows):
            result.append(nu)
    return result


def _check_cone(sk: LimitSketch, r: FiniteRealization, c: Cone) -> List[str]:
    out: List[str] = []
    limit = _limit_assignments(r, c)
    limit_keys = {tuple(sorted(nu.items())) for nu in limit}
    nodes = dict(c.base_points)
    seen: Set[Tuple] = set()
    for v in r.point_sets[c.vertex]:
        nu: Dict[str, object] = {}
        for (n, a) in c.projections:
            nu[n] = r.apply(a, v)
        # propagate to unprojected nodes along base arrows
        changed = True
        while changed:
            changed = False
            for (n1, n2, a) in c.base_arrows:
                if n1 in nu:
                    val = r.apply(a, nu[n1])
                    if n2 not in nu:
                        nu[n2] = val
                        changed = True
                    elif nu[n2] != val:
                        out.append(f"cone {c.name}: inconsistent components at {v!r}")
                        return out
        if set(nu) != set(nodes):
            out.append(f"cone {c.name}: projections do not determine all components")
            return out
        key = tuple(sorted(nu.items()))
        if key not in limit_keys:
            out.append(f"cone {c.name}: vertex element {v!r} maps outside the limit")
        elif key in seen:
            out.append(f"cone {c.name}: vertex element {v!r} duplicates a limit element")
        seen.add(key)
    missing = limit_keys - seen
    if missing:
        out.append(f"cone {c.name}: {len(missing)} limit element(s) not reached")
    return out


def _check_tuple(sk: LimitSketch, r: FiniteRealization, pt: PotentialTuple) -> List[str]:
    out: List[str] = []
    c = sk.potential_cones[pt.cone]
    projections = dict(c.projections)
    src = sk.arrows[pt.result].src
    for x in r.point_sets[src]:
        v = r.apply(pt.result, x)
        for (n, a) in pt.components:
            if n in projections and r.apply(projections[n], v) != r.apply(a, x):
                out.append(f"potential tuple {pt.result}: not mediating at {x!r}")
                break
    return out


@dataclass
class SketchMorphism:
    source: LimitSketch
    target: LimitSketch
    point_map: Dict[Point, Point]
    arrow_map: Dict[ArrowName, ArrowName]


def validate_sketch_morphism(m: SketchMorphism) -> List[str]:
    out: List[str] = []
    sk, tk = m.source, m.target
    for p in sk.points:
        if m.point_map.get(p) not in tk.points:
            out.append(f"point {p} not mapped")
    for a in sk.arrows.values():
        img = tk.arrows.get(m.arrow_map.get(a.name, ""))
        if img is None:
            out.append(f"arrow {a.name} not mapped")
        elif img.src != m.point_map.get(a.src) or img.tgt != m.point_map.get(a.tgt):
            out.append(f"arrow {a.name}: image endpoints mismatch")
    if out:
        return out
    for p, a in sk.potential_identities.items():
        if tk.potential_identities.get(m.point_map[p]) != m.arrow_map[a]:
            out.append(f"potential identity at {p} not preserved")
    for (a1, a2), a3 in sk.potential_compositions.items():
        if tk.potential_compositions.get((m.arrow_map[a1], m.arrow_map[a2])) != m.arrow_map[a3]:
            out.append(f"potential composition ({a1},{a2}) not preserved")
    for a in sk.mono_marks:
        if m.arrow_map[a] not in tk.mono_marks:
            out.append(f"mono mark on {a} not preserved")
    # cones must map onto cones with matching shape
    tcones = {c.vertex: c for c in tk.potential_cones.values()}
    for c in sk.potential_cones.values():
        tc = tcones.get(m.point_map[c.vertex])
        if tc is None:
            out.append(f"cone {c.name}: vertex image has no potential cone")
    return out


# ---------------------------------------------------------------------------
# The fixed sketch for equational specifications
# ---------------------------------------------------------------------------

UNIT_ELEM = "*"

_POINTS = ("Type", "Term", "Cons", "Comp", "Selid", "2-Prod", "2-Cone",
           "Type^2", "2-Tuple", "Unit", "0-Prod", "0-Tuple")


def equational_sketch() -> LimitSketch:
    """The sketch whose finite set-valued realizations are the equational
    specifications (without their explicit equation sets, which have no
    counterpart in this fragment)."""
    sk = LimitSketch()
    for p in _POINTS:
        sk.add_point(p)
    arrows = [
        ("dom", "Term", "Type"), ("codom", "Term", "Type"),
        ("fst", "Cons", "Term"), ("snd", "Cons", "Term"),
        ("i", "Comp", "Cons"), ("comp", "Comp", "Term"),
        ("i0", "Selid", "Type"), ("selid", "Selid", "Term"),
        ("j", "2-Prod", "Type^2"), ("2-prod", "2-Prod", "2-Cone"),
        ("k", "2-Tuple", "2-Cone"), ("2-base'", "2-Tuple", "2-Prod"),
        ("2-tuple", "2-Tuple", "Term"),
        ("j0", "0-Prod", "Unit"), ("0-prod", "0-Prod", "Type"),
        ("k0", "0-Tuple", "Type"), ("0-base'", "0-Tuple", "0-Prod"),
        ("0-tuple", "0-Tuple", "Term"),
        ("b1", "Type^2", "Type"), ("b2", "Type^2", "Type"),
        ("c1", "2-Cone", "Term"), ("c2", "2-Cone", "Term"),
        ("2-base", "2-Cone", "Type^2"),
        ("0-base", "Type", "Unit"),
        ("id", "Type", "Type"),
    ]
    for (n, s, t) in arrows:
        sk.add_arrow(n, s, t)
    sk.potential_identities["Type"] = "id"
    sk.potential_cones["Cons"] = Cone(
        name="Cons", vertex="Cons",
        base_points=(("l", "Term"), ("m", "Type"), ("r", "Term")),
        base_arrows=(("l", "m", "codom"), ("r", "m", "dom")),
        projections=(("l", "fst"), ("r", "snd")))
    sk.potential_cones["Type^2"] = Cone(
        name="Type^2", vertex="Type^2",
        base_points=(("l", "Type"), ("r", "Type")),
        projections=(("l", "b1"), ("r", "b2")))
    sk.potential_cones["2-Cone"] = Cone(
        name="2-Cone", vertex="2-Cone",
        base_points=(("l", "Term"), ("m", "Type"), ("r", "Term")),
        base_arrows=(("l", "m", "dom"), ("r", "m", "dom")),
        projections=(("l", "c1"), ("r", "c2")))
    sk.potential_cones["Unit"] = Cone(name="Unit", vertex="Unit", base_points=())
    sk.mono_marks = {"i", "i0", "j", "j0", "k", "k0"}
    sk.arrow_equalities = [
        # an identity term goes from its type to itself
        (("selid", "dom"), ("i0",)),
        (("selid", "codom"), ("i0",)),
        # a composite term runs from the dom of the first to the cod of the second
        (("comp", "dom"), ("i", "fst", "dom")),
        (("comp", "codom"), ("i", "snd", "codom")),
        # the base of a co-initial pair is the pair of codomains
        (("2-base", "b1"), ("c1", "codom")),
        (("2-base", "b2"), ("c2", "codom")),
        # the projection cone of a product sits over the product's pair
        (("2-prod", "2-base"), ("j",)),
        # a tuple's cone sits over the pair of the marked product
        (("k", "2-base"), ("2-base'", "j")),
        # a tuple term runs from the cone's dom to the product type
        (("2-tuple", "dom"), ("k", "c1", "dom")),
        (("2-tuple", "codom"), ("2-base'", "2-prod", "c1", "dom")),
        # a collapsing term runs from its type to the terminal type
        (("0-tuple", "dom"), ("k0",)),
        (("0-tuple", "codom"), ("0-base'", "0-prod")),
    ]
    return sk


def spec_to_realization(s: Specification) -> FiniteRealization:
    """Encode a valid specification as a realization of ``equational_sketch``.

    Explicit equations have no counterpart in the sketch fragment and are
    not encoded; see ``realization_to_spec``.
    """
    r = FiniteRealization()
    types = tuple(sorted(s.types))
    terms = tuple(sorted(s.terms))
    cons = tuple(sorted((f, g) for f in terms for g in terms
                        if s.terms[f].cod == s.terms[g].dom))
    cone2 = tuple(sorted((f, g) for f in terms for g in terms
                         if s.terms[f].dom == s.terms[g].dom))
    type2 = tuple(sorted((x, y) for x in types for y in types))
    r.point_sets = {
        "Type": types,
        "Term": terms,
        "Cons": cons,
        "Comp": tuple(sorted(s.compositions)),
        "Selid": tuple(sorted(s.identities)),
        "2-Prod": tuple(sorted(s.products)),
        "2-Cone": cone2,
        "Type^2": type2,
        "2-Tuple": tuple(sorted(s.tuples)),
        "Unit": (UNIT_ELEM,),
        "0-Prod": (UNIT_ELEM,) if s.terminal is not None else (),
        "0-Tuple": tuple(sorted(s.collapsings)),
    }
    r.functions = {
        "dom": {t: s.terms[t].dom for t in terms},
        "codom": {t: s.terms[t].cod for t in terms},
        "fst": {p: p[0] for p in cons},
        "snd": {p: p[1] for p in cons},
        "i": {p: p for p in s.compositions},
        "comp": dict(s.compositions),
        "i0": {x: x for x in s.identities},
        "selid": dict(s.identities),
        "j": {p: p for p in s.products},
        "2-prod": {p: (v[1], v[2]) for p, v in s.products.items()},
        "k": {p: p for p in s.tuples},
        "2-base'": {(f, g): (s.terms[f].cod, s.terms[g].cod) for (f, g) in s.tuples},
        "2-tuple": dict(s.tuples),
        "j0": {UNIT_ELEM: UNIT_ELEM} if s.terminal is not None else {},
        "0-prod": {UNIT_ELEM: s.terminal} if s.terminal is not None else {},
        "k0": {x: x for x in s.collapsings},
        "0-base'": {x: UNIT_ELEM for x in s.collapsings},
        "0-tuple": dict(s.collapsings),
        "b1": {p: p[0] for p in type2},
        "b2": {p: p[1] for p in type2},
        "c1": {p: p[0] for p in cone2},
        "c2": {p: p[1] for p in cone2},
        "2-base": {(f, g): (s.terms[f].cod, s.terms[g].cod) for (f, g) in cone2},
        "0-base": {x: UNIT_ELEM for x in types},
        "id": {x: x for x in types},
    }
    return r


def realization_to_spec(r: FiniteRealization) -> Specification:
    """Decode a valid realization of ``equational_sketch`` back to a
    specification.  Elements are named by their string form, with
    deterministic disambiguation."""
    sk = equational_sketch()
    violations = check_realization(sk, r)
    if violations:
        raise InvalidRealization("; ".join(violations[:5]))
    tname: Dict[object, str] = {}
    taken: Set[str] = set()
    for e in r.point_sets["Type"]:
        n = fresh_name(str(e), taken)
        taken.add(n)
        tname[e] = n
    mname: Dict[object, str] = {}
    mtaken: Set[str] = set()
    for e in r.point_sets["Term"]:
        n = fresh_name(str(e), mtaken)
        mtaken.add(n)
        mname[e] = n
    s = Specification()
    for e in r.point_sets["Type"]:
        s.add_type(tname[e])
    for e in r.point_sets["Term"]:
        s.add_term(mname[e], tname[r.apply("dom", e)], tname[r.apply("codom", e)])
    for e in r.point_sets["Selid"]:
        s.identities[tname[r.apply("i0", e)]] = mname[r.apply("selid", e)]
    for e in r.point_sets["Comp"]:
        pair = r.apply("i", e)
        key = (mname[r.apply("fst", pair)], mname[r.apply("snd", pair)])
        s.compositions[key] = mname[r.apply("comp", e)]
    for e in r.point_sets["2-Prod"]:
        pair = r.apply("j", e)
        y1, y2 = tname[r.apply("b1", pair)], tname[r.apply("b2", pair)]
        cone = r.apply("2-prod", e)
        p1, p2 = r.apply("c1", cone), r.apply("c2", cone)
        s.products[(y1, y2)] = (tname[r.apply("dom", p1)], mname[p1], mname[p2])
    for e in r.point_sets["2-Tuple"]:
        cone = r.apply("k", e)
        key = (mname[r.apply("c1", cone)], mname[r.apply("c2", cone)])
        s.tuples[key] = mname[r.apply("2-tuple", e)]
    for e in r.point_sets["0-Prod"]:
        s.terminal = tname[r.apply("0-prod", e)]
    for e in r.point_sets["0-Tuple"]:
        s.collapsings[tname[r.apply("k0", e)]] = mname[r.apply("0-tuple", e)]
    return s
