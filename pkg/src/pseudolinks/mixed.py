"""Planar mixed representations of annular and toroidal pseudo links.

An annular diagram becomes an O-mixed diagram: a planar diagram with a fixed
unknot O that the moving part threads through.  A toroidal diagram becomes an
H-mixed diagram whose fixed part is a Hopf link m ∪ l in closed braid form.
Each unit of winding tag on an edge turns into one threading: two mixed
crossings where the moving strand passes over and then under the fixed
component (or under then over for negative tags).

Mixed brackets resolve only moving crossings.  Linking data with the fixed
components is read off the mixed crossings: each crossing where the moving
strand passes under a fixed component contributes its crossing sign to the
winding about that component.  Contracting the fixed part this way gives an
annular (or toroidal) diagram whose state sum is the mixed bracket.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import bracket as B
from .diagram import (CLASSICAL, Crossing, Diagram, DiagramError, DocumentError, Edge, FreeLoop,
                      Surface, Violation, components, crossing_sign, from_document, make_diagram,
                      to_document, validate)
from .poly import Poly
from .moves import Frozen
from .surgery import reconnect

O_KIND, H_KIND = "O", "H"


@dataclass(frozen=True)
class MixedDiagram:
    base: Diagram
    kind: str
    fixed_components: tuple[int, ...]
    mixed_crossing_ids: tuple[int, ...]
    marks: dict = field(default_factory=dict, hash=False, compare=True)


class _Builder:
    """Accumulates crossings and edges for a planar diagram."""

    def __init__(self, c0: int, e0: int) -> None:
        self.crossings: list[Crossing] = []
        self.edges: list[Edge] = []
        self.loops: list[FreeLoop] = []
        self.next_c, self.next_e = c0, e0

    def crossing(self, over: int) -> int:
        cid = self.next_c
        self.next_c += 1
        self.crossings.append(Crossing(cid, CLASSICAL, over))
        return cid

    def edge(self, tail, head, eid: int | None = None) -> int:
        if eid is None:
            eid = self.next_e
            self.next_e += 1
        self.edges.append(Edge(eid, tail, head, ()))
        return eid


def _lay_moving(d: Diagram, b: _Builder, comps: tuple[int, ...]):
    """Copy the moving part of ``d`` with its tags realized as threadings.

    Returns, per fixed component, the lists of side-one and side-two mixed
    crossings.
    """
    sides = {j: ([], []) for j in comps}
    b.crossings.extend(d.crossings)

    def thread(t, start, end):
        prev = start
        chain = []
        for j in comps:
            w = t[j]
            for _ in range(abs(w)):
                m1 = b.crossing(0 if w > 0 else 1)
                m2 = b.crossing(1 if w > 0 else 0)
                sides[j][0].append(m1)
                sides[j][1].append(m2)
                chain += [(m1, 2), (m1, 0), (m2, 2), (m2, 0)]
        points = [prev] + chain + [end]
        return points

    for e in d.edges:
        pts = thread(e.tags, e.tail, e.head)
        for k in range(0, len(pts), 2):
            b.edge(pts[k], pts[k + 1], e.id if k == 0 else None)
    for f in d.free_loops:
        if not any(f.tags[j] for j in comps):
            b.loops.append(FreeLoop(()))
            continue
        pts = thread(f.tags, None, None)[1:-1]
        pts = pts[-1:] + pts[:-1]
        for k in range(0, len(pts), 2):
            b.edge(pts[k], pts[k + 1])
    return sides


def _lay_fixed_loop(b: _Builder, stations: list[tuple[int, int, int]]) -> list[int]:
    """Close a fixed component through ``stations`` = (crossing, in slot, out slot)."""
    ids = []
    for i, (c, _, out) in enumerate(stations):
        nc, nin, _ = stations[(i + 1) % len(stations)]
        ids.append(b.edge((c, out), (nc, nin)))
    return ids


def _stations(side1: list[int], side2: list[int]) -> list[tuple[int, int, int]]:
    return [(c, 3, 1) for c in side1] + [(c, 1, 3) for c in reversed(side2)]


def _component_of(d: Diagram, edge_ids: set[int]) -> int:
    for i, comp in enumerate(components(d)):
        if set(comp.edges) & edge_ids:
            return i
    raise DiagramError("fixed component not found")


def annular_to_o_mixed(d: Diagram) -> MixedDiagram:
    if d.surface != Surface.ANNULUS:
        raise DiagramError("O-mixed conversion needs an annular diagram")
    c0 = max((c.id for c in d.crossings), default=-1) + 1
    e0 = max((e.id for e in d.edges), default=-1) + 1
    b = _Builder(c0, e0)
    sides = _lay_moving(d, b, (0,))
    side1, side2 = sides[0]
    mixed = tuple(side1 + side2)
    if mixed:
        o_edges = set(_lay_fixed_loop(b, _stations(side1, side2)))
        base = make_diagram(Surface.PLANE, b.crossings, b.edges, b.loops)
        fixed = _component_of(base, o_edges)
    else:
        b.loops.append(FreeLoop(()))
        base = make_diagram(Surface.PLANE, b.crossings, b.edges, b.loops)
        fixed = len(components(base)) - 1
    return MixedDiagram(base, O_KIND, (fixed,), tuple(sorted(mixed)), {})


def toroidal_to_h_mixed(d: Diagram) -> MixedDiagram:
    if d.surface != Surface.TORUS:
        raise DiagramError("H-mixed conversion needs a toroidal diagram")
    c0 = max((c.id for c in d.crossings), default=-1) + 1
    e0 = max((e.id for e in d.edges), default=-1) + 1
    b = _Builder(c0, e0)
    sides = _lay_moving(d, b, (0, 1))
    # Hopf link in closed braid form: m over at the first crossing, l over at the second
    h1, h2 = b.crossing(0), b.crossing(1)
    m1, m2 = sides[0]
    l1, l2 = sides[1]
    m_edges = _lay_fixed_loop(b, [(h1, 2, 0)] + _stations(m1, [])
                              + [(h2, 2, 0)] + _stations([], m2))
    l_edges = _lay_fixed_loop(b, [(h1, 3, 1)] + _stations(l1, [])
                              + [(h2, 1, 3)] + _stations([], l2))
    base = make_diagram(Surface.PLANE, b.crossings, b.edges, b.loops)
    m = _component_of(base, set(m_edges))
    l_ = _component_of(base, set(l_edges))
    mixed = tuple(sorted(m1 + m2 + l1 + l2))
    return MixedDiagram(base, H_KIND, (m, l_), mixed, {"m": m, "l": l_})


def _fixed_edges(m: MixedDiagram) -> dict[int, int]:
    """Edge id -> index of its fixed component within ``m.fixed_components``."""
    comps = components(m.base)
    out = {}
    for j, ci in enumerate(m.fixed_components):
        for eid in comps[ci].edges:
            out[eid] = j
    return out


def _crossing_roles(m: MixedDiagram) -> dict[int, tuple[str, int | None, int | None]]:
    """Crossing id -> (role, fixed index, moving slot) with role in
    moving | mixed | fixed."""
    fixed = _fixed_edges(m)
    d = m.base
    roles = {}
    for c in d.crossings:
        owner = [fixed.get(d.end_at((c.id, s))[0]) for s in range(4)]
        a, b_ = owner[0], owner[1]
        if a is None and b_ is None:
            roles[c.id] = ("moving", None, None)
        elif a is not None and b_ is not None:
            roles[c.id] = ("fixed", None, None)
        else:
            roles[c.id] = ("mixed", a if a is not None else b_, 1 if a is not None else 0)
    return roles


def frozen_part(m: MixedDiagram) -> Frozen:
    """Fixed edges, fixed free loops and every crossing on a fixed component,
    in the form random walks accept."""
    comps = components(m.base)
    edges = set(_fixed_edges(m))
    edges |= {("loop", comps[ci].free_loop) for ci in m.fixed_components
              if comps[ci].free_loop is not None}
    roles = _crossing_roles(m)
    return Frozen(frozenset(c for c, r in roles.items() if r[0] != "moving"), frozenset(edges))


def validate_mixed(m: MixedDiagram) -> list[Violation]:
    out = list(validate(m.base))
    if out:
        return out
    if m.base.surface != Surface.PLANE:
        out.append(Violation("mixed-surface", (), "mixed diagrams are planar"))
    want = {O_KIND: 1, H_KIND: 2}.get(m.kind)
    n = len(components(m.base))
    if want is None:
        return out + [Violation("mixed-kind", (), f"unknown kind {m.kind!r}")]
    if len(m.fixed_components) != want or len(set(m.fixed_components)) != want \
            or any(not 0 <= c < n for c in m.fixed_components):
        return out + [Violation("mixed-fixed", tuple(m.fixed_components),
                                f"kind {m.kind} needs {want} distinct fixed components")]
    roles = _crossing_roles(m)
    for cid, (role, _, _) in roles.items():
        if role != "moving" and m.base.crossing(cid).is_pre:
            out.append(Violation("mixed-precrossing", (cid,), "precrossing on a fixed component"))
    mixed = tuple(sorted(c for c, r in roles.items() if r[0] == "mixed"))
    if mixed != tuple(sorted(m.mixed_crossing_ids)):
        out.append(Violation("mixed-crossings", mixed, "mixed crossing ids do not match the diagram"))
    fixed_x = [c for c, r in roles.items() if r[0] == "fixed"]
    if m.kind == O_KIND and fixed_x:
        out.append(Violation("mixed-fixed-crossing", tuple(fixed_x), "O must be crossing-free"))
    if m.kind == H_KIND:
        if m.marks.get("m") not in m.fixed_components or m.marks.get("l") not in m.fixed_components \
                or m.marks.get("m") == m.marks.get("l"):
            out.append(Violation("mixed-marks", (), "H needs distinct marks m and l"))
        fixed = _fixed_edges(m)
        self_x = [c for c in fixed_x
                  if fixed[m.base.end_at((c, 0))[0]] == fixed[m.base.end_at((c, 1))[0]]]
        if len(fixed_x) != 2 or self_x:
            out.append(Violation("mixed-hopf", tuple(fixed_x),
                                 "fixed part must be a two-crossing closed braid Hopf link"))
    return out


def moving_diagram(m: MixedDiagram) -> Diagram:
    """Contract the fixed part into winding tags on the moving part."""
    bad = validate_mixed(m)
    if bad:
        raise DiagramError("; ".join(v.message for v in bad))
    d = m.base
    arity = 1 if m.kind == O_KIND else 2
    order = list(m.fixed_components)
    if m.kind == H_KIND:
        order = [m.marks["m"], m.marks["l"]]
    index = {ci: j for j, ci in enumerate(order)}
    comps = components(d)
    fixed_edges = {eid: index[ci] for ci in order for eid in comps[ci].edges}
    fixed_loops = set()
    for ci in order:
        if comps[ci].free_loop is not None:
            fixed_loops.add(comps[ci].free_loop)
    roles = _crossing_roles(m)
    tags = {e.id: [0] * arity for e in d.edges if e.id not in fixed_edges}
    for cid, (role, _, ms) in roles.items():
        if role != "mixed":
            continue
        c = d.crossing(cid)
        if c.over == ms:
            continue  # moving strand is over
        s = ms if d.end_at((cid, ms))[1] == "head" else ms + 2
        f_edge = d.end_at((cid, 1 - ms))[0]
        tags[d.end_at((cid, s))[0]][fixed_edges[f_edge]] += crossing_sign(d, cid)
    surface = Surface.ANNULUS if m.kind == O_KIND else Surface.TORUS
    zero = (0,) * arity
    edges = [Edge(e.id, e.tail, e.head, tuple(tags[e.id]) if e.id in tags else zero) for e in d.edges]
    loops = [FreeLoop(zero) for i, _ in enumerate(d.free_loops) if i not in fixed_loops]
    lifted = make_diagram(surface, d.crossings, edges, loops)
    joins = {cid: ((0, 2), (1, 3)) for cid, r in roles.items() if r[0] != "moving"}
    out, _ = reconnect(lifted, joins, drop=frozenset(fixed_edges))
    return out


def o_mixed_bracket(m: MixedDiagram, universal: bool = False, threads: int = 1) -> Poly:
    if m.kind != O_KIND:
        raise DiagramError("O-mixed bracket needs an O-mixed diagram")
    variant = B.Variant.ANNULAR_UNIVERSAL if universal else B.Variant.ANNULAR
    return B.bracket(moving_diagram(m), variant, threads=threads)


_H_VARIANTS = {"plain": B.Variant.TOROIDAL, "universal": B.Variant.TOROIDAL_UNIVERSAL,
               "reduced": B.Variant.TOROIDAL_REDUCED}


def h_mixed_bracket(m: MixedDiagram, variant: str = "plain", threads: int = 1) -> Poly:
    if m.kind != H_KIND:
        raise DiagramError("H-mixed bracket needs an H-mixed diagram")
    if variant not in _H_VARIANTS:
        raise ValueError(f"unknown H-mixed variant {variant!r}")
    return B.bracket(moving_diagram(m), _H_VARIANTS[variant], threads=threads)


def mixed_writhe(m: MixedDiagram) -> int:
    roles = _crossing_roles(m)
    return sum(crossing_sign(m.base, cid) for cid, (role, _, _) in roles.items()
               if role == "moving" and not m.base.crossing(cid).is_pre)


def mixed_normalized_bracket(m: MixedDiagram, variant: str = "plain") -> Poly:
    if m.kind == O_KIND:
        p = o_mixed_bracket(m, universal=variant == "universal")
    else:
        p = h_mixed_bracket(m, variant)
    return B.normalize(p, mixed_writhe(m))


def mixed_to_document(m: MixedDiagram) -> dict:
    doc = to_document(m.base)
    doc["kind"] = m.kind
    doc["fixed_components"] = list(m.fixed_components)
    doc["marks"] = dict(m.marks)
    return doc


def mixed_from_document(doc: dict) -> MixedDiagram:
    if not isinstance(doc, dict):
        raise DocumentError("schema", "mixed document must be an object")
    for key in ("kind", "fixed_components"):
        if key not in doc:
            raise DocumentError("schema", f"missing field {key!r}")
    base = from_document({k: doc[k] for k in ("surface", "crossings", "edges", "free_loops") if k in doc})
    fixed = doc["fixed_components"]
    marks = doc.get("marks", {})
    if not isinstance(fixed, list) or not all(isinstance(x, int) for x in fixed):
        raise DocumentError("schema", "fixed_components must be a list of integers")
    if not isinstance(marks, dict):
        raise DocumentError("schema", "marks must be an object")
    m = MixedDiagram(base, doc["kind"], tuple(fixed), (), dict(marks))
    try:
        roles = _crossing_roles(m)
    except (IndexError, KeyError) as exc:
        raise DocumentError("schema", f"bad fixed component: {exc}") from None
    mixed = tuple(sorted(c for c, r in roles.items() if r[0] == "mixed"))
    return MixedDiagram(base, m.kind, m.fixed_components, mixed, m.marks)
