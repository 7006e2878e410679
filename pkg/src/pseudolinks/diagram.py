"""Pseudo link diagrams on the plane, annulus and torus.

A diagram is a 4-valent combinatorial map.  Each crossing has four slots
numbered 0..3 counterclockwise; one strand passes straight through slots
(0, 2), the other through (1, 3).  Edges are directed from a tail slot to a
head slot and carry integer winding tags (0, 1 or 2 per edge depending on the
surface) that count signed intersections with fixed cut curves.  Closed
curves without crossings are stored separately as free loops.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable

Point = tuple  # (crossing id, slot)


class Surface(str, Enum):
    PLANE = "plane"
    ANNULUS = "annulus"
    TORUS = "torus"

    @property
    def arity(self) -> int:
        return {"plane": 0, "annulus": 1, "torus": 2}[self.value]


CLASSICAL = "classical"
PRE = "pre"


class DocumentError(ValueError):
    """A diagram document could not be parsed (``kind`` is 'syntax' or 'schema')."""

    def __init__(self, kind: str, message: str) -> None:
        super().__init__(f"{kind} error: {message}")
        self.kind = kind


class DiagramError(ValueError):
    """An operation was asked for something the diagram does not contain."""


@dataclass(frozen=True)
class Crossing:
    """``over`` is the parity of the slots carrying the over strand (0 for
    slots 0/2, 1 for slots 1/3); precrossings have none."""

    id: int
    kind: str
    over: int | None = None

    @property
    def is_pre(self) -> bool:
        return self.kind == PRE


@dataclass(frozen=True)
class Edge:
    id: int
    tail: Point
    head: Point
    tags: tuple[int, ...] = ()

    def reversed(self) -> Edge:
        return Edge(self.id, self.head, self.tail, tuple(-t for t in self.tags))


@dataclass(frozen=True)
class FreeLoop:
    tags: tuple[int, ...] = ()


@dataclass(frozen=True)
class Violation:
    code: str
    ids: tuple
    message: str


@dataclass(frozen=True)
class Component:
    """A link component: its edges in traversal order, or a single free loop."""

    edges: tuple[int, ...] = ()
    free_loop: int | None = None


@dataclass(frozen=True)
class Diagram:
    surface: Surface
    crossings: tuple[Crossing, ...] = ()
    edges: tuple[Edge, ...] = ()
    free_loops: tuple[FreeLoop, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    @property
    def arity(self) -> int:
        return self.surface.arity

    def crossing(self, cid: int) -> Crossing:
        try:
            return self._idx()["cross"][cid]
        except KeyError:
            raise DiagramError(f"unknown crossing {cid}") from None

    def edge(self, eid: int) -> Edge:
        try:
            return self._idx()["edge"][eid]
        except KeyError:
            raise DiagramError(f"unknown edge {eid}") from None

    def end_at(self, point: Point) -> tuple[int, str]:
        """Return (edge id, 'tail'|'head') of the edge end sitting at ``point``."""
        return self._idx()["ends"][tuple(point)]

    def _idx(self) -> dict:
        if self._index is None:
            ends = {}
            for e in self.edges:
                ends[e.tail] = (e.id, "tail")
                ends[e.head] = (e.id, "head")
            idx = {
                "cross": {c.id: c for c in self.crossings},
                "edge": {e.id: e for e in self.edges},
                "ends": ends,
            }
            object.__setattr__(self, "_index", idx)
        return self._index

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def precrossings(self) -> list[int]:
        return sorted(c.id for c in self.crossings if c.is_pre)

    def classical_crossings(self) -> list[int]:
        return sorted(c.id for c in self.crossings if not c.is_pre)


def make_diagram(surface, crossings: Iterable[Crossing], edges: Iterable[Edge],
                 free_loops: Iterable[FreeLoop] = ()) -> Diagram:
    """Build a diagram with arrays sorted by id."""
    surface = Surface(surface)
    edges = [Edge(e.id, tuple(e.tail), tuple(e.head), tuple(e.tags)) for e in edges]
    loops = [FreeLoop(tuple(f.tags)) for f in free_loops]
    return Diagram(surface, tuple(sorted(crossings, key=lambda c: c.id)),
                   tuple(sorted(edges, key=lambda e: e.id)), tuple(loops))


# documents

def _as_int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError("schema", f"{what} must be an integer")
    return x


def _point(x, what: str) -> Point:
    if not isinstance(x, list) or len(x) != 2:
        raise DocumentError("schema", f"{what} must be [crossing, slot]")
    c, s = _as_int(x[0], what), _as_int(x[1], what)
    if not 0 <= s <= 3:
        raise DocumentError("schema", f"{what} slot {s} outside 0..3")
    return (c, s)


def _tags(x, arity: int, what: str) -> tuple[int, ...]:
    if not isinstance(x, list):
        raise DocumentError("schema", f"{what} tags must be an array")
    if len(x) != arity:
        raise DocumentError("schema", f"{what} has {len(x)} tags, surface needs {arity}")
    return tuple(_as_int(t, f"{what} tag") for t in x)


def from_document(doc: dict) -> Diagram:
    """Build a Diagram from a decoded JSON document (no invariant checks)."""
    if not isinstance(doc, dict):
        raise DocumentError("schema", "document must be an object")
    for key in ("surface", "crossings", "edges", "free_loops"):
        if key not in doc:
            raise DocumentError("schema", f"missing field {key!r}")
    try:
        surface = Surface(doc["surface"])
    except ValueError:
        raise DocumentError("schema", f"unknown surface {doc['surface']!r}") from None
    crossings = []
    for c in doc["crossings"]:
        if "id" not in c or "kind" not in c:
            raise DocumentError("schema", "crossing needs id and kind")
        cid = _as_int(c["id"], "crossing id")
        if c["kind"] == CLASSICAL:
            if c.get("over") not in (0, 1):
                raise DocumentError("schema", f"classical crossing {cid} needs over 0|1")
            crossings.append(Crossing(cid, CLASSICAL, c["over"]))
        elif c["kind"] == PRE:
            if "over" in c:
                raise DocumentError("schema", f"precrossing {cid} must not carry over")
            crossings.append(Crossing(cid, PRE))
        else:
            raise DocumentError("schema", f"crossing {cid} has unknown kind {c['kind']!r}")
    if len({c.id for c in crossings}) != len(crossings):
        raise DocumentError("schema", "duplicate crossing id")
    edges, seen = [], set()
    for e in doc["edges"]:
        for key in ("id", "tail", "head", "tags"):
            if key not in e:
                raise DocumentError("schema", f"edge missing {key!r}")
        eid = _as_int(e["id"], "edge id")
        tail, head = _point(e["tail"], f"edge {eid} tail"), _point(e["head"], f"edge {eid} head")
        for pt in (tail, head):
            if pt in seen:
                raise DocumentError("schema", f"slot {list(pt)} used by two edge ends")
            seen.add(pt)
        edges.append(Edge(eid, tail, head, _tags(e["tags"], surface.arity, f"edge {eid}")))
    if len({e.id for e in edges}) != len(edges):
        raise DocumentError("schema", "duplicate edge id")
    loops = [FreeLoop(_tags(f.get("tags"), surface.arity, "free loop")) for f in doc["free_loops"]]
    return make_diagram(surface, crossings, edges, loops)


def parse_diagram(text: str) -> Diagram:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("syntax", str(exc)) from None
    return from_document(doc)


def to_document(d: Diagram) -> dict:
    crossings = []
    for c in sorted(d.crossings, key=lambda c: c.id):
        item = {"id": c.id, "kind": c.kind}
        if c.kind == CLASSICAL:
            item["over"] = c.over
        crossings.append(item)
    return {
        "surface": d.surface.value,
        "crossings": crossings,
        "edges": [
            {"id": e.id, "tail": list(e.tail), "head": list(e.head), "tags": list(e.tags)}
            for e in sorted(d.edges, key=lambda e: e.id)
        ],
        "free_loops": [{"tags": list(f.tags)} for f in d.free_loops],
    }


def serialize(d: Diagram) -> str:
    return json.dumps(to_document(d), sort_keys=True)


# validation

def validate(d: Diagram) -> list[Violation]:
    out: list[Violation] = []
    if not d.edges and not d.free_loops:
        out.append(Violation("empty", (), "diagram has no edges and no free loops"))
    ids = {c.id for c in d.crossings}
    ends: dict[Point, list[int]] = {}
    for e in d.edges:
        if len(e.tags) != d.arity:
            out.append(Violation("tag-arity", (e.id,), f"edge {e.id} has {len(e.tags)} tags"))
        if e.tail == e.head:
            out.append(Violation("degenerate-edge", (e.id,), f"edge {e.id} has tail = head"))
        for pt in (e.tail, e.head):
            if pt[0] not in ids:
                out.append(Violation("unknown-crossing", (e.id, pt[0]), f"edge {e.id} meets unknown crossing {pt[0]}"))
            ends.setdefault(tuple(pt), []).append(e.id)
    for f_i, f in enumerate(d.free_loops):
        if len(f.tags) != d.arity:
            out.append(Violation("tag-arity", (f_i,), f"free loop {f_i} has {len(f.tags)} tags"))
    for pt, es in ends.items():
        if len(es) > 1:
            out.append(Violation("slot-reused", (pt, *es), f"slot {pt} used by edges {es}"))
    for c in d.crossings:
        if c.kind == CLASSICAL and c.over not in (0, 1):
            out.append(Violation("over-flag", (c.id,), f"classical crossing {c.id} lacks over 0|1"))
        if c.kind == PRE and c.over is not None:
            out.append(Violation("over-flag", (c.id,), f"precrossing {c.id} carries an over flag"))
        for s in range(4):
            if (c.id, s) not in ends:
                out.append(Violation("slot-unused", (c.id, s), f"slot {s} of crossing {c.id} is unused"))
        if all((c.id, s) in ends for s in range(4)) and not any(len(ends[(c.id, s)]) > 1 for s in range(4)):
            for a in (0, 1):
                kinds = []
                for s in (a, a + 2):
                    e = d.edge(ends[(c.id, s)][0])
                    kinds.append("in" if e.head == (c.id, s) else "out")
                if sorted(kinds) != ["in", "out"]:
                    out.append(Violation("orientation", (c.id, a),
                                         f"strand ({a},{a + 2}) at crossing {c.id} is not consistently oriented"))
    return out


def is_valid(d: Diagram) -> bool:
    return not validate(d)


# structure

def strand_next(d: Diagram, eid: int) -> int:
    """The edge following ``eid`` straight through the crossing at its head."""
    c, s = d.edge(eid).head
    return d.end_at((c, (s + 2) % 4))[0]


def components(d: Diagram) -> list[Component]:
    """Link components, ordered by smallest edge id; free loops come last."""
    seen: set[int] = set()
    comps = []
    for e in sorted(d.edges, key=lambda e: e.id):
        if e.id in seen:
            continue
        walk, cur = [], e.id
        while cur not in seen:
            seen.add(cur)
            walk.append(cur)
            cur = strand_next(d, cur)
        comps.append(Component(edges=tuple(walk)))
    comps.extend(Component(free_loop=i) for i in range(len(d.free_loops)))
    return comps


def crossing_sign(d: Diagram, cid: int) -> int:
    """Sign of a classical crossing: +1 when the under-strand leaves one slot
    counterclockwise after the slot where the over-strand leaves."""
    c = d.crossing(cid)
    if c.is_pre:
        return 0

    def out_slot(a: int) -> int:
        for s in (a, a + 2):
            if d.end_at((cid, s))[1] == "tail":
                return s
        raise DiagramError(f"strand at crossing {cid} has no outgoing end")

    over_out, under_out = out_slot(c.over), out_slot(1 - c.over)
    return 1 if under_out == (over_out + 1) % 4 else -1


def writhe(d: Diagram) -> int:
    return sum(crossing_sign(d, c.id) for c in d.crossings if not c.is_pre)


def reverse_component(d: Diagram, comp: int) -> Diagram:
    comps = components(d)
    if not 0 <= comp < len(comps):
        raise DiagramError(f"unknown component {comp}")
    target = comps[comp]
    if target.free_loop is not None:
        loops = list(d.free_loops)
        loops[target.free_loop] = FreeLoop(tuple(-t for t in loops[target.free_loop].tags))
        return replace(d, free_loops=tuple(loops))
    rev = set(target.edges)
    edges = [e.reversed() if e.id in rev else e for e in d.edges]
    return make_diagram(d.surface, d.crossings, edges, d.free_loops)


def forget_tags(d: Diagram) -> Diagram:
    edges = [Edge(e.id, e.tail, e.head, ()) for e in d.edges]
    return make_diagram(Surface.PLANE, d.crossings, edges, [FreeLoop(()) for _ in d.free_loops])


def retag(d: Diagram, surface, fn) -> Diagram:
    """Map every tag vector through ``fn`` and move to ``surface``."""
    edges = [Edge(e.id, e.tail, e.head, tuple(fn(e.tags))) for e in d.edges]
    loops = [FreeLoop(tuple(fn(f.tags))) for f in d.free_loops]
    return make_diagram(surface, d.crossings, edges, loops)


@dataclass(frozen=True)
class Side:
    """One traversal of an edge inside a face walk."""

    edge: int
    forward: bool

    def start(self, d: Diagram) -> Point:
        e = d.edge(self.edge)
        return e.tail if self.forward else e.head

    def end(self, d: Diagram) -> Point:
        e = d.edge(self.edge)
        return e.head if self.forward else e.tail

    def tags(self, d: Diagram) -> tuple[int, ...]:
        t = d.edge(self.edge).tags
        return t if self.forward else tuple(-x for x in t)


def faces(d: Diagram) -> list[tuple[Side, ...]]:
    """Boundary walks of the rotation system, face kept on the left.

    Arriving at slot i of a crossing the walk leaves through slot i - 1.
    Every edge end appears as the start of exactly one step.  Free loops
    do not take part.
    """
    seen: set[Point] = set()
    out = []
    starts = sorted(pt for e in d.edges for pt in (e.tail, e.head))
    for start in starts:
        if start in seen:
            continue
        walk, pt = [], start
        while pt not in seen:
            seen.add(pt)
            eid, end = d.end_at(pt)
            side = Side(eid, end == "tail")
            walk.append(side)
            c, s = side.end(d)
            pt = (c, (s - 1) % 4)
        out.append(tuple(walk))
    return out


def face_tag_sum(d: Diagram, walk: Iterable[Side]) -> tuple[int, ...]:
    total = [0] * d.arity
    for side in walk:
        for i, t in enumerate(side.tags(d)):
            total[i] += t
    return tuple(total)


def euler_characteristic(d: Diagram) -> int:
    """V - E + F of the rotation system (free loops ignored)."""
    return len(d.crossings) - len(d.edges) + len(faces(d))


# canonical form for comparisons up to relabelling

def canonical_form(d: Diagram) -> str:
    """A text key equal for diagrams that differ only by crossing and edge ids,
    cyclic relabelling of slots at a crossing, and a tag gauge (adding a vector
    at a crossing to its incoming tags and subtracting it from its outgoing
    ones).  Precrossing ids and slot labels matter to the bracket but not here.
    """
    adj: dict[int, list[int]] = {c.id: [] for c in d.crossings}
    for e in d.edges:
        adj[e.tail[0]].append(e.head[0])
        adj[e.head[0]].append(e.tail[0])
    done: set[int] = set()
    parts = []
    for c in sorted(adj):
        if c in done:
            continue
        comp, stack = set(), [c]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x])
        done |= comp
        best = min(_labelled(d, start, s) for start in comp for s in range(4))
        parts.append(best)
    loops = sorted(_canon_loop_tags(f.tags) for f in d.free_loops)
    return json.dumps({"surface": d.surface.value, "parts": sorted(parts), "loops": loops})


def _canon_loop_tags(t: tuple[int, ...]) -> list[int]:
    return max(list(t), [-x for x in t])


def _labelled(d: Diagram, start: int, slot: int) -> str:
    label: dict[int, tuple[int, int]] = {start: (0, slot)}
    order = [start]
    pot: dict[int, tuple[int, ...]] = {start: (0,) * d.arity}
    i = 0
    while i < len(order):
        c = order[i]
        i += 1
        rot = label[c][1]
        for k in range(4):
            eid, end = d.end_at((c, (k + rot) % 4))
            e = d.edge(eid)
            other = e.head if end == "tail" else e.tail
            if other[0] not in label:
                label[other[0]] = (len(order), other[1])
                order.append(other[0])
                # gauge so that this tree edge gets zero tags
                if end == "tail":
                    pot[other[0]] = tuple(p - t for p, t in zip(pot[c], e.tags))
                else:
                    pot[other[0]] = tuple(p + t for p, t in zip(pot[c], e.tags))

    def pt(p: Point) -> tuple[int, int]:
        idx, rot = label[p[0]]
        return (idx, (p[1] - rot) % 4)

    crossings = []
    for c in order:
        x = d.crossing(c)
        over = None if x.is_pre else (x.over - label[c][1]) % 2
        crossings.append((label[c][0], x.kind, over))
    edges = []
    for e in d.edges:
        if e.tail[0] in label:
            tags = tuple(t + pot[e.head[0]][j] - pot[e.tail[0]][j] for j, t in enumerate(e.tags))
            edges.append((pt(e.tail), pt(e.head), tags))
    return json.dumps([crossings, sorted(edges)])
