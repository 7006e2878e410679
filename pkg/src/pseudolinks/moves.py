"""Reidemeister-type rewrites on diagrams and seeded random isotopy walks.

Move families and directions:

* ``R1+``, ``R1-``, ``PR1``: add or remove a kink whose crossing is positive,
  negative, or a precrossing (``expand`` / ``reduce``);
* ``R2``: poke one edge across another along a common face, or undo such a
  bigon (``expand`` / ``reduce``);
* ``PR2``: swap a precrossing and a classical crossing that bound a bigon
  (``slide``, its own inverse);
* ``R3`` / ``PR3``: move a strand that lies over (or under) both other strands
  of a triangle across the opposite crossing (``slide``, its own inverse).
  PR3 triangles hold one precrossing; R3 triangles are fully classical.

Reductions and slides require the face they act on to have zero tag sum, so
the move happens inside a disc.  Internal arcs created by a move carry zero
tags; before a triangle flip the tags are shifted off the triangle with a
crossing potential, which changes no loop class.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .diagram import (CLASSICAL, PRE, Crossing, Diagram, DiagramError, Edge, Side,
                      crossing_sign, face_tag_sum, faces, make_diagram)
from .surgery import gauge, incoming_slots, reconnect

EXPAND, REDUCE, SLIDE = "expand", "reduce", "slide"
STRAIGHT = ((0, 2), (1, 3))


@dataclass(frozen=True)
class MoveKind:
    name: str
    direction: str

    def __post_init__(self) -> None:
        if (self.name, self.direction) not in _VALID:
            raise ValueError(f"no move {self.name} {self.direction}")

    def __str__(self) -> str:
        return f"{self.name}:{self.direction}"


_VALID = {(n, dr) for n in ("R1+", "R1-", "PR1", "R2") for dr in (EXPAND, REDUCE)}
_VALID |= {("PR2", SLIDE), ("R3", SLIDE), ("PR3", SLIDE)}

REGULAR = frozenset(MoveKind(n, dr) for n, dr in [("R2", EXPAND), ("R2", REDUCE), ("PR2", SLIDE),
                                                  ("R3", SLIDE), ("PR3", SLIDE)])
KINKS = frozenset(MoveKind(n, dr) for n in ("R1+", "R1-", "PR1") for dr in (EXPAND, REDUCE))
FULL = REGULAR | KINKS


@dataclass(frozen=True)
class MoveSite:
    kind: MoveKind
    location: tuple

    def to_json(self) -> dict:
        return {"kind": self.kind.name, "direction": self.kind.direction,
                "location": _jsonable(self.location)}


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


class StaleSiteError(ValueError):
    """The site no longer matches the diagram."""


@dataclass(frozen=True)
class Frozen:
    """Crossings and edges a walk must not touch (fixed parts of mixed diagrams)."""

    crossings: frozenset = frozenset()
    edges: frozenset = frozenset()


NOTHING_FROZEN = Frozen()


# helpers

def _next_ids(d: Diagram) -> tuple[int, int]:
    c = max((x.id for x in d.crossings), default=-1) + 1
    e = max((x.id for x in d.edges), default=-1) + 1
    return c, e


def _zero(d: Diagram) -> tuple[int, ...]:
    return (0,) * d.arity


def _is_zero(t) -> bool:
    return not any(t)


def _kink_over(name: str, side: int) -> int | None:
    if name == "PR1":
        return None
    positive_over = 0 if side == 3 else 1
    return positive_over if name == "R1+" else 1 - positive_over


def _kink_matches(d: Diagram, cid: int, name: str) -> bool:
    c = d.crossing(cid)
    if name == "PR1":
        return c.is_pre
    if c.is_pre:
        return False
    return crossing_sign(d, cid) == (1 if name == "R1+" else -1)


def _over_strand_at(d: Diagram, cid: int, slot: int) -> bool:
    c = d.crossing(cid)
    return slot % 2 == c.over


def _rotate(d: Diagram, cid: int, r: int) -> Diagram:
    """Relabel the slots of one crossing by s -> s + r (cyclic order kept)."""
    if r % 4 == 0:
        return d

    def mv(pt):
        return (pt[0], (pt[1] + r) % 4) if pt[0] == cid else pt

    edges = [Edge(e.id, mv(e.tail), mv(e.head), e.tags) for e in d.edges]
    crossings = [Crossing(c.id, c.kind, None if c.is_pre else (c.over + r) % 2) if c.id == cid else c
                 for c in d.crossings]
    return make_diagram(d.surface, crossings, edges, d.free_loops)


def _align_anchor(d: Diagram, cid: int, end: tuple[int, str]) -> Diagram:
    """Rotate slot labels of precrossing ``cid`` so that the strand through the
    smallest incoming slot is the strand holding edge end ``end``."""
    for r in range(4):
        dd = _rotate(d, cid, r)
        inc = incoming_slots(dd, cid)
        e = dd.edge(end[0])
        pt = e.tail if end[1] == "tail" else e.head
        if (inc[0] - pt[1]) % 2 == 0:
            return dd
    raise AssertionError("no rotation aligns the anchor")


def _anchor_edge_end(d: Diagram, cid: int, slots: tuple[int, int]) -> int:
    """Which of two adjacent slots lies on the anchor strand of ``cid``."""
    m = incoming_slots(d, cid)[0]
    return slots[0] if (m - slots[0]) % 2 == 0 else slots[1]


def _end_of(d: Diagram, pt) -> tuple[int, str]:
    return d.end_at(pt)


def _canon_walk(walk) -> tuple:
    items = [(s.edge, s.forward) for s in walk]
    k = min(range(len(items)), key=lambda i: items[i])
    return tuple(items[k:] + items[:k])


def _find_walk(d: Diagram, loc: tuple) -> tuple[Side, ...]:
    for w in faces(d):
        if len(w) == len(loc) and _canon_walk(w) == loc:
            k = [(s.edge, s.forward) for s in w].index(loc[0])
            return w[k:] + w[:k]
    raise StaleSiteError(f"no face walk {loc}")


def _touches(d: Diagram, frozen: Frozen, crossings=(), edges=()) -> bool:
    return any(c in frozen.crossings for c in crossings) or any(e in frozen.edges for e in edges)


# site discovery

def find_sites(d: Diagram, kind: MoveKind, frozen: Frozen = NOTHING_FROZEN) -> list[MoveSite]:
    name, direction = kind.name, kind.direction
    if name in ("R1+", "R1-", "PR1"):
        return _kink_expand_sites(d, kind, frozen) if direction == EXPAND else \
            _kink_reduce_sites(d, kind, frozen)
    if name == "R2":
        return _poke_sites(d, kind, frozen) if direction == EXPAND else _bigon_sites(d, kind, frozen)
    if name == "PR2":
        return _bigon_sites(d, kind, frozen)
    return _triangle_sites(d, kind, frozen)


def _kink_expand_sites(d, kind, frozen):
    out = []
    for e in d.edges:
        if e.id in frozen.edges:
            continue
        for side in (1, 3):
            out.append(MoveSite(kind, ("edge", e.id, side)))
    for i in range(len(d.free_loops)):
        if ("loop", i) in frozen.edges:
            continue
        for side in (1, 3):
            out.append(MoveSite(kind, ("loop", i, side)))
    return out


def _kink_loop_edge(d: Diagram, cid: int) -> Edge | None:
    for e in d.edges:
        if e.tail[0] == cid and e.head[0] == cid and (e.tail[1] - e.head[1]) % 2 == 1 \
                and _is_zero(e.tags):
            return e
    return None


def _kink_reduce_sites(d, kind, frozen):
    out = []
    for c in d.crossings:
        if c.id in frozen.crossings or not _kink_matches(d, c.id, kind.name):
            continue
        if _kink_loop_edge(d, c.id) is not None:
            out.append(MoveSite(kind, (c.id,)))
    return out


def _poke_sites(d, kind, frozen):
    out = []
    for w in faces(d):
        for i in range(len(w)):
            for j in range(i + 1, len(w)):
                a, b = w[i], w[j]
                if a.edge == b.edge or _touches(d, frozen, edges=(a.edge, b.edge)):
                    continue
                for top in ("alpha", "beta"):
                    out.append(MoveSite(kind, (a.edge, a.forward, b.edge, b.forward, top)))
    return out


def _bigon_info(d: Diagram, w) -> tuple | None:
    s1, s2 = w
    x, y = s1.start(d)[0], s1.end(d)[0]
    if x == y or s1.edge == s2.edge or s2.start(d)[0] != y or s2.end(d)[0] != x:
        return None
    if not _is_zero(face_tag_sum(d, w)):
        return None
    return x, y


def _bigon_sites(d, kind, frozen):
    out, seen = [], set()
    for w in faces(d):
        if len(w) != 2:
            continue
        info = _bigon_info(d, w)
        if info is None:
            continue
        x, y = info
        if _touches(d, frozen, crossings=(x, y), edges=(w[0].edge, w[1].edge)):
            continue
        cx, cy = d.crossing(x), d.crossing(y)
        loc = _canon_walk(w)
        if kind.name == "R2":
            if cx.is_pre or cy.is_pre:
                continue
            s1 = w[0]
            if _over_strand_at(d, x, s1.start(d)[1]) != _over_strand_at(d, y, s1.end(d)[1]):
                continue
        elif cx.is_pre == cy.is_pre:
            continue
        if loc not in seen:
            seen.add(loc)
            out.append(MoveSite(kind, loc))
    return out


def _triangle_info(d: Diagram, w) -> dict | None:
    s1, s2, s3 = w
    x, y, z = s1.start(d)[0], s2.start(d)[0], s3.start(d)[0]
    if len({x, y, z}) != 3 or len({s1.edge, s2.edge, s3.edge}) != 3:
        return None
    if not _is_zero(face_tag_sum(d, w)):
        return None
    x_in, y_in, z_in = s3.end(d)[1], s1.end(d)[1], s2.end(d)[1]
    # strand labels through the two triangle slots of each corner
    slots = {x: {"ZX": x_in, "XY": (x_in - 1) % 4},
             y: {"XY": y_in, "YZ": (y_in - 1) % 4},
             z: {"YZ": z_in, "ZX": (z_in - 1) % 4}}
    over = {}
    for c in (x, y, z):
        cr = d.crossing(c)
        if cr.is_pre:
            over[c] = None
        else:
            over[c] = next(lbl for lbl, s in slots[c].items() if s % 2 == cr.over)
    return {"X": x, "Y": y, "Z": z, "x_in": x_in, "y_in": y_in, "z_in": z_in,
            "slots": slots, "over": over}


_OPPOSITE = {"X": "YZ", "Y": "ZX", "Z": "XY"}


def _extreme(info: dict, strand: str) -> bool:
    corners = [info[c] for c in "XYZ" if strand in info["slots"][info[c]]]
    tops = [info["over"][c] == strand for c in corners]
    if any(info["over"][c] is None for c in corners):
        return False
    return all(tops) or not any(tops)


def _triangle_sites(d, kind, frozen):
    out = []
    for w in faces(d):
        if len(w) != 3:
            continue
        info = _triangle_info(d, w)
        if info is None:
            continue
        corners = [info[c] for c in "XYZ"]
        if _touches(d, frozen, crossings=corners, edges=[s.edge for s in w]):
            continue
        pres = [c for c in "XYZ" if d.crossing(info[c]).is_pre]
        if kind.name == "R3":
            ok = not pres and any(_extreme(info, s) for s in ("XY", "YZ", "ZX"))
        else:
            ok = len(pres) == 1 and _extreme(info, _OPPOSITE[pres[0]])
        if ok:
            out.append(MoveSite(kind, _canon_walk(w)))
    return out


# application

def apply_move(d: Diagram, site: MoveSite) -> Diagram:
    name, direction = site.kind.name, site.kind.direction
    if name in ("R1+", "R1-", "PR1"):
        return _kink_expand(d, site) if direction == EXPAND else _kink_reduce(d, site)
    if name == "R2":
        return _poke(d, site) if direction == EXPAND else _bigon_reduce(d, site)
    if name == "PR2":
        return _slide_bigon(d, site)
    return _flip_triangle(d, site)


def _kink_expand(d: Diagram, site: MoveSite) -> Diagram:
    what, ref, side = site.location
    cid, eid = _next_ids(d)
    over = _kink_over(site.kind.name, side)
    cross = Crossing(cid, PRE) if over is None else Crossing(cid, CLASSICAL, over)
    zero = _zero(d)
    out_slot = (side + 2) % 4
    edges = list(d.edges)
    loops = list(d.free_loops)
    if what == "edge":
        try:
            e = d.edge(ref)
        except DiagramError:
            raise StaleSiteError(f"edge {ref} is gone") from None
        edges.remove(e)
        edges += [Edge(eid, e.tail, (cid, 2), zero),
                  Edge(eid + 1, (cid, 0), (cid, side), zero),
                  Edge(e.id, (cid, out_slot), e.head, e.tags)]
    else:
        if not 0 <= ref < len(loops):
            raise StaleSiteError(f"free loop {ref} is gone")
        f = loops.pop(ref)
        edges += [Edge(eid, (cid, 0), (cid, side), zero),
                  Edge(eid + 1, (cid, out_slot), (cid, 2), f.tags)]
    return make_diagram(d.surface, list(d.crossings) + [cross], edges, loops)


def _kink_reduce(d: Diagram, site: MoveSite) -> Diagram:
    (cid,) = site.location
    try:
        ok = _kink_matches(d, cid, site.kind.name) and _kink_loop_edge(d, cid) is not None
    except DiagramError:
        ok = False
    if not ok:
        raise StaleSiteError(f"no {site.kind.name} kink at crossing {cid}")
    return reconnect(d, {cid: STRAIGHT})[0]


def _poke(d: Diagram, site: MoveSite) -> Diagram:
    ea, fa, eb, fb, top = site.location
    walk = None
    for w in faces(d):
        keys = [(s.edge, s.forward) for s in w]
        if (ea, fa) in keys and (eb, fb) in keys:
            walk, i, j = w, keys.index((ea, fa)), keys.index((eb, fb))
            break
    if walk is None or ea == eb:
        raise StaleSiteError("poke sides no longer share a face")
    if i > j:
        i, j = j, i
        ea, fa, eb, fb = eb, fb, ea, fa
        top = "beta" if top == "alpha" else "alpha"
    alpha, beta = walk[i], walk[j]
    n = len(walk)
    r2 = [0] * d.arity
    k = (j + 1) % n
    while k != i:
        for t, x in enumerate(walk[k].tags(d)):
            r2[t] += x
        k = (k + 1) % n
    ta, tb = alpha.tags(d), beta.tags(d)
    zero = _zero(d)
    x1, x2 = _next_ids(d)[0], _next_ids(d)[0] + 1
    eid = _next_ids(d)[1]
    pa, qa, pb, qb = alpha.start(d), alpha.end(d), beta.start(d), beta.end(d)
    # walk-direction pieces: (start, end, tags)
    a_parts = [(pa, (x1, 3), zero), ((x1, 1), (x2, 1), zero), ((x2, 3), qa, ta)]
    b_parts = [(pb, (x2, 0), tuple(t + r for t, r in zip(tb, r2))),
               ((x2, 2), (x1, 0), zero),
               ((x1, 2), qb, tuple(-r for r in r2))]
    edges = [e for e in d.edges if e.id not in (alpha.edge, beta.edge)]
    ids = [alpha.edge, eid, eid + 1, beta.edge, eid + 2, eid + 3]
    for (s, t, tags), fw, new_id in zip(a_parts + b_parts, [alpha.forward] * 3 + [beta.forward] * 3, ids):
        e = Edge(new_id, s, t, tags)
        edges.append(e if fw else e.reversed())
    over = 1 if top == "alpha" else 0
    crossings = list(d.crossings) + [Crossing(x1, CLASSICAL, over), Crossing(x2, CLASSICAL, over)]
    return make_diagram(d.surface, crossings, edges, d.free_loops)


def _bigon_reduce(d: Diagram, site: MoveSite) -> Diagram:
    walk = _find_walk(d, site.location)
    if not _bigon_sites_contains(d, site):
        raise StaleSiteError("bigon no longer reducible")
    x, y = walk[0].start(d)[0], walk[0].end(d)[0]
    return reconnect(d, {x: STRAIGHT, y: STRAIGHT})[0]


def _bigon_sites_contains(d: Diagram, site: MoveSite) -> bool:
    return site in _bigon_sites(d, site.kind, NOTHING_FROZEN)


def _slide_bigon(d: Diagram, site: MoveSite) -> Diagram:
    if not _bigon_sites_contains(d, site):
        raise StaleSiteError("no precrossing/classical bigon here")
    s1, s2 = _find_walk(d, site.location)
    u, w = s1.start(d)[0], s1.end(d)[0]
    arrive = {w: s1.end(d)[1], u: s2.end(d)[1]}
    pre, cl = (u, w) if d.crossing(u).is_pre else (w, u)
    j_pre, j_cl = (arrive[pre] - 1) % 4, (arrive[cl] - 1) % 4
    over_first = j_cl % 2 == d.crossing(cl).over
    new_over = j_pre % 2 if over_first else (j_pre + 1) % 2
    # the anchor strand of the precrossing holds one of the two bigon edges
    anchor_slot = _anchor_edge_end(d, pre, (j_pre, arrive[pre]))
    anchor_edge = d.end_at((pre, anchor_slot))[0]
    # swap positions: the precrossing keeps its id and moves to the other corner

    def swap(pt):
        if pt[0] == pre:
            return (cl, pt[1])
        if pt[0] == cl:
            return (pre, pt[1])
        return pt

    edges = [Edge(e.id, swap(e.tail), swap(e.head), e.tags) for e in d.edges]
    crossings = [c for c in d.crossings if c.id not in (pre, cl)]
    crossings += [Crossing(pre, PRE), Crossing(cl, CLASSICAL, new_over)]
    out = make_diagram(d.surface, crossings, edges, d.free_loops)
    be = out.edge(anchor_edge)
    end = (anchor_edge, "tail") if be.tail[0] == pre else (anchor_edge, "head")
    return _align_anchor(out, pre, end)


def _flip_triangle(d: Diagram, site: MoveSite) -> Diagram:
    if site not in _triangle_sites(d, site.kind, NOTHING_FROZEN):
        raise StaleSiteError("triangle no longer matches")
    walk = _find_walk(d, site.location)
    info = _triangle_info(d, walk)
    X, Y, Z = info["X"], info["Y"], info["Z"]
    w1, w2 = walk[0].tags(d), walk[1].tags(d)
    d = gauge(d, {Y: tuple(-t for t in w1), Z: tuple(-a - b for a, b in zip(w1, w2))})
    x_in, y_in, z_in = info["x_in"], info["y_in"], info["z_in"]
    arms = [(X, (x_in + 1) % 4, "XY"), (X, (x_in + 2) % 4, "ZX"),
            (Y, (y_in + 1) % 4, "YZ"), (Y, (y_in + 2) % 4, "XY"),
            (Z, (z_in + 1) % 4, "ZX"), (Z, (z_in + 2) % 4, "YZ")]
    arm_ends = [d.end_at((c, s)) for c, s, _ in arms]
    # new corners pair consecutive arms; each inherits the crossing of the
    # same two strands
    corners = [(1, 2, Z), (3, 4, X), (5, 0, Y)]
    pre_anchor = None
    for _, _, old in corners:
        if d.crossing(old).is_pre:
            m = incoming_slots(d, old)[0]
            pre_anchor = (old, next(lbl for lbl, s in info["slots"][old].items() if (s - m) % 2 == 0))
    moved: dict[tuple[int, str], tuple] = {}
    for (fi, gi, old) in corners:
        moved[arm_ends[fi]] = (old, 2)
        moved[arm_ends[gi]] = (old, 3)
    internal_ids = {"ZX": walk[2].edge, "XY": walk[0].edge, "YZ": walk[1].edge}
    edges = []
    for e in d.edges:
        if e.id in internal_ids.values():
            continue
        tail = moved.get((e.id, "tail"), e.tail)
        head = moved.get((e.id, "head"), e.head)
        edges.append(Edge(e.id, tail, head, e.tags))
    zero = _zero(d)
    new_cross = []
    for idx, (fi, gi, old) in enumerate(corners):
        nxt = corners[(idx + 1) % 3][2]
        f_label = arms[fi][2]
        g_label = arms[gi][2]
        inward = arm_ends[fi][1] == "head"
        a, b = (old, 0), (nxt, 1)
        edges.append(Edge(internal_ids[f_label], a, b, zero) if inward
                     else Edge(internal_ids[f_label], b, a, zero))
        cr = d.crossing(old)
        if cr.is_pre:
            new_cross.append(Crossing(old, PRE))
        else:
            top = info["over"][old]
            new_cross.append(Crossing(old, CLASSICAL, 0 if top == f_label else 1))
        if pre_anchor and pre_anchor[0] == old:
            want = fi if f_label == pre_anchor[1] else gi
            pre_anchor = (old, arm_ends[want])
        assert g_label != f_label
    crossings = [c for c in d.crossings if c.id not in (X, Y, Z)] + new_cross
    out = make_diagram(d.surface, crossings, edges, d.free_loops)
    if pre_anchor:
        return _align_anchor(out, pre_anchor[0], pre_anchor[1])
    return out


# random walks

@dataclass
class WalkResult:
    diagram: Diagram
    trace: list[MoveSite] = field(default_factory=list)
    complete: bool = True

    def trace_json(self) -> list[dict]:
        return [s.to_json() for s in self.trace]


def _growth(kind: MoveKind) -> int:
    if kind.direction != EXPAND:
        return 0
    return 2 if kind.name == "R2" else 1


def random_walk(d: Diagram, seed: int, steps: int, allowed=REGULAR,
                max_crossings: int | None = None, frozen: Frozen = NOTHING_FROZEN) -> WalkResult:
    """Apply ``steps`` random moves.  Each step first picks a move kind
    uniformly among the allowed kinds that have a site, then a site uniformly.
    Expansions that would exceed ``max_crossings`` are not offered."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    rng = random.Random(seed)
    kinds = sorted(allowed, key=lambda k: (k.name, k.direction))
    result = WalkResult(d)
    for _ in range(steps):
        options = []
        for kind in kinds:
            if max_crossings is not None and result.diagram.n_crossings + _growth(kind) > max_crossings:
                continue
            sites = find_sites(result.diagram, kind, frozen)
            if sites:
                options.append(sites)
        if not options:
            result.complete = False
            break
        sites = options[rng.randrange(len(options))]
        site = sites[rng.randrange(len(sites))]
        result.diagram = apply_move(result.diagram, site)
        result.trace.append(site)
        frozen = _shift_frozen_loops(frozen, site)
    return result


def _shift_frozen_loops(frozen: Frozen, site: MoveSite) -> Frozen:
    # a kink on free loop i removes it and later loops move down one place
    loc = site.location
    if loc[0] != "loop" or not any(isinstance(e, tuple) for e in frozen.edges):
        return frozen
    i = loc[1]
    edges = frozenset(("loop", e[1] - 1) if isinstance(e, tuple) and e[1] > i else e
                      for e in frozen.edges)
    return Frozen(frozen.crossings, edges)
