"""Low-level rewiring shared by smoothings and move rewrites."""
from __future__ import annotations

from .diagram import Diagram, Edge, FreeLoop, Point, make_diagram


def reconnect(d: Diagram, joins: dict[int, tuple[tuple[int, int], tuple[int, int]]],
              drop: frozenset = frozenset()):
    """Remove the crossings in ``joins`` and splice edges through them.

    ``joins[c]`` is a pair of slot pairs saying which slots of crossing ``c``
    are connected once it is gone.  Chains of edges become one edge whose tags
    are the signed sum along the chain; closed chains become free loops.
    Each new edge is directed like the first edge of its chain.

    Returns ``(diagram, where)`` where ``where[old edge id] = (new edge id or
    None for a free loop, same_direction)``.  Closed chains made only of
    edges in ``drop`` are discarded instead of becoming free loops.
    """
    link: dict[Point, Point] = {}
    for c, pairs in joins.items():
        for a, b in pairs:
            link[(c, a)] = (c, b)
            link[(c, b)] = (c, a)
    touched = [e for e in d.edges if e.tail[0] in joins or e.head[0] in joins]
    keep = [e for e in d.edges if not (e.tail[0] in joins or e.head[0] in joins)]
    used: set[int] = set()
    where: dict[int, tuple[int | None, bool]] = {}
    new_edges, new_loops = list(keep), list(d.free_loops)
    zero = (0,) * d.arity

    def walk(e: Edge, entry: Point, stop_edge: int | None):
        chain = []
        while True:
            forward = entry == e.tail
            chain.append((e, forward))
            used.add(e.id)
            exit_pt = e.head if forward else e.tail
            if exit_pt[0] not in joins:
                return chain, exit_pt
            entry = link[exit_pt]
            eid, _ = d.end_at(entry)
            if eid == stop_edge:
                return chain, None
            e = d.edge(eid)

    for e in touched:
        for start in (e.tail, e.head):
            if e.id in used or start[0] in joins:
                continue
            chain, end_pt = walk(e, start, None)
            tags = list(zero)
            for ce, fw in chain:
                for i, t in enumerate(ce.tags):
                    tags[i] += t if fw else -t
            nid = min(ce.id for ce, _ in chain)
            first_fw = chain[0][1]
            if first_fw:
                new_edges.append(Edge(nid, start, end_pt, tuple(tags)))
            else:
                new_edges.append(Edge(nid, end_pt, start, tuple(-t for t in tags)))
            for ce, fw in chain:
                where[ce.id] = (nid, fw == first_fw)
    for e in touched:
        if e.id in used:
            continue
        chain, _ = walk(e, e.tail, e.id)
        if all(ce.id in drop for ce, _ in chain):
            continue
        tags = list(zero)
        for ce, fw in chain:
            for i, t in enumerate(ce.tags):
                tags[i] += t if fw else -t
        new_loops.append(FreeLoop(tuple(tags)))
        for ce, _ in chain:
            where[ce.id] = (None, True)
    crossings = [c for c in d.crossings if c.id not in joins]
    return make_diagram(d.surface, crossings, new_edges, new_loops), where


def orient_from(d: Diagram, eid: int) -> Diagram:
    """Reverse edges as needed so the strand through ``eid`` is coherently
    oriented along the direction of ``eid``."""
    edges = {e.id: e for e in d.edges}
    ends = {}
    for e in edges.values():
        ends[e.tail] = e.id
        ends[e.head] = e.id
    cur = eid
    while True:
        c, s = edges[cur].head
        nxt_pt = (c, (s + 2) % 4)
        nid = ends[nxt_pt]
        if nid == eid:
            break
        if edges[nid].tail != nxt_pt:
            edges[nid] = edges[nid].reversed()
        cur = nid
    return make_diagram(d.surface, d.crossings, edges.values(), d.free_loops)


def incoming_slots(d: Diagram, cid: int) -> list[int]:
    return [s for s in range(4) if d.end_at((cid, s))[1] == "head"]


def gauge(d: Diagram, potential: dict[int, tuple[int, ...]]) -> Diagram:
    """Shift tags by a crossing potential: tag += f(head) - f(tail)."""
    zero = (0,) * d.arity
    edges = []
    for e in d.edges:
        fh, ft = potential.get(e.head[0], zero), potential.get(e.tail[0], zero)
        edges.append(Edge(e.id, e.tail, e.head, tuple(t + a - b for t, a, b in zip(e.tags, fh, ft))))
    return make_diagram(d.surface, d.crossings, edges, d.free_loops)
