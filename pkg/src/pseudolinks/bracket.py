"""State-sum evaluation of the pseudo bracket on the plane, annulus and torus.

Smoothing conventions (slots counterclockwise, pairing ``P0 = {01, 23}``,
``P1 = {03, 12}``):

* classical crossing, under-strand slot ``u``: the A-smoothing joins
  ``u ~ u+1`` and ``u+2 ~ u+3``; B is the other pairing;
* precrossing: V is the pairing joining each incoming slot to an outgoing
  one, H the pairing joining the two incoming slots.

Precrossings are resolved first, in ascending id order.  After an
H-smoothing the affected curve is re-oriented so that the edge arriving at
the smallest incoming slot keeps its direction, and later precrossings are
labelled V or H against that current orientation.  Classical smoothings do
not affect any label, so classical crossings may be resolved in any order.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import poly as P
from .diagram import (CLASSICAL, PRE, Crossing, Diagram, DiagramError, Edge, FreeLoop,
                      Surface, make_diagram, writhe)
from .poly import Poly, Var
from .surgery import incoming_slots, orient_from, reconnect

DEFAULT_MAX_CROSSINGS = 24
PYTHON_ENGINE_LIMIT = 6
CHUNK = 1 << 15


class Variant(str, Enum):
    PLANAR = "planar"
    ANNULAR = "annular"
    ANNULAR_UNIVERSAL = "annular_universal"
    TOROIDAL = "toroidal"
    TOROIDAL_UNIVERSAL = "toroidal_universal"
    TOROIDAL_REDUCED = "toroidal_reduced"

    @property
    def surface(self) -> Surface:
        if self is Variant.PLANAR:
            return Surface.PLANE
        if self.value.startswith("annular"):
            return Surface.ANNULUS
        return Surface.TORUS


class LoopError(ValueError):
    """A state loop cannot be an embedded curve (inconsistent tags)."""


class CrossingCapError(ValueError):
    """The diagram has more crossings than the configured cap."""


@dataclass(frozen=True)
class LoopClass:
    kind: str  # 'null' | 'annular' | 'torus'
    p: int | None = None
    q: int | None = None

    @property
    def essential(self) -> bool:
        return self.kind != "null"


NULL = LoopClass("null")
ANNULAR_ESSENTIAL = LoopClass("annular")


def classify_loop(tags_sum, surface) -> LoopClass:
    surface = Surface(surface)
    t = tuple(tags_sum)
    if len(t) != surface.arity:
        raise LoopError(f"tag vector {t} does not fit {surface.value}")
    if surface is Surface.PLANE:
        return NULL
    if surface is Surface.ANNULUS:
        if t[0] == 0:
            return NULL
        if abs(t[0]) == 1:
            return ANNULAR_ESSENTIAL
        raise LoopError(f"loop winds {t[0]} times around the annulus")
    p, q = t
    if p == 0 and q == 0:
        return NULL
    if math.gcd(p, q) != 1:
        raise LoopError(f"loop class ({p},{q}) is not primitive")
    return LoopClass("torus", *P.canonical_pq(p, q))


# state values

_D_POW: dict[int, Poly] = {}


def _d_pow(e: int) -> Poly:
    if e not in _D_POW:
        _D_POW[e] = P.d_const() ** e
    return _D_POW[e]


def _w_items(variant: Variant, k: int, cls: tuple[int, int] | None) -> list[tuple[Var, int]]:
    if k == 0:
        return []
    if variant is Variant.PLANAR:
        raise LoopError("essential loop in a planar state")
    if variant is Variant.ANNULAR:
        return [(Var("s"), k)]
    if variant is Variant.ANNULAR_UNIVERSAL:
        return [(P.s_k(k), 1)]
    p, q = cls
    if variant is Variant.TOROIDAL:
        return [(Var("s_pq", p, q), k)]
    if variant is Variant.TOROIDAL_UNIVERSAL:
        return [(Var("s_pqk", p, q, k), 1)]
    return [(Var("x"), k * p), (Var("y"), k * q)]


def _assemble(counts: dict, variant: Variant) -> Poly:
    """Turn {(a-b, v, h, n_null, k, p, q): multiplicity} into a polynomial."""
    a_var, v_var, h_var = Var("A"), Var("V"), Var("H")
    terms: dict = {}
    for (aexp, v, h, n, k, p, q), mult in counts.items():
        if not mult:
            continue
        base = [(v_var, v), (h_var, h)] + _w_items(variant, k, (p, q) if k else None)
        for m, c in _d_pow(n - (1 if k == 0 else 0)).items():
            ad = dict(m).get(a_var, 0)
            mono = P._mono(base + [(a_var, aexp + ad)])
            terms[mono] = terms.get(mono, 0) + c * mult
    return Poly(terms)


def state_value(state: Diagram, coeffs: tuple[int, int, int, int], variant) -> Poly:
    """Value of a fully resolved state (free loops only)."""
    variant = Variant(variant)
    if state.crossings:
        raise DiagramError("a state has no crossings")
    a, b, v, h = coeffs
    n, k, cls = 0, 0, None
    for f in state.free_loops:
        c = classify_loop(f.tags, state.surface)
        if not c.essential:
            n += 1
            continue
        key = (c.p, c.q)
        if cls is not None and key != cls:
            raise LoopError("state mixes two essential classes")
        cls, k = key, k + 1
    p, q = cls if cls else (None, None)
    return _assemble({(a - b, v, h, n, k, p, q): 1}, variant)


# compiled state space

@dataclass(frozen=True)
class StateSpace:
    surface: Surface
    ids: tuple[int, ...]          # crossing ids by index
    mate: np.ndarray              # point -> the other end of its edge
    weight: np.ndarray            # point -> tags when leaving along its edge
    pre_index: tuple[int, ...]    # crossing indices of precrossings, ascending id
    cl_index: tuple[int, ...]     # crossing indices of classical crossings
    cl_abit: np.ndarray           # pairing bit of the A-smoothing per classical crossing
    pre_rows: np.ndarray          # (R, m) pairing bits of each precrossing label vector
    pre_v: np.ndarray             # (R,) number of V labels in each row
    free_null: int
    free_classes: tuple           # canonical classes of essential free loops

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def size(self) -> int:
        return len(self.pre_rows) << len(self.cl_index)


def _partner(p: int, bit: int) -> int:
    s = p & 3
    return p - s + ((3 - s) if bit else (s ^ 1))


def compile_state_space(d: Diagram) -> StateSpace:
    ids = tuple(sorted(c.id for c in d.crossings))
    index = {c: i for i, c in enumerate(ids)}
    npts = 4 * len(ids)
    r = d.arity
    mate = np.zeros(npts, dtype=np.int64)
    weight = np.zeros((npts, r), dtype=np.int64)
    tail_of = np.zeros(npts, dtype=bool)
    edge_of = np.zeros(npts, dtype=np.int64)
    for j, e in enumerate(d.edges):
        t = 4 * index[e.tail[0]] + e.tail[1]
        h = 4 * index[e.head[0]] + e.head[1]
        mate[t], mate[h] = h, t
        weight[t], weight[h] = e.tags, tuple(-x for x in e.tags)
        tail_of[t] = True
        edge_of[t] = edge_of[h] = j
    pre_index = tuple(index[c] for c in ids if d.crossing(c).is_pre)
    cl_index = tuple(index[c] for c in ids if not d.crossing(c).is_pre)
    cl_abit = np.array([1 - d.crossing(ids[i]).over for i in cl_index], dtype=np.int64)
    rows, vs = _precrossing_labels(mate.tolist(), tail_of.tolist(), edge_of.tolist(),
                                   len(d.edges), pre_index, len(ids))
    free_null, free_classes = 0, []
    for f in d.free_loops:
        c = classify_loop(f.tags, d.surface)
        if c.essential:
            free_classes.append((c.p, c.q) if c.kind == "torus" else (0, 0))
        else:
            free_null += 1
    return StateSpace(d.surface, ids, mate, weight, pre_index, cl_index, cl_abit,
                      np.array(rows, dtype=np.int64).reshape(len(rows), len(pre_index)),
                      np.array(vs, dtype=np.int64), free_null, tuple(free_classes))


def _precrossing_labels(mate, tail_of, edge_of, n_edges, pre_index, n):
    """Enumerate V/H label vectors with their geometric pairings.

    Returns rows of pairing bits (one per precrossing, in ``pre_index`` order)
    and the number of V labels in each row.  Order: V before H, depth first.
    """
    rows, vs = [], []
    m = len(pre_index)
    conn = [None] * n

    def nxt(p):
        c = conn[p >> 2]
        if c is None:
            return p ^ 2
        return _partner(p, c)

    def incoming(flip, p):
        return tail_of[p] == flip[edge_of[p]]

    def reorient(flip, anchor):
        flip = list(flip)
        p = anchor
        while True:
            q = nxt(p)
            flip[edge_of[q]] = not tail_of[q]
            p = mate[q]
            if p == anchor:
                return flip

    def rec(k, flip, v):
        if k == m:
            rows.append([conn[i] for i in pre_index])
            vs.append(v)
            return
        i = pre_index[k]
        inc = [s for s in range(4) if incoming(flip, 4 * i + s)]
        coh = 1 if inc in ([0, 1], [2, 3]) else 0
        conn[i] = coh
        rec(k + 1, flip, v + 1)
        conn[i] = 1 - coh
        rec(k + 1, reorient(flip, 4 * i + inc[0]), v)
        conn[i] = None

    rec(0, [False] * n_edges, 0)
    return rows, vs


# evaluation back ends

def _key_for(space: StateSpace, aexp, v, n_null, classes):
    k, cls = 0, None
    for c in classes + list(space.free_classes):
        if cls is not None and c != cls:
            raise LoopError("state mixes two essential classes")
        cls, k = c, k + 1
    p, q = cls if cls else (0, 0)
    m = len(space.pre_index)
    return (aexp, v, m - v, n_null + space.free_null, k, p, q)


def _classify_sum(space: StateSpace, w) -> tuple[int, int] | None:
    c = classify_loop(w, space.surface)
    if not c.essential:
        return None
    return (c.p, c.q) if c.kind == "torus" else (0, 0)


def _eval_python(space: StateSpace) -> Counter:
    n = space.n
    npts = 4 * n
    mate = space.mate.tolist()
    weight = [tuple(w) for w in space.weight.tolist()]
    r = space.weight.shape[1]
    c = len(space.cl_index)
    abits = space.cl_abit.tolist()
    counts: Counter = Counter()
    conn = [0] * n
    for row, v in zip(space.pre_rows.tolist(), space.pre_v.tolist()):
        for i, b in zip(space.pre_index, row):
            conn[i] = b
        for bits in range(1 << c):
            a = 0
            for j, i in enumerate(space.cl_index):
                if bits >> j & 1:
                    conn[i] = abits[j]
                    a += 1
                else:
                    conn[i] = 1 - abits[j]
            seen = bytearray(npts)
            n_null, classes = 0, []
            for st in range(npts):
                if seen[st]:
                    continue
                p = st
                w = [0] * r
                while True:
                    seen[p] = 1
                    q = mate[p]
                    seen[q] = 1
                    for t in range(r):
                        w[t] += weight[p][t]
                    s = q & 3
                    p = q - s + ((3 - s) if conn[q >> 2] else (s ^ 1))
                    if p == st:
                        break
                cls = _classify_sum(space, w) if r else None
                if cls is None:
                    n_null += 1
                else:
                    classes.append(cls)
            counts[_key_for(space, 2 * a - c, v, n_null, classes)] += 1
    return counts


def _eval_chunk(space: StateSpace, start: int, stop: int) -> Counter:
    """Vectorized evaluation of states ``start..stop``.

    Crossings are smoothed one at a time for all states at once.  Each state
    keeps, for every unconsumed point, the far end of its open arc and the tag
    sum along that arc; joining two points either splices two arcs or closes
    a loop, which is classified on the spot.
    """
    n = space.n
    npts = 4 * n
    c = len(space.cl_index)
    g = np.arange(start, stop, dtype=np.int64)
    row = g >> c
    cl = g & ((1 << c) - 1)
    S = len(g)
    bits = np.zeros((S, n), dtype=np.int64)
    if space.pre_index:
        bits[:, list(space.pre_index)] = space.pre_rows[row]
    a_count = np.zeros(S, dtype=np.int64)
    for j, i in enumerate(space.cl_index):
        bit = (cl >> j) & 1
        a_count += bit
        bits[:, i] = np.where(bit == 1, space.cl_abit[j], 1 - space.cl_abit[j])
    r = space.weight.shape[1]
    offs = np.arange(S, dtype=np.int64) * npts
    far = (np.broadcast_to(space.mate, (S, npts)) + offs[:, None]).ravel().copy()
    wts = [np.broadcast_to(space.weight[:, t], (S, npts)).ravel().copy() for t in range(r)]
    n_null = np.zeros(S, dtype=np.int64)
    k = np.zeros(S, dtype=np.int64)
    pp = np.zeros(S, dtype=np.int64)
    qq = np.zeros(S, dtype=np.int64)
    for i in range(n):
        bit = bits[:, i]
        base = offs + 4 * i
        # bit 0 joins (0,1),(2,3); bit 1 joins (0,3),(1,2)
        for a, b in ((base, base + np.where(bit == 1, 3, 1)),
                     (base + np.where(bit == 1, 1, 2), base + np.where(bit == 1, 2, 3))):
            x, y = far[a], far[b]
            closed = x == b
            loop_w = [w[b] for w in wts]
            joined = [w[x] + w[b] for w in wts]
            far[x], far[y] = y, x
            for w, nw in zip(wts, joined):
                w[x], w[y] = nw, -nw
            if r == 0:
                n_null += closed
                continue
            if r == 1:
                w0 = loop_w[0]
                if np.any(closed & (np.abs(w0) >= 2)):
                    bad = int(w0[closed & (np.abs(w0) >= 2)][0])
                    raise LoopError(f"loop winds {bad} times around the annulus")
                ess = closed & (w0 != 0)
                k += ess
                n_null += closed & ~ess
                continue
            wp, wq = loop_w
            ess = closed & ((wp != 0) | (wq != 0))
            n_null += closed & ~ess
            if not ess.any():
                continue
            if np.any(ess & (np.gcd(wp, wq) != 1)):
                j = int(np.argmax(ess & (np.gcd(wp, wq) != 1)))
                raise LoopError(f"loop class ({wp[j]},{wq[j]}) is not primitive")
            flip = (wq < 0) | ((wq == 0) & (wp < 0))
            cp = np.where(flip, -wp, wp)
            cq = np.where(flip, -wq, wq)
            if np.any(ess & (k > 0) & ((cp != pp) | (cq != qq))):
                raise LoopError("state mixes two essential classes")
            pp = np.where(ess, cp, pp)
            qq = np.where(ess, cq, qq)
            k += ess
    if space.free_classes:
        fc = space.free_classes
        if len(set(fc)) > 1:
            raise LoopError("state mixes two essential classes")
        fp, fq = fc[0] if space.surface is Surface.TORUS else (0, 0)
        if space.surface is Surface.TORUS and np.any((k > 0) & ((pp != fp) | (qq != fq))):
            raise LoopError("state mixes two essential classes")
        pp = np.full(S, fp, dtype=np.int64)
        qq = np.full(S, fq, dtype=np.int64)
        k = k + len(fc)
    aexp = 2 * a_count - c
    v = space.pre_v[row]
    m = len(space.pre_index)
    keys = np.stack([aexp, v, m - v, n_null + space.free_null, k, pp, qq], axis=1)
    uniq, cnt = np.unique(keys, axis=0, return_counts=True)
    return Counter({tuple(int(x) for x in u): int(c_) for u, c_ in zip(uniq, cnt)})


def _chunks(space: StateSpace) -> list[tuple[int, int]]:
    total = space.size
    return [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]


def _run_chunk(args) -> Counter:
    space, start, stop = args
    return _eval_chunk(space, start, stop)


def state_counts(d: Diagram, threads: int = 1, max_crossings: int = DEFAULT_MAX_CROSSINGS,
                 engine: str = "auto") -> Counter:
    """Multiplicities of (a-b, v, h, n_null, k, p, q) over all states."""
    if d.n_crossings > max_crossings:
        raise CrossingCapError(f"{d.n_crossings} crossings exceed the cap of {max_crossings}")
    space = compile_state_space(d)
    if engine == "python" or (engine == "auto" and space.n <= PYTHON_ENGINE_LIMIT):
        return _eval_python(space)
    jobs = [(space, s, t) for s, t in _chunks(space)]
    total: Counter = Counter()
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_run_chunk, jobs):
                total.update(part)
    else:
        for job in jobs:
            total.update(_run_chunk(job))
    return total


def _check_variant(d: Diagram, variant: Variant) -> None:
    if variant.surface is not d.surface:
        raise DiagramError(f"variant {variant.value} needs a {variant.surface.value} diagram, "
                           f"got {d.surface.value}")


def bracket(d: Diagram, variant=None, threads: int = 1,
            max_crossings: int = DEFAULT_MAX_CROSSINGS, engine: str = "auto") -> Poly:
    variant = Variant(variant) if variant is not None else default_variant(d)
    _check_variant(d, variant)
    return _assemble(state_counts(d, threads, max_crossings, engine), variant)


def default_variant(d: Diagram) -> Variant:
    return {Surface.PLANE: Variant.PLANAR, Surface.ANNULUS: Variant.ANNULAR,
            Surface.TORUS: Variant.TOROIDAL}[d.surface]


def normalize(p: Poly, w: int) -> Poly:
    """Substitute H = 1 - V d and multiply by (-A^-3)^w."""
    sub = P.substitute(p, "H", 1 - P.V * P.d_const())
    return sub * (-(P.A ** -3)) ** w


def normalized_bracket(d: Diagram, variant=None, threads: int = 1,
                       max_crossings: int = DEFAULT_MAX_CROSSINGS) -> Poly:
    return normalize(bracket(d, variant, threads, max_crossings), writhe(d))


# diagram-level smoothing and the recursive skein oracle

def _pairing(bit: int) -> tuple[tuple[int, int], tuple[int, int]]:
    return ((0, 3), (1, 2)) if bit else ((0, 1), (2, 3))


def _smooth(d: Diagram, cid: int, bit: int) -> Diagram:
    inc = incoming_slots(d, cid)
    coherent_bit = 1 if inc in ([0, 1], [2, 3]) else 0
    anchor = d.end_at((cid, inc[0]))[0]
    out, where = reconnect(d, {cid: _pairing(bit)})
    if bit == coherent_bit:
        return out
    new_id, same = where[anchor]
    if new_id is None:
        return out
    if not same:
        edges = [e.reversed() if e.id == new_id else e for e in out.edges]
        out = make_diagram(out.surface, out.crossings, edges, out.free_loops)
    return orient_from(out, new_id)


def smooth_classical(d: Diagram, cid: int, choice: str) -> Diagram:
    c = d.crossing(cid)
    if c.kind != CLASSICAL:
        raise DiagramError(f"crossing {cid} is not classical")
    if choice not in ("A", "B"):
        raise DiagramError(f"classical smoothing must be A or B, got {choice!r}")
    abit = 1 - c.over
    return _smooth(d, cid, abit if choice == "A" else 1 - abit)


def smooth_precrossing(d: Diagram, cid: int, choice: str) -> Diagram:
    c = d.crossing(cid)
    if c.kind != PRE:
        raise DiagramError(f"crossing {cid} is not a precrossing")
    if choice not in ("V", "H"):
        raise DiagramError(f"precrossing smoothing must be V or H, got {choice!r}")
    inc = incoming_slots(d, cid)
    coherent_bit = 1 if inc in ([0, 1], [2, 3]) else 0
    return _smooth(d, cid, coherent_bit if choice == "V" else 1 - coherent_bit)


def bracket_recursive(d: Diagram, variant=None, classical_order=None) -> Poly:
    """Skein-tree evaluation on whole diagrams; an independent route to :func:`bracket`.

    Precrossings go first in ascending id order; ``classical_order`` fixes
    the order of the classical crossings (ascending id by default).
    """
    variant = Variant(variant) if variant is not None else default_variant(d)
    _check_variant(d, variant)
    order = d.precrossings() + list(classical_order if classical_order is not None
                                    else d.classical_crossings())
    total = Poly()

    def rec(dd: Diagram, k: int, coeffs: tuple[int, int, int, int]) -> None:
        nonlocal total
        if k == len(order):
            total = total + state_value(dd, coeffs, variant)
            return
        cid = order[k]
        a, b, v, h = coeffs
        if dd.crossing(cid).is_pre:
            rec(smooth_precrossing(dd, cid, "V"), k + 1, (a, b, v + 1, h))
            rec(smooth_precrossing(dd, cid, "H"), k + 1, (a, b, v, h + 1))
        else:
            rec(smooth_classical(dd, cid, "A"), k + 1, (a + 1, b, v, h))
            rec(smooth_classical(dd, cid, "B"), k + 1, (a, b + 1, v, h))

    rec(d, 0, (0, 0, 0, 0))
    return total


# torus classes and specializations

def braid_closure(word, n_strands: int, surface="annulus", kinds=None, first_id: int = 0) -> Diagram:
    """Closed braid diagram.  ``word`` holds signed generators ``±i`` (1-based);
    ``kinds`` optionally marks generators as 'pre'.  Strands run downward; on
    the annulus (or torus, second tag) each closing arc carries winding 1."""
    surface = Surface(surface)
    kinds = list(kinds) if kinds is not None else [CLASSICAL] * len(word)
    crossings, edges = [], []
    open_end: list = [None] * n_strands
    first_in: list = [None] * n_strands
    eid = 0
    zero = (0,) * surface.arity

    def connect(pos: int, head):
        nonlocal eid
        if open_end[pos] is None:
            first_in[pos] = head
        else:
            edges.append(Edge(eid, open_end[pos], head, zero))
            eid += 1

    for t, (g, kind) in enumerate(zip(word, kinds)):
        i = abs(g) - 1
        if not 0 <= i < n_strands - 1:
            raise DiagramError(f"generator {g} out of range for {n_strands} strands")
        cid = first_id + t
        # slot 0 bottom-right, 1 top-right, 2 top-left, 3 bottom-left
        if kind == PRE:
            crossings.append(Crossing(cid, PRE))
        else:
            crossings.append(Crossing(cid, CLASSICAL, 1 if g > 0 else 0))
        connect(i, (cid, 2))
        connect(i + 1, (cid, 1))
        open_end[i], open_end[i + 1] = (cid, 3), (cid, 0)
    closing = {Surface.PLANE: (), Surface.ANNULUS: (1,), Surface.TORUS: (0, 1)}[surface]
    loops = []
    for pos in range(n_strands):
        if open_end[pos] is None:
            loops.append(FreeLoop(closing))
        else:
            edges.append(Edge(eid, open_end[pos], first_in[pos], closing))
            eid += 1
    return make_diagram(surface, crossings, edges, loops)


def torus_class_diagram(p: int, q: int, k: int, target="annulus") -> Diagram:
    if k < 1 or (p, q) != P.canonical_pq(p, q):
        raise P.PolyError(f"({p},{q}) with k={k} is not a canonical torus class")
    target = Surface(target)
    if target not in (Surface.ANNULUS, Surface.PLANE):
        raise DiagramError("torus classes are realized on the annulus or the plane")
    if q == 0:
        zero = (0,) * target.arity
        return make_diagram(target, [], [], [FreeLoop(zero) for _ in range(k)])
    n = k * q
    word = list(range(1, n)) * abs(k * p)
    if p < 0:
        word = [-g for g in word]
    return braid_closure(word, n, target)


def specialize_annular_to_planar(p: Poly) -> Poly:
    def fn(m):
        rest, s_exp = [], 0
        for v, e in m:
            if v.name == "s":
                s_exp = e
            elif v.name in ("A", "V", "H"):
                rest.append((v, e))
            else:
                raise P.PolyError(f"variable {v} is not annular")
        out = Poly({P._mono(rest): 1})
        return out * _d_pow(s_exp - 1) if s_exp else out
    return P.map_monomials(p, fn)


def specialize_toroidal(p: Poly, target="annulus") -> Poly:
    target = Surface(target)
    variant = Variant.ANNULAR if target is Surface.ANNULUS else Variant.PLANAR
    cache: dict = {}

    def fn(m):
        rest, out = [], Poly.const(1)
        for v, e in m:
            if v.name in ("A", "V", "H"):
                rest.append((v, e))
            elif v.name == "s_pq":
                key = (v.p, v.q, e)
                if key not in cache:
                    if target is Surface.ANNULUS and (v.p, v.q) == (0, 1):
                        cache[key] = Poly.var("s", e)
                    elif (v.p, v.q) in ((1, 0), (0, 1)):
                        cache[key] = _d_pow(e - 1)
                    else:
                        cache[key] = bracket(torus_class_diagram(v.p, v.q, e, target), variant)
                out = out * cache[key]
            else:
                raise P.PolyError(f"variable {v} cannot be specialized")
        return Poly({P._mono(rest): 1}) * out
    return P.map_monomials(p, fn)


def universal_to_plain(p: Poly) -> Poly:
    """s_k -> s^k and s_{p,q,k} -> s_{p,q}^k."""
    def fn(m):
        items = []
        for v, e in m:
            if v.name == "s_k":
                items.append((Var("s"), v.k * e))
            elif v.name == "s_pqk":
                items.append((Var("s_pq", v.p, v.q), v.k * e))
            else:
                items.append((v, e))
        return Poly({P._mono(items): 1})
    return P.map_monomials(p, fn)


def toroidal_to_reduced(p: Poly) -> Poly:
    """s_{p,q} -> x^p y^q."""
    def fn(m):
        items = []
        for v, e in m:
            if v.name == "s_pq":
                items += [(Var("x"), v.p * e), (Var("y"), v.q * e)]
            else:
                items.append((v, e))
        return Poly({P._mono(items): 1})
    return P.map_monomials(p, fn)
