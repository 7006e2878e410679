"""Seeded diagram generators."""
from __future__ import annotations

import random

from .bracket import DEFAULT_MAX_CROSSINGS, braid_closure
from .diagram import CLASSICAL, PRE, Crossing, Diagram, FreeLoop, Surface, make_diagram
from .moves import EXPAND, SLIDE, MoveKind, apply_move, find_sites
from .surgery import gauge

START_CLASSES = {
    Surface.PLANE: [()],
    Surface.ANNULUS: [(0,), (1,)],
    Surface.TORUS: [(0, 0), (1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2)],
}

_KINK = MoveKind("R1+", EXPAND)
_POKE = MoveKind("R2", EXPAND)
_FLIP = MoveKind("R3", SLIDE)


def random_diagram(surface, n_crossings: int, n_pre: int, seed: int,
                   max_crossings: int = DEFAULT_MAX_CROSSINGS) -> Diagram:
    """A valid diagram with ``n_crossings`` crossings, ``n_pre`` of them
    precrossings.  The underlying curve is grown from one embedded loop by
    kinks, pokes and triangle flips, so it always lies on the surface; crossing
    kinds and over strands are then drawn at random and tags are spread with a
    random crossing potential."""
    surface = Surface(surface)
    if n_crossings < 0 or not 0 <= n_pre <= n_crossings:
        raise ValueError("need 0 <= n_pre <= n_crossings")
    if n_crossings > max_crossings:
        raise ValueError(f"{n_crossings} crossings exceeds the cap of {max_crossings}")
    rng = random.Random(seed)
    start = rng.choice(START_CLASSES[surface])
    d = make_diagram(surface, [], [], [FreeLoop(start)])
    while d.n_crossings < n_crossings:
        room = n_crossings - d.n_crossings
        kind = _POKE if room >= 2 and rng.random() < 0.7 else _KINK
        sites = find_sites(d, kind)
        if not sites:
            kind, sites = _KINK, find_sites(d, _KINK)
        d = apply_move(d, rng.choice(sites))
        flips = find_sites(d, _FLIP)
        if flips and rng.random() < 0.5:
            d = apply_move(d, rng.choice(flips))
    if surface != Surface.PLANE and d.crossings:
        potential = {c.id: tuple(rng.randint(-1, 1) for _ in range(d.arity)) for c in d.crossings}
        d = gauge(d, potential)
    ids = [c.id for c in d.crossings]
    pres = set(rng.sample(ids, n_pre))
    crossings = [Crossing(c, PRE) if c in pres else Crossing(c, CLASSICAL, rng.randint(0, 1))
                 for c in ids]
    return make_diagram(surface, crossings, d.edges, d.free_loops)


def random_braid_closure(seed: int, max_crossings: int = 10, surface="plane",
                         pre_fraction: float = 0.0) -> Diagram:
    """Closure of a random braid word on 2 to 4 strands."""
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    length = rng.randint(1, max_crossings)
    word = [rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)]
    kinds = [PRE if rng.random() < pre_fraction else CLASSICAL for _ in word]
    return braid_closure(word, n, surface, kinds)
