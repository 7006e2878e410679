"""Regenerate the fixture documents shipped in src/pseudolinks/fixtures."""
from __future__ import annotations

import json
from pathlib import Path

from pseudolinks.bracket import braid_closure
from pseudolinks.diagram import Crossing, Edge, FreeLoop, make_diagram, reverse_component, to_document
from pseudolinks.generate import random_diagram
from pseudolinks.moves import EXPAND, MoveKind, apply_move, find_sites

OUT = Path(__file__).resolve().parents[1] / "src" / "pseudolinks" / "fixtures"
TREFOIL_KINDS = ["pre", "pre", "classical"]


def torus_trefoil_right():
    crossings = [Crossing(0, "pre"), Crossing(1, "pre")]
    edges = [Edge(0, (0, 0), (1, 0), (-1, -1)), Edge(1, (1, 2), (0, 3), (0, 0)),
             Edge(2, (0, 1), (1, 1), (0, -1)), Edge(3, (1, 3), (0, 2), (0, 0))]
    return make_diagram("torus", crossings, edges, [])


def torus_pair():
    edges = [Edge(0, (0, 0), (0, 2), (1, 0)), Edge(1, (0, 1), (0, 3), (0, 1))]
    return make_diagram("torus", [Crossing(0, "pre")], edges, [])


def kink():
    loop = make_diagram("plane", [], [], [FreeLoop(())])
    site = find_sites(loop, MoveKind("R1+", EXPAND))[0]
    return apply_move(loop, site)


def build() -> dict[str, tuple[str, object]]:
    pair = torus_pair()
    out = {
        "pseudo_trefoil": ("Planar pseudo trefoil: closed 2-braid with two precrossings and one "
                           "classical crossing.", braid_closure([1, 1, 1], 2, "plane", TREFOIL_KINDS)),
        "annular_pseudo_trefoil": ("Pseudo trefoil as a closed 2-braid around the annulus core.",
                                   braid_closure([1, 1, 1], 2, "annulus", TREFOIL_KINDS)),
        "torus_trefoil_left": ("Pseudo trefoil on the torus that stays inside an annulus: closed "
                               "2-braid winding along the second cut curve.",
                               braid_closure([1, 1, 1], 2, "torus", TREFOIL_KINDS)),
        "torus_trefoil_right": ("Two-precrossing pseudo knot on the torus whose states are a "
                                "(1,2) curve or a (1,0) curve.", torus_trefoil_right()),
        "torus_pair_coherent": ("A (1,0) curve and a (0,1) curve meeting in one precrossing.", pair),
        "torus_pair_reversed": ("The same pair with the (0,1) curve reversed.",
                                reverse_component(pair, 1)),
        "classical_trefoil": ("Classical trefoil as a closed positive 2-braid.",
                              braid_closure([1, 1, 1], 2, "plane")),
        "figure_eight": ("Classical figure-eight knot as a closed 3-braid.",
                         braid_closure([1, -2, 1, -2], 3, "plane")),
        "kink": ("Unknot with one positive kink.", kink()),
        "annular_essential_loop": ("Crossing-free loop around the annulus core.",
                                   make_diagram("annulus", [], [], [FreeLoop((1,))])),
        "torus_hopf_pre": ("Closed 2-braid on the torus with one precrossing and one classical "
                           "crossing.", braid_closure([1, 1], 2, "torus", ["pre", "classical"])),
    }
    for surface, seed, n, n_pre in [("plane", 3, 5, 2), ("annulus", 5, 5, 2), ("annulus", 8, 6, 3),
                                    ("torus", 11, 4, 2), ("torus", 13, 6, 2)]:
        name = f"random_{surface}_{n}_{seed}"
        out[name] = (f"Random {surface} diagram with {n} crossings, {n_pre} of them precrossings "
                     f"(generator seed {seed}).", random_diagram(surface, n, n_pre, seed))
    return out


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, (text, d) in build().items():
        doc = {"description": text, **to_document(d)}
        (OUT / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n")
        print(name, d.n_crossings)


if __name__ == "__main__":
    main()
