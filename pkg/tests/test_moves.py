import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import diagrams
from pseudolinks.bracket import bracket, normalized_bracket
from pseudolinks.diagram import FreeLoop, canonical_form, make_diagram, validate, writhe
from pseudolinks.fixtures import load_fixture
from pseudolinks.moves import (EXPAND, FULL, KINKS, REDUCE, REGULAR, SLIDE, Frozen, MoveKind, MoveSite,
                               StaleSiteError, apply_move, find_sites, random_walk)
from pseudolinks.poly import A

ALL_KINDS = sorted(FULL, key=str)


def test_kink_has_one_reduce_site():
    d = load_fixture("kink")
    sites = [s for k in KINKS if k.direction == REDUCE for s in find_sites(d, k)]
    assert len(sites) == 1
    assert apply_move(d, sites[0]).n_crossings == 0


def test_free_loop_has_no_triangles():
    d = make_diagram("plane", [], [], [FreeLoop(())])
    assert find_sites(d, MoveKind("R3", SLIDE)) == []
    assert find_sites(d, MoveKind("PR3", SLIDE)) == []


def test_poke_then_reduce():
    d = load_fixture("kink")
    pokes = find_sites(d, MoveKind("R2", EXPAND))
    assert pokes
    two = apply_move(d, pokes[0])
    assert two.n_crossings == 3 and validate(two) == []
    assert len(find_sites(two, MoveKind("R2", REDUCE))) >= 1


def test_pr1_expand_adds_a_precrossing():
    d = load_fixture("classical_trefoil")
    site = find_sites(d, MoveKind("PR1", EXPAND))[0]
    out = apply_move(d, site)
    assert len(out.precrossings()) == 1 and out.n_crossings == 4


def test_three_positive_kinks():
    d = make_diagram("plane", [], [], [FreeLoop(())])
    kind = MoveKind("R1+", EXPAND)
    for _ in range(3):
        d = apply_move(d, find_sites(d, kind)[0])
    assert d.n_crossings == 3 and writhe(d) == 3
    assert bracket(d) == (-A ** 3) ** 3


def test_zero_steps_is_identity():
    d = load_fixture("pseudo_trefoil")
    res = random_walk(d, seed=1, steps=0)
    assert res.diagram == d and res.trace == [] and res.complete


def test_walk_is_deterministic():
    d = load_fixture("torus_trefoil_right")
    one = random_walk(d, seed=42, steps=10, allowed=FULL, max_crossings=8)
    two = random_walk(d, seed=42, steps=10, allowed=FULL, max_crossings=8)
    assert one.trace_json() == two.trace_json() and one.diagram == two.diagram


def test_walk_respects_crossing_cap():
    d = load_fixture("pseudo_trefoil")
    res = random_walk(d, seed=3, steps=30, allowed=FULL, max_crossings=5)
    assert res.diagram.n_crossings <= 5


def test_invalid_move_kind():
    with pytest.raises(ValueError):
        MoveKind("R3", EXPAND)
    with pytest.raises(ValueError):
        random_walk(load_fixture("kink"), 0, -1)


def test_stale_site():
    d = load_fixture("kink")
    site = find_sites(d, MoveKind("R1+", REDUCE))[0]
    gone = apply_move(d, site)
    with pytest.raises(StaleSiteError):
        apply_move(gone, site)
    with pytest.raises(StaleSiteError):
        apply_move(d, MoveSite(MoveKind("R2", REDUCE), (99, 98)))


def test_site_json():
    site = find_sites(load_fixture("kink"), MoveKind("R1+", REDUCE))[0]
    j = site.to_json()
    assert j["kind"] == "R1+" and j["direction"] == REDUCE and isinstance(j["location"], list)


@given(diagrams(max_crossings=4), st.sampled_from(ALL_KINDS), st.integers(0, 50))
def test_single_move_keeps_validity_and_invariant(d, kind, pick):
    sites = find_sites(d, kind)
    if not sites:
        return
    out = apply_move(d, sites[pick % len(sites)])
    assert validate(out) == []
    assert normalized_bracket(out) == normalized_bracket(d)
    if kind in REGULAR:
        assert bracket(out) == bracket(d)
        assert writhe(out) == writhe(d)
    elif kind.name == "PR1":
        assert writhe(out) == writhe(d)
    else:
        step = 1 if kind.direction == EXPAND else -1
        sign = 1 if kind.name == "R1+" else -1
        assert writhe(out) == writhe(d) + step * sign


@given(diagrams(max_crossings=4), st.integers(0, 10**6))
def test_walk_keeps_normalized_bracket(d, seed):
    res = random_walk(d, seed, 6, allowed=FULL, max_crossings=8)
    assert validate(res.diagram) == []
    assert normalized_bracket(res.diagram) == normalized_bracket(d)


@given(diagrams(max_crossings=4), st.integers(0, 10**6))
def test_regular_walk_keeps_bracket(d, seed):
    res = random_walk(d, seed, 6, allowed=REGULAR, max_crossings=8)
    assert bracket(res.diagram) == bracket(d)


@given(diagrams(max_crossings=4), st.sampled_from([k for k in ALL_KINDS if k.direction == EXPAND]),
       st.integers(0, 50))
def test_expansion_can_be_undone(d, kind, pick):
    sites = find_sites(d, kind)
    if not sites:
        return
    out = apply_move(d, sites[pick % len(sites)])
    back = [apply_move(out, s) for s in find_sites(out, MoveKind(kind.name, REDUCE))]
    assert canonical_form(d) in {canonical_form(b) for b in back}


@given(diagrams(max_crossings=5), st.sampled_from([k for k in ALL_KINDS if k.direction == SLIDE]),
       st.integers(0, 50))
def test_slide_can_be_undone(d, kind, pick):
    sites = find_sites(d, kind)
    if not sites:
        return
    out = apply_move(d, sites[pick % len(sites)])
    back = [apply_move(out, s) for s in find_sites(out, kind)]
    assert canonical_form(d) in {canonical_form(b) for b in back}


@given(diagrams(max_crossings=5), st.integers(0, 10**6))
def test_frozen_parts_are_untouched(d, seed):
    if not d.crossings:
        return
    # freeze half the crossings and the edges running between them
    keep = frozenset(c.id for c in d.crossings[: (len(d.crossings) + 1) // 2])
    edges = frozenset(e.id for e in d.edges if e.tail[0] in keep and e.head[0] in keep)
    res = random_walk(d, seed, 6, allowed=FULL, max_crossings=8, frozen=Frozen(keep, edges))
    before = {e.id: e for e in d.edges if e.id in edges}
    after = {e.id: e for e in res.diagram.edges if e.id in edges}
    assert after == before
    assert {c.id for c in res.diagram.crossings} >= keep
