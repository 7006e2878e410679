from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import diagrams
from oracles import a_only, classical_bracket, classical_loop_counts
from pseudolinks.bracket import (CrossingCapError, LoopClass, LoopError, Variant, bracket,
                                 bracket_recursive, braid_closure, classify_loop, normalize,
                                 normalized_bracket, smooth_classical, smooth_precrossing,
                                 specialize_annular_to_planar, specialize_toroidal, state_counts,
                                 state_value, torus_class_diagram, toroidal_to_reduced,
                                 universal_to_plain)
from pseudolinks.diagram import (Crossing, DiagramError, FreeLoop, forget_tags, make_diagram,
                                 reverse_component, to_document, writhe)
from pseudolinks.fixtures import fixture_names, load_fixture
from pseudolinks.generate import random_braid_closure, random_diagram
from pseudolinks.poly import A, H, S, V, X, Y, Poly, d_const, s_k, s_pq, substitute

D = d_const()


def spq(p, q):
    return Poly.var(s_pq(p, q))


def loops_after(d, choices):
    for cid, ch in choices:
        d = smooth_classical(d, cid, ch) if ch in "AB" else smooth_precrossing(d, cid, ch)
    assert not d.crossings
    return d


def test_kink_smoothings_give_one_and_two_loops():
    d = load_fixture("kink")
    (cid,) = [c.id for c in d.crossings]
    counts = sorted(len(loops_after(d, [(cid, ch)]).free_loops) for ch in "AB")
    assert counts == [1, 2]


def test_classical_trefoil_state_loop_counts():
    d = load_fixture("classical_trefoil")
    ids = [c.id for c in d.crossings]
    got = []
    for mask in range(8):
        choice = [(cid, "A" if mask >> i & 1 else "B") for i, cid in enumerate(ids)]
        got.append(len(loops_after(d, choice).free_loops))
    assert Counter(got) == Counter([3, 2, 2, 2, 1, 1, 1, 2])
    assert Counter(n for _, n in classical_loop_counts(to_document(d))) == Counter(got)


def test_precrossing_smoothings_of_crossed_torus_curves():
    d = load_fixture("torus_pair_coherent")
    v = loops_after(d, [(0, "V")])
    h = loops_after(d, [(0, "H")])
    assert [classify_loop(f.tags, "torus") for f in v.free_loops] == [LoopClass("torus", 1, 1)]
    assert [classify_loop(f.tags, "torus") for f in h.free_loops] == [LoopClass("torus", -1, 1)]


def test_independent_precrossings_commute():
    d = braid_closure([1, 1, 1], 2, "plane", ["pre", "classical", "pre"])
    one = loops_after(d, [(0, "V"), (2, "V"), (1, "A")])
    two = loops_after(d, [(2, "V"), (0, "V"), (1, "A")])
    assert len(one.free_loops) == len(two.free_loops)


def test_smoothing_kind_errors():
    d = load_fixture("pseudo_trefoil")
    pre, cl = d.precrossings()[0], d.classical_crossings()[0]
    with pytest.raises(DiagramError):
        smooth_classical(d, pre, "A")
    with pytest.raises(DiagramError):
        smooth_precrossing(d, cl, "V")


def test_classify_loop():
    assert classify_loop((0, 0), "torus") == LoopClass("null")
    assert classify_loop((-1, -1), "torus") == LoopClass("torus", 1, 1)
    assert classify_loop((-1, 0), "torus") == LoopClass("torus", 1, 0)
    assert classify_loop((1,), "annulus").essential
    assert classify_loop((), "plane") == LoopClass("null")
    with pytest.raises(LoopError):
        classify_loop((2, 0), "torus")
    with pytest.raises(LoopError):
        classify_loop((2,), "annulus")


def test_state_values():
    one_null = make_diagram("plane", [], [], [FreeLoop(())])
    assert state_value(one_null, (0, 0, 0, 0), "planar") == Poly.const(1)
    mixed = make_diagram("torus", [], [], [FreeLoop((1, 0)), FreeLoop((0, 0))])
    assert state_value(mixed, (0, 0, 1, 1), "toroidal") == V * H * D * spq(1, 0)
    two = make_diagram("annulus", [], [], [FreeLoop((1,)), FreeLoop((-1,))])
    assert state_value(two, (3, 0, 2, 0), "annular") == V ** 2 * S ** 2 * A ** 3
    assert state_value(two, (0, 0, 0, 0), "annular_universal") == Poly.var(s_k(2))
    with pytest.raises(LoopError):
        state_value(make_diagram("torus", [], [], [FreeLoop((1, 0)), FreeLoop((0, 1))]), (0, 0, 0, 0),
                    "toroidal")
    with pytest.raises(LoopError):
        state_value(make_diagram("annulus", [], [], [FreeLoop((1,))]), (0, 0, 0, 0), "planar")


def test_reduced_state_value():
    st_ = make_diagram("torus", [], [], [FreeLoop((1, 2)), FreeLoop((-1, -2))])
    assert state_value(st_, (0, 0, 0, 0), "toroidal_reduced") == X ** 2 * Y ** 4


def test_planar_pseudo_trefoil():
    want = -V ** 2 * A ** 3 - V * H * A ** -3 + V * H * A ** -1 - H ** 2 * A ** -3 + V * H * A ** -5
    assert bracket(load_fixture("pseudo_trefoil"), "planar") == want


def test_right_torus_trefoil():
    k = V * H * (1 - A ** 2 - A ** -2) + H ** 2
    d = load_fixture("torus_trefoil_right")
    assert bracket(d, "toroidal") == V ** 2 * spq(1, 2) + k * spq(1, 0)
    assert bracket(d, "toroidal_reduced") == V ** 2 * X * Y ** 2 + k * X


def test_orientation_pair():
    l1, l2 = load_fixture("torus_pair_coherent"), load_fixture("torus_pair_reversed")
    assert bracket(l1) == V * spq(1, 1) + H * spq(-1, 1)
    assert bracket(l2) == V * spq(-1, 1) + H * spq(1, 1)
    assert bracket(reverse_component(l1, 1)) == bracket(l2)


def test_normalized_examples():
    d = load_fixture("pseudo_trefoil")
    w = writhe(d)
    assert w == 1
    want = substitute(bracket(d), "H", 1 - V * D) * (-A ** -3) ** w
    assert normalized_bracket(d) == want
    assert normalized_bracket(load_fixture("kink")) == Poly.const(1)
    # writhe-zero diagram: normalization is the substitution alone
    fig8 = load_fixture("figure_eight")
    assert writhe(fig8) == 0 and normalized_bracket(fig8) == bracket(fig8)


def test_classical_trefoil_normalized_against_oracle():
    d = load_fixture("classical_trefoil")
    oracle = classical_bracket(to_document(d))
    assert a_only(bracket(d)) == oracle
    want = sum((c * A ** e for e, c in oracle.items()), Poly.const(0)) * (-A ** -3) ** 3
    assert normalized_bracket(d) == want


def test_variant_surface_mismatch():
    with pytest.raises(DiagramError):
        bracket(load_fixture("pseudo_trefoil"), "annular")


def test_crossing_cap():
    with pytest.raises(CrossingCapError):
        bracket(load_fixture("figure_eight"), max_crossings=3)


def test_torus_class_diagrams():
    d = torus_class_diagram(0, 1, 1, "annulus")
    assert d.n_crossings == 0 and bracket(d) == S
    assert torus_class_diagram(3, 2, 1, "annulus").n_crossings == 3
    assert bracket(torus_class_diagram(1, 0, 1, "annulus")) == Poly.const(1)
    with pytest.raises(ValueError):
        torus_class_diagram(-1, -1, 1, "annulus")


def test_specialize_annular_examples():
    assert specialize_annular_to_planar(S) == Poly.const(1)
    assert specialize_annular_to_planar(S ** 2) == D


def test_specialize_toroidal_examples():
    assert specialize_toroidal(spq(1, 0), "plane") == Poly.const(1)
    assert specialize_toroidal(spq(0, 1) ** 2, "annulus") == S ** 2
    want = bracket(torus_class_diagram(3, 2, 1, "annulus"), "annular")
    assert specialize_toroidal(spq(3, 2), "annulus") == want


def test_engines_agree_on_fixtures():
    for name in fixture_names():
        d = load_fixture(name)
        assert state_counts(d, engine="python") == state_counts(d, engine="numpy"), name


@given(diagrams(max_crossings=6))
def test_python_and_vector_engines_agree(d):
    assert state_counts(d, engine="python") == state_counts(d, engine="numpy")


@given(diagrams(max_crossings=5), st.randoms(use_true_random=False))
def test_resolution_order_does_not_matter(d, rnd):
    order = d.classical_crossings()
    rnd.shuffle(order)
    assert bracket_recursive(d, classical_order=order) == bracket(d)


@given(st.integers(0, 10**6), st.integers(1, 8))
def test_classical_reduction(seed, n):
    d = random_diagram("plane", n, 0, seed)
    p = bracket(d)
    assert not ({v.name for v in p.variables()} & {"V", "H"})
    assert a_only(p) == classical_bracket(to_document(d))


@given(st.integers(0, 10**6))
def test_classical_reduction_on_braid_closures(seed):
    d = random_braid_closure(seed, 8)
    assert a_only(bracket(d)) == classical_bracket(to_document(d))


@given(diagrams(surfaces=("annulus", "torus"), max_crossings=5))
def test_universal_refines_plain(d):
    if d.surface == "annulus":
        assert universal_to_plain(bracket(d, Variant.ANNULAR_UNIVERSAL)) == bracket(d, Variant.ANNULAR)
    else:
        assert universal_to_plain(bracket(d, Variant.TOROIDAL_UNIVERSAL)) == bracket(d, Variant.TOROIDAL)
        assert toroidal_to_reduced(bracket(d, Variant.TOROIDAL)) == bracket(d, Variant.TOROIDAL_REDUCED)


@given(diagrams(surfaces=("annulus",), max_crossings=5))
def test_annular_specializes_to_planar(d):
    assert specialize_annular_to_planar(bracket(d)) == bracket(forget_tags(d))


@given(diagrams(max_crossings=5))
def test_normalization_removes_h(d):
    p = normalized_bracket(d)
    assert "H" not in {v.name for v in p.variables()}
    assert p == normalize(bracket(d), writhe(d))


def test_threads_give_identical_results():
    d = random_diagram("torus", 14, 4, 5)
    one = bracket(d, threads=1)
    assert bracket(d, threads=2) == one


def test_all_precrossing_diagram_has_no_a_dependence():
    d = load_fixture("classical_trefoil")
    pre = make_diagram(d.surface, [Crossing(c.id, "pre") for c in d.crossings], d.edges, d.free_loops)
    assert writhe(pre) == 0
    names = {v.name for v in bracket(pre).variables()}
    assert names <= {"V", "H", "A"}
    assert all(dict((v.name, e) for v, e in m).get("A", 0) % 2 == 0 for m, _ in bracket(pre).items())
