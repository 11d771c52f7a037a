from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qldpc_gadgets.expansion import (
    BipartiteBoundaryGraph, ContractedGraph, ExhaustiveBoundError, augment_to_expander,
    boundary_cheeger, boundary_of, contracted_cheeger, gadget_cheeger,
)
from qldpc_gadgets.gadget import build_gadget, verify_gadget
from qldpc_gadgets.gb import SEED_NAMES, SUPPORTED_R, catalog_code

from .oracles import brute_boundary_cheeger, brute_cut_cheeger

EXPECTED_H = {
    (5, "x1"): Fraction(1), (5, "z1"): Fraction(1), (5, "x2"): Fraction(1), (5, "z2"): Fraction(1),
    (6, "x1"): Fraction(1), (6, "z1"): Fraction(1), (6, "x2"): Fraction(1), (6, "z2"): Fraction(1),
    (7, "x1"): Fraction(1, 2), (7, "z1"): Fraction(3, 7),
    (7, "x2"): Fraction(3, 7), (7, "z2"): Fraction(1, 2),
}


def cycle(n):
    return ContractedGraph(tuple(range(n)), tuple((i, (i + 1) % n) for i in range(n)))


def test_toy_graphs():
    r = contracted_cheeger(cycle(4))
    assert (r.numerator, r.denominator, r.witness) == (2, 2, (0, 1))
    r = contracted_cheeger(cycle(6))
    assert (r.numerator, r.denominator) == (2, 3) and r.witness == (0, 1, 2)
    k4 = ContractedGraph(tuple(range(4)), ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
    r = contracted_cheeger(k4)
    assert r.value == 2 and (r.numerator, r.denominator) == (4, 2)


def test_parallel_qubits():
    # two C-nodes both joining V-nodes a and b
    g = BipartiteBoundaryGraph((0, 1), (0, 1), ((0, 1), (0, 1)))
    assert boundary_of(g, [0]) == (0, 1)
    assert boundary_of(g, [0, 1]) == ()
    assert boundary_cheeger(g).value == 2


def test_single_vertex_uses_whole_set():
    g = BipartiteBoundaryGraph((0,), (0, 1), ((0, 1),))
    assert boundary_cheeger(g).value == 2
    assert contracted_cheeger(ContractedGraph((0,), ())).value == 0


def test_graph_validation():
    with pytest.raises(ValueError):
        ContractedGraph((0, 1), ((0, 0),))
    with pytest.raises(ValueError):
        BipartiteBoundaryGraph((0,), (0,), ((1,),))
    with pytest.raises(ValueError):
        ContractedGraph.from_bipartite(BipartiteBoundaryGraph((0, 1), (0,), ((0,), ())))


def test_exhaustive_bound():
    with pytest.raises(ExhaustiveBoundError):
        contracted_cheeger(cycle(12), bound=10)
    with pytest.raises(ExhaustiveBoundError):
        contracted_cheeger(cycle(41), bound=100)


@st.composite
def multigraphs(draw):
    nv = draw(st.integers(2, 9))
    pairs = st.tuples(st.integers(0, nv - 1), st.integers(0, nv - 1)).filter(lambda e: e[0] != e[1])
    return nv, draw(st.lists(pairs, max_size=18))


@given(multigraphs())
def test_cut_scan_matches_oracle(data):
    nv, edges = data
    res = contracted_cheeger(ContractedGraph(tuple(range(nv)), tuple(edges)))
    num, den = brute_cut_cheeger(nv, edges)
    assert res.value == Fraction(num, den)
    assert ContractedGraph(tuple(range(nv)), tuple(edges)).cut(res.witness) == res.numerator
    assert len(res.witness) == res.denominator and 2 * res.denominator <= nv


@given(multigraphs())
def test_boundary_equals_cut_on_degree_two_graphs(data):
    nv, edges = data
    inc = [[] for _ in range(nv)]
    for c, (a, b) in enumerate(edges):
        inc[a].append(c)
        inc[b].append(c)
    g = BipartiteBoundaryGraph(tuple(range(nv)), tuple(range(len(edges))), tuple(map(tuple, inc)))
    b = boundary_cheeger(g)
    c = contracted_cheeger(ContractedGraph.from_bipartite(g))
    assert (b.value, b.witness) == (c.value, c.witness)


@st.composite
def bipartite(draw):
    nv = draw(st.integers(2, 8))
    nc = draw(st.integers(1, 10))
    inc = draw(st.lists(st.lists(st.integers(0, nc - 1), max_size=5), min_size=nv, max_size=nv))
    return BipartiteBoundaryGraph(tuple(range(nv)), tuple(range(nc)), tuple(map(tuple, inc)))


@given(bipartite())
def test_boundary_scan_matches_oracle(g):
    res = boundary_cheeger(g)
    num, den = brute_boundary_cheeger(len(g.v_nodes), g.incidence)
    assert res.value == Fraction(num, den)
    assert len(boundary_of(g, res.witness)) == res.numerator


@pytest.mark.parametrize("r", [5, 6, 7])
@pytest.mark.parametrize("name", SEED_NAMES)
def test_catalogue_cheeger_constants(r, name):
    entry = catalog_code(r)
    g = build_gadget(entry.code, entry.seeds[name])
    assert g.num_chi <= 20
    b = gadget_cheeger(g)
    c = contracted_cheeger(ContractedGraph.from_gadget(g))
    assert b.value == c.value == EXPECTED_H[(r, name)]
    assert b.witness == c.witness


def test_r8_cheeger_constants():
    entry = catalog_code(8)
    for name in SEED_NAMES:
        assert gadget_cheeger(build_gadget(entry.code, entry.seeds[name])).value == Fraction(5, 13)


def test_greedy_augmentation_is_monotone_and_reaches_target():
    entry = catalog_code(7)
    g = build_gadget(entry.code, entry.seeds["x1"])
    res = augment_to_expander(g, 1, policy="greedy", code=entry.code)
    assert res.achieved_h >= 1
    assert res.history == sorted(res.history)
    assert res.history[-1] >= 1 and res.history[0] == Fraction(1, 2)
    assert verify_gadget(entry.code, res.gadget).passed


@pytest.mark.parametrize("name", SEED_NAMES)
def test_optimal_augmentation_r7(name):
    entry = catalog_code(7)
    g = build_gadget(entry.code, entry.seeds[name])
    res = augment_to_expander(g, 1, policy="optimal", code=entry.code)
    assert res.optimal
    assert len(res.added_edges) == 4 and res.added_qubit_count == 8
    assert res.achieved_h >= 1
    assert gadget_cheeger(res.gadget).value == res.achieved_h
    greedy = augment_to_expander(g, 1, policy="greedy")
    assert len(greedy.added_edges) >= len(res.added_edges)


def test_augmentation_arguments():
    entry = catalog_code(5)
    g = build_gadget(entry.code, entry.seeds["x1"])
    assert augment_to_expander(g, 1).added_edges == []
    with pytest.raises(ValueError):
        augment_to_expander(g, 0)
    with pytest.raises(ValueError):
        augment_to_expander(g, 1, policy="bogus")


@given(multigraphs(), st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2)]))
def test_optimal_never_worse_than_greedy_on_small_graphs(data, target):
    from qldpc_gadgets.expansion import _greedy, _optimal
    nv, edges = data
    g_added, _, _ = _greedy(nv, list(edges), target, 26)
    o_added, proven, _ = _optimal(nv, list(edges), target, 400, None)
    assert proven
    assert len(o_added) <= len(g_added)
    res = contracted_cheeger(ContractedGraph(tuple(range(nv)), tuple(list(edges) + o_added)))
    assert res.value >= target
