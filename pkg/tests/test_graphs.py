"""Graph core: bitmask sets, constructors, the edge cut, and text formats."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bruteforce
from domgame.graphs import (
    MAX_VERTICES,
    CapacityError,
    Graph,
    Graph6Error,
    PartialState,
    PathComponent,
    PathKind,
    VertexSet,
    build_from_spec,
    build_path,
    build_path_component,
    build_spider,
    builtin_state,
    cut_edge,
    disjoint_union,
    emit_edge_list,
    emit_graph6,
    parse_dominated,
    parse_edge_list,
    parse_graph6,
)


def pprime(n):
    return build_path_component(PathComponent(PathKind.PRIME, n))


def pdprime(n):
    return build_path_component(PathComponent(PathKind.DOUBLE_PRIME, n))


# --- VertexSet --------------------------------------------------------------


def test_vertex_set_basics():
    vs = VertexSet.from_ids([0, 3, 5])
    assert vs.ids() == (0, 3, 5)
    assert len(vs) == 3
    assert 3 in vs and 1 not in vs
    assert vs.to_csv() == "0,3,5"
    assert VertexSet.from_csv("0,3,5") == vs
    assert VertexSet.from_csv("") == VertexSet(0)
    assert not VertexSet(0)
    assert vs.complement(6).ids() == (1, 2, 4)


def test_vertex_set_rejects_negative():
    with pytest.raises(ValueError):
        VertexSet(-1)
    with pytest.raises(ValueError):
        VertexSet.from_ids([-2])
    with pytest.raises(ValueError):
        VertexSet.from_csv("1,x")


@given(
    a=st.sets(st.integers(0, 63)),
    b=st.sets(st.integers(0, 63)),
)
def test_vertex_set_matches_python_sets(a, b):
    va, vb = VertexSet.from_ids(a), VertexSet.from_ids(b)
    assert set((va | vb).ids()) == a | b
    assert set((va & vb).ids()) == a & b
    assert set((va - vb).ids()) == a - b
    assert va.issubset(vb) == (a <= b)
    assert va.isdisjoint(vb) == a.isdisjoint(b)
    assert len(va) == len(a)


# --- Graph invariants -------------------------------------------------------


def test_graph_neighborhoods_are_closed_and_symmetric():
    g = build_path(4)
    assert g.closed_nbhd[0].ids() == (0, 1)
    assert g.closed_nbhd[1].ids() == (0, 1, 2)
    for v in range(g.order):
        assert v in g.closed_nbhd[v]
        for u in g.closed_nbhd[v]:
            assert v in g.closed_nbhd[u]


def test_graph_rejects_bad_input():
    with pytest.raises(CapacityError):
        Graph.from_edges(65, [])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        # broken symmetry straight through the constructor
        Graph(2, [VertexSet.from_ids([0, 1]), VertexSet.from_ids([1])])


def test_graph_is_immutable():
    g = build_path(2)
    with pytest.raises(AttributeError):
        g.order = 5


@given(st.integers(1, 16), st.data())
def test_random_graphs_stay_consistent(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    g = Graph.from_edges(n, chosen)
    assert g.edge_count == len(chosen)
    assert sorted(g.edges()) == sorted(chosen)
    comps = g.components()
    assert sum(len(c) for c in comps) == n
    oracle_comps = bruteforce.connected_components(n, chosen)
    assert sorted(tuple(c.ids()) for c in comps) == sorted(
        tuple(c) for c in oracle_comps
    )


# --- constructors -----------------------------------------------------------


def test_build_path_examples():
    assert build_path(1).closed_nbhd[0].ids() == (0,)
    assert build_path(2).closed_nbhd[0].ids() == (0, 1)
    assert build_path(4).closed_nbhd[1].ids() == (0, 1, 2)
    with pytest.raises(ValueError):
        build_path(0)
    with pytest.raises(CapacityError):
        build_path(65)


def test_path_component_examples():
    s = build_path_component(PathComponent(PathKind.PRIME, 0))
    assert s.graph.order == 1 and s.is_over

    s = build_path_component(PathComponent(PathKind.DOUBLE_PRIME, 0))
    assert s.graph.order == 2 and s.is_over

    s = pprime(3)
    assert s.graph.order == 4
    assert s.dominated.ids() == (0,)
    assert len(s.undominated) == 3
    assert s.graph.degree(0) == 1


def test_path_component_undominated_count_matches_n():
    for n in range(0, 12):
        for kind in PathKind:
            s = build_path_component(PathComponent(kind, n))
            assert len(s.undominated) == n
            # dominated vertices sit at degree-1 ends
            for v in s.dominated:
                assert s.graph.degree(v) <= 1


def test_path_component_rejects_negative():
    with pytest.raises(ValueError):
        PathComponent(PathKind.PRIME, -1)


def test_spider_examples():
    g = build_spider(1, 1, 1)
    assert g.order == 13
    assert g.degree(0) == 3
    assert g.is_tree()
    leg_lengths = sorted(len(c) for c in _legs(g))
    assert leg_lengths == [4, 4, 4]

    assert build_spider(0, 0, 0).order == 1

    g = build_spider(0, 1, 1)
    assert g.order == 9 and g.is_tree() and max(g.degree(v) for v in range(9)) == 2


def _legs(g):
    # connected components after deleting the center vertex 0
    rest = Graph.from_edges(g.order, [(u, v) for u, v in g.edges() if 0 not in (u, v)])
    return [c for c in rest.components() if 0 not in c]


def test_spider_leg_order_is_irrelevant_up_to_isomorphism():
    a = build_spider(2, 1, 1)
    b = build_spider(1, 1, 2)
    assert a.order == b.order
    assert bruteforce.tree_canon(a.order, a.edges()) == bruteforce.tree_canon(
        b.order, b.edges()
    )


def test_spider_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_spider(-1, 0, 0)
    with pytest.raises(CapacityError):
        build_spider(6, 6, 6)


# --- cut_edge ---------------------------------------------------------------


def test_cut_edge_smallest_case():
    state = cut_edge(build_path(2), 0, 1, VertexSet(0))
    g = state.graph
    assert g.order == 4
    assert sorted(g.edges()) == [(0, 3), (1, 2)]  # u'=2 adj v=1, v'=3 adj u=0
    assert state.dominated.ids() == (2, 3)


def test_cut_edge_is_order_plus_two_edges_plus_one():
    g = build_spider(1, 0, 1)
    for u, v in g.edges():
        state = cut_edge(g, u, v, VertexSet(0))
        assert state.graph.order == g.order + 2
        assert state.graph.edge_count == g.edge_count + 1


def test_cut_edge_p4_gives_two_pprime2_components():
    state = cut_edge(build_path(4), 1, 2, VertexSet(0))
    target = pprime(2)
    target_canon = bruteforce.state_canon_small(
        target.graph.order, target.graph.edges(), target.dominated.ids()
    )
    comps = state.graph.components()
    assert len(comps) == 2
    for comp in comps:
        ids = list(comp.ids())
        remap = {v: i for i, v in enumerate(ids)}
        edges = [
            (remap[u], remap[v]) for u, v in state.graph.edges() if u in comp and v in comp
        ]
        dom = [remap[v] for v in state.dominated if v in comp]
        assert bruteforce.state_canon_small(len(ids), edges, dom) == target_canon


def test_cut_edge_rejects_non_edges_and_overflow():
    with pytest.raises(ValueError):
        cut_edge(build_path(3), 0, 2, VertexSet(0))
    with pytest.raises(CapacityError):
        cut_edge(build_path(63), 0, 1, VertexSet(0))
    with pytest.raises(ValueError):
        cut_edge(build_path(3), 0, 1, VertexSet.from_ids([5]))


# --- disjoint_union ---------------------------------------------------------


def test_union_examples():
    s = disjoint_union(pdprime(0), pdprime(0))
    assert s.graph.order == 4 and s.is_over

    s = disjoint_union(pprime(2), pprime(3))
    assert s.graph.order == 7
    assert len(s.undominated) == 5


@given(st.integers(0, 6), st.integers(0, 6))
def test_union_preserves_undominated_count(a, b):
    sa, sb = pprime(a), pdprime(b)
    s = disjoint_union(sa, sb)
    assert len(s.undominated) == len(sa.undominated) + len(sb.undominated)
    assert s.graph.edge_count == sa.graph.edge_count + sb.graph.edge_count


def test_union_capacity():
    with pytest.raises(CapacityError):
        disjoint_union(PartialState(build_path(40)), PartialState(build_path(30)))


# --- graph6 -----------------------------------------------------------------


def test_graph6_single_edge():
    g = parse_graph6("A_")
    assert g.order == 2 and g.has_edge(0, 1)
    assert emit_graph6(g) == "A_"


def test_graph6_order_decode():
    assert parse_graph6("D??").order == 5
    assert parse_graph6("D??").edge_count == 0
    assert parse_graph6("?").order == 0
    assert parse_graph6(">>graph6<<A_").order == 2


def test_graph6_errors_carry_offsets():
    with pytest.raises(Graph6Error) as err:
        parse_graph6("D?")  # needs 2 body bytes
    assert err.value.offset == 2

    with pytest.raises(Graph6Error) as err:
        parse_graph6("D???")  # one byte too many
    assert err.value.offset == 3

    with pytest.raises(Graph6Error) as err:
        parse_graph6("A" + chr(200))
    assert err.value.offset == 1

    with pytest.raises(Graph6Error):
        parse_graph6("")
    with pytest.raises(Graph6Error):
        parse_graph6("~~A???")  # >258047 form unsupported
    with pytest.raises(Graph6Error):
        parse_graph6("~?B?")  # order 65 beyond the cap (needs more body anyway)


def test_graph6_round_trip_at_the_cap():
    for n in (63, 64):
        g = build_path(n)
        text = emit_graph6(g)
        assert text.startswith("~")
        back = parse_graph6(text)
        assert back == g


@given(st.integers(0, 12), st.data())
def test_graph6_round_trips_random_graphs(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    g = Graph.from_edges(n, chosen)
    assert parse_graph6(emit_graph6(g)) == g


# --- trees and forests ------------------------------------------------------


def test_is_tree_examples():
    assert build_path(5).is_tree()
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert not c4.is_tree()
    two_edges = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert not two_edges.is_tree()
    assert two_edges.is_forest()
    assert not c4.is_forest()


# --- edge list + dominated sidecar ------------------------------------------


def test_edge_list_round_trip():
    g = build_spider(1, 1, 0)
    text = emit_edge_list(g)
    assert parse_edge_list(text) == g
    first_line = text.splitlines()[0]
    assert first_line == f"{g.order} {g.edge_count}"


def test_edge_list_rejects_malformed():
    with pytest.raises(ValueError):
        parse_edge_list("")
    with pytest.raises(ValueError):
        parse_edge_list("3\n0 1\n")
    with pytest.raises(ValueError):
        parse_edge_list("3 2\n0 1\n")  # promises 2 edges, has 1
    with pytest.raises(ValueError):
        parse_edge_list("3 1\n0 one\n")


def test_dominated_sidecar():
    assert parse_dominated("0,2", 3).ids() == (0, 2)
    assert parse_dominated("", 3) == VertexSet(0)
    with pytest.raises(ValueError):
        parse_dominated("3", 3)


# --- builtin specs ----------------------------------------------------------


def test_builtin_specs():
    assert build_from_spec("path:7") == build_path(7)
    assert build_from_spec("spider:1,1,2") == build_spider(1, 1, 2)
    assert builtin_state("pprime:3") == pprime(3)
    assert builtin_state("pdprime:2") == pdprime(2)
    for bad in ("path", "path:x", "spider:1,2", "wat:3", "pprime:-1"):
        with pytest.raises(ValueError):
            builtin_state(bad)


def test_component_labels_round_trip():
    for kind in PathKind:
        for n in (0, 3, 11):
            c = PathComponent(kind, n)
            assert PathComponent.from_label(c.label()) == c
    with pytest.raises(ValueError):
        PathComponent.from_label("pprime")
    with pytest.raises(ValueError):
        PathComponent.from_label("nope:3")
