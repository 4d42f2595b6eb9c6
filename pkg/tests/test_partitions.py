from math import comb

import pytest
from hypothesis import given, settings

import oracles
from conftest import graph_and_order, graphs
from gencol.errors import ParseError, ValidationError
from gencol.graph import INF, Graph, generate
from gencol.partitions import (
    ConnectedPartition,
    TreeDecomposition,
    compose_td_order,
    flatness_check,
    isometric_peel,
    order_from_partition,
    peel_paths,
    quotient,
    separation_holds,
    skeleton,
    skeleton_reach,
)
from gencol.reach import VertexOrder, col_of_order, exact_parameter, wcol_of_order


def grid_rows(w, h):
    return ConnectedPartition.of([range(i * w, (i + 1) * w) for i in range(h)])


def td_from_order(g, order):
    """Elimination tree of ``order``: each vertex's bag is itself plus its
    fill-in back-neighbours, hung under the latest of them.  Component roots
    hang under the first vertex with an empty adhesion."""
    rank = {v: i for i, v in enumerate(order)}
    adj = oracles.adjacency(g)
    bags, parent = [], []
    for v in order:
        # vertices earlier than v reachable through vertices later than v
        back, seen, stack = set(), {v}, [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in seen:
                    continue
                seen.add(y)
                if rank[y] < rank[v]:
                    back.add(y)
                else:
                    stack.append(y)
        bags.append(frozenset(back | {v}))
        parent.append(rank[max(back, key=rank.__getitem__)] if back else None)
    for x in range(1, len(parent)):
        if parent[x] is None:
            parent[x] = 0
    return TreeDecomposition(bags, parent, 0)


# -- connected partitions and quotients


def test_quotient_examples():
    q = quotient(generate("grid", 3, 3), grid_rows(3, 3))
    assert q.graph.edges == [(0, 1), (1, 2)] and q.width == 1
    q = quotient(generate("clique", 4), ConnectedPartition.of([[2], [0], [3], [1]]))
    assert q.graph.m == 6 and q.width == 3
    q = quotient(generate("cycle", 5), ConnectedPartition.of([range(5)]))
    assert q.graph.n == 1 and q.width == 0


def test_partition_validation_names_part():
    with pytest.raises(ValidationError, match="part 1"):
        quotient(generate("path", 4), ConnectedPartition.of([[1, 2], [0, 3]]))
    with pytest.raises(ValidationError, match="miss"):
        quotient(generate("path", 4), ConnectedPartition.of([[0, 1]]))
    with pytest.raises(ValidationError, match="overlaps"):
        quotient(generate("path", 4), ConnectedPartition.of([[0, 1], [1, 2, 3]]))


def two_r_plus_one(r):
    return 2 * r + 1


def test_flatness_examples():
    assert flatness_check(generate("path", 9), ConnectedPartition.of([range(9)]), two_r_plus_one, 4) is None
    bad = flatness_check(generate("clique", 5), ConnectedPartition.of([range(5)]), two_r_plus_one, 1)
    assert bad is not None and (bad.r, bad.count, bad.allowed) == (1, 5, 3)
    assert flatness_check(generate("grid", 4, 3), grid_rows(4, 3), two_r_plus_one, 3) is None


def test_order_from_partition_examples():
    g = generate("grid", 3, 3)
    o = order_from_partition(g, grid_rows(3, 3))
    assert list(o) == list(range(9))
    assert wcol_of_order(g, o, 2) <= 6 <= comb(4, 1) * 5
    p = generate("path", 5)
    o = order_from_partition(p, ConnectedPartition.of([range(5)]), {0: [2, 1, 3, 0, 4]})
    assert list(o) == [2, 1, 3, 0, 4]
    with pytest.raises(ValidationError):
        order_from_partition(p, ConnectedPartition.of([range(5)]), {0: [0, 1]})


# -- isometric peeling


def test_peel_examples():
    assert len(isometric_peel(generate("path", 6))) == 1
    c6 = isometric_peel(generate("cycle", 6))
    assert [len(p) for p in c6.parts] == [4, 2]
    grid = isometric_peel(generate("grid", 3, 3), "bfs_vertical")
    grid.validate(generate("grid", 3, 3))
    with pytest.raises(ValidationError):
        isometric_peel(generate("path", 3), "spiral")


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10))
def test_peeled_parts_are_isometric_paths(g):
    for policy in ("diameter_path", "bfs_vertical"):
        part = isometric_peel(g, policy)
        part.validate(g)
        residual = set(range(g.n))
        for seq in peel_paths(part, g):
            dist = g.bfs(seq[0], allowed=residual)
            assert [dist[x] for x in seq] == list(range(len(seq)))
            residual -= set(seq)
        assert flatness_check(g, part, two_r_plus_one, 3) is None


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=12, p=0.3))
def test_flat_partition_order_bounds(g):
    part = isometric_peel(g)
    k = quotient(g, part).width
    o = order_from_partition(g, part)
    for r in (1, 2, 3, 4):
        assert col_of_order(g, o, r) <= (k + 1) * (2 * r + 1)
        assert wcol_of_order(g, o, r) <= comb(r + k, k) * (2 * r + 1)


# -- tree decompositions


TD_P4 = TreeDecomposition.from_edges([{0, 1, 2}, {2, 3}], [(0, 1)])


def test_td_basics():
    p4 = generate("path", 4)
    TD_P4.validate(p4)
    assert TD_P4.adhesion(1) == {2} and TD_P4.margin(1) == {3}
    assert TD_P4.adhesion_size == 1 and TD_P4.width == 2
    assert list(compose_td_order(p4, TD_P4)) == [0, 1, 2, 3]
    assert wcol_of_order(p4, compose_td_order(p4, TD_P4), 2) <= comb(1 + 2, 1) * (3 + 1)


def test_td_validation_names_condition():
    p4 = generate("path", 4)
    with pytest.raises(ValidationError, match="edge coverage"):
        TreeDecomposition.from_edges([{0, 1}, {2, 3}], [(0, 1)]).validate(p4)
    with pytest.raises(ValidationError, match="vertex coverage"):
        TreeDecomposition.from_edges([{0, 1, 2}], []).validate(p4)
    with pytest.raises(ValidationError, match="connectivity"):
        TreeDecomposition.from_edges([{0, 1}, {1, 2}, {2, 3, 0}], [(0, 1), (1, 2)]).validate(p4)
    with pytest.raises(ValidationError):
        TreeDecomposition.from_edges([{0}, {1}, {2}], [(0, 1), (1, 2), (2, 0)])


def test_td_parse_roundtrip():
    text = "c path\ns td 2 3 4\nb 1 1 2 3\nb 2 3 4\nt 1 2\n"
    td = TreeDecomposition.parse(text)
    assert td.bags == TD_P4.bags and td.parent == [None, 0]
    assert TreeDecomposition.parse(td.serialize(4)).bags == td.bags
    unrooted = TreeDecomposition.parse("s td 2 3 4\nb 1 1 2 3\nb 2 3 4\n1 2\n")
    assert unrooted.root == 0 and unrooted.parent == [None, 0]
    for bad in ("b 1 1\n", "s td 1 1 2\nb 1 3\n", "s td 1 1 2\nb 1 x\n", "s td 2 1 2\nb 1 1\nb 2 2\nt 1 2\n1 2\n"):
        with pytest.raises(ParseError):
            TreeDecomposition.parse(bad)


def test_one_bag_decomposition():
    g = generate("cycle", 5)
    td = TreeDecomposition([set(range(5))], [None])
    assert list(compose_td_order(g, td, {0: [3, 1, 4, 0, 2]})) == [3, 1, 4, 0, 2]
    assert not skeleton(g, td).arcs
    assert skeleton_reach(g, td, 2, 3).vertices == {2}


def test_skeleton_on_path_decomposition():
    g = generate("path", 5)
    td = TreeDecomposition.from_edges([{i, i + 1} for i in range(4)], [(i, i + 1) for i in range(3)])
    assert sorted(skeleton(g, td).arcs) == [(2, 1), (3, 2), (4, 3)]
    for r in (1, 2, 3):
        res = skeleton_reach(g, td, 4, r)
        assert res.count == r + 1 <= res.bound == comb(r + 1, 1)


def test_glued_triangles():  # [DERIVED] two triangles sharing the edge 1-2
    g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    td = TreeDecomposition.from_edges([{0, 1, 2}, {1, 2, 3}], [(0, 1)])
    o = compose_td_order(g, td)
    torso, _ = td.torso(g, 1)
    for r in (1, 2, 3):
        torso_w = wcol_of_order(torso, VertexOrder.identity(3), r)
        assert wcol_of_order(g, o, r) <= comb(2 + r, 2) * (torso_w + 2)
        assert skeleton_reach(g, td, 3, r).count <= comb(r + 2, 2)


@settings(max_examples=60, deadline=None)
@given(graph_and_order(max_n=10))
def test_elimination_decompositions(go):
    g, o = go
    td = td_from_order(g, list(o))
    td.validate(g)
    k = td.adhesion_size
    for x in range(len(td.bags)):
        assert separation_holds(g, td, x)
    dag = skeleton(g, td)
    assert dag.is_acyclic()
    order = compose_td_order(g, td)
    for r in (1, 2, 3):
        for u in range(g.n):
            assert skeleton_reach(g, td, u, r).count <= comb(r + k, k)
        torso_w = 0
        for x in range(len(td.bags)):
            torso, bag = td.torso(g, x)
            torso_w = max(torso_w, wcol_of_order(torso, VertexOrder.identity(len(bag)), r))
        assert wcol_of_order(g, order, r) <= comb(k + r, k) * (torso_w + k)


def test_separation_fails_when_an_edge_is_skipped():
    c4 = generate("cycle", 4)
    td = TreeDecomposition.from_edges([{0, 1, 2}, {2, 3}], [(0, 1)])
    assert not separation_holds(c4, td, 1)
    assert separation_holds(generate("path", 4), TD_P4, 1)


@settings(max_examples=15, deadline=None)
@given(graphs(max_n=7))
def test_treewidth_bounds_wcol(g):
    k = exact_parameter(g, INF, "treewidth").value
    if k <= 2:
        for r in (1, 2, 3):
            assert exact_parameter(g, r, "wcol").value <= comb(r + k, k)


@pytest.mark.parametrize(
    "graph",
    [generate("grid", 3, 3), generate("clique", 4), generate("cycle", 7), Graph.from_edges(6, [(5, i) for i in range(5)] + [(i, (i + 1) % 5) for i in range(5)])],
    ids=["grid", "k4", "c7", "wheel"],
)
def test_planar_fixtures(graph):
    for r in (1, 2):
        assert exact_parameter(graph, r, "col").value <= 5 * r + 1
        assert exact_parameter(graph, r, "wcol").value <= comb(r + 2, 2) * (2 * r + 1)
