import networkx as nx
import pytest
from hypothesis import given

from blocksieve.blocks import (
    Anchor,
    AnchorKind,
    InvalidAnchor,
    block_decomposition,
    block_forest,
    block_graph,
    block_tree,
    classify_anchor,
    is_2connected,
    is_block_graph,
    lambda_anchor,
)
from blocksieve.graph import (
    DisconnectedInput,
    Graph,
    VertexId,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
    star_graph,
)
from blocksieve.samples import glued_triangles
from blocksieve.trees import Color
from conftest import atlas, connected_graphs, graphs
from oracles import brute_blocks, brute_cut_vertices, to_nx


def V(*xs):
    return frozenset(VertexId(0, x) for x in xs)


def valid_anchors(g):
    dec = block_decomposition(g)
    return [Anchor(AnchorKind.CUT_VERTEX, frozenset([c])) for c in sorted(dec.cut_vertices)] + \
        [Anchor(AnchorKind.BLOCK, b) for b in dec.blocks]


class TestDecomposition:
    def test_p3(self):
        dec = block_decomposition(path_graph(3))
        assert dec.blocks == (V(0, 1), V(1, 2))
        assert dec.cut_vertices == V(1)

    def test_c4(self):
        dec = block_decomposition(cycle_graph(4))
        assert dec.blocks == (V(0, 1, 2, 3),) and not dec.cut_vertices

    def test_glued_triangles(self):
        dec = block_decomposition(glued_triangles())
        assert dec.blocks == (V(0, 1, 2), V(0, 3, 4))
        assert dec.cut_vertices == V(0)

    def test_isolated_vertex_is_cut_in_no_block(self):
        dec = block_decomposition(Graph(range(3), [(0, 1)]))
        assert VertexId(0, 2) in dec.cut_vertices
        assert dec.containing_blocks[VertexId(0, 2)] == frozenset()

    def test_edge_block_map(self):
        dec = block_decomposition(glued_triangles())
        assert dec.block_of_edge(4, 3) == 1 and dec.block_of_edge(1, 0) == 0

    @pytest.mark.parametrize("g", atlas(7, connected=True)[::5], ids=lambda g: f"n{g.n}m{g.m}")
    def test_matches_exhaustive_search(self, g):
        dec = block_decomposition(g)
        assert set(dec.blocks) == brute_blocks(g)
        assert set(dec.cut_vertices) == brute_cut_vertices(g)

    @given(graphs(max_n=12))
    def test_matches_networkx(self, g):
        dec = block_decomposition(g)
        G = to_nx(g)
        assert set(dec.blocks) == {frozenset(b) for b in nx.biconnected_components(G)}
        iso = {v for v in g if not g.neighbors(v)}
        assert set(dec.cut_vertices) == set(nx.articulation_points(G)) | iso

    @given(graphs(max_n=12))
    def test_structural_invariants(self, g):
        dec = block_decomposition(g)
        bs = dec.blocks
        for i in range(len(bs)):
            for j in range(i + 1, len(bs)):
                assert len(bs[i] & bs[j]) <= 1
        assert sorted(dec.edge_block) == sorted(g.edges())
        for (a, b), k in dec.edge_block.items():
            assert a in bs[k] and b in bs[k]
        for v in g:
            if g.neighbors(v):
                assert (len(dec.containing_blocks[v]) >= 2) == (v in dec.cut_vertices)
        assert list(bs) == sorted(bs, key=lambda b: (min(b), len(b), sorted(b)))


class TestTwoConnected:
    def test_examples(self):
        assert is_2connected(cycle_graph(4))
        assert not is_2connected(path_graph(3))
        assert not is_2connected(empty_graph(1))
        assert is_2connected(complete_graph(2))


class TestBlockTree:
    def test_p3(self):
        t = block_tree(path_graph(3))
        colors = [n.color for n in t.nodes]
        assert colors == [Color.WHITE, Color.WHITE, Color.BLACK]
        assert sorted(t.edges()) == [(0, 2), (1, 2)]

    def test_c4_and_k1(self):
        t = block_tree(cycle_graph(4))
        assert len(t) == 1 and t.nodes[0].color is Color.WHITE
        t = block_tree(empty_graph(1))
        assert len(t) == 1 and t.nodes[0].color is Color.BLACK

    def test_disconnected(self):
        with pytest.raises(DisconnectedInput):
            block_tree(empty_graph(2))
        assert len(block_forest(Graph(range(4), [(0, 1), (1, 2)]))) == 2

    @given(connected_graphs(min_n=2, max_n=12))
    def test_tree_shape(self, g):
        dec = block_decomposition(g)
        t = block_tree(g)
        t.check()
        assert len(t) == len(dec.blocks) + len(dec.cut_vertices)
        assert len(t.edges()) == len(t) - 1


class TestBlockGraph:
    def test_p4(self):
        assert block_graph(path_graph(4)) == path_graph(3)

    def test_c4(self):
        assert block_graph(cycle_graph(4)) == empty_graph(1)

    def test_star(self):
        # three edge blocks pairwise meeting at the hub
        assert block_graph(star_graph(3)) == complete_graph(3)

    @given(connected_graphs(min_n=2, max_n=12))
    def test_is_a_block_graph(self, g):
        assert is_block_graph(block_graph(g))


class TestIsBlockGraph:
    def test_examples(self):
        assert is_block_graph(path_graph(5))
        assert not is_block_graph(cycle_graph(4))
        assert is_block_graph(complete_graph(4))


class TestAnchors:
    def test_classify(self):
        assert classify_anchor(path_graph(3), [1]).kind is AnchorKind.CUT_VERTEX
        assert classify_anchor(path_graph(3), [0, 1]).kind is AnchorKind.BLOCK
        with pytest.raises(InvalidAnchor):
            classify_anchor(path_graph(3), [0])

    def test_lambda_cut_vertex(self):
        a = lambda_anchor(path_graph(3), Anchor.cut(1))
        assert a == Anchor(AnchorKind.BLOCK, V(0, 1))

    def test_lambda_two_connected(self):
        a = lambda_anchor(cycle_graph(4), Anchor.block(range(4)))
        assert a.vertices == V(0)

    def test_lambda_block_with_two_cut_vertices(self):
        # block graph of P5 is P3 and the middle block is its cut vertex
        a = lambda_anchor(path_graph(5), Anchor.block([1, 2]))
        assert a == Anchor(AnchorKind.CUT_VERTEX, V(1))

    def test_lambda_block_with_one_cut_vertex(self):
        a = lambda_anchor(path_graph(3), Anchor.block([0, 1]))
        assert a == Anchor(AnchorKind.BLOCK, V(0, 1))

    def test_lambda_rejects_mislabelled_anchor(self):
        with pytest.raises(InvalidAnchor):
            lambda_anchor(path_graph(3), Anchor(AnchorKind.BLOCK, V(1)))

    @pytest.mark.parametrize("g", atlas(7, connected=True)[1::3], ids=lambda g: f"n{g.n}m{g.m}")
    def test_lambda_gives_valid_anchors(self, g):
        bg = block_graph(g)
        for a in valid_anchors(g):
            out = lambda_anchor(g, a)
            assert classify_anchor(bg, out.vertices) == out
