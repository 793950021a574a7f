import random

import pytest
from hypothesis import given, settings

from blocksieve.anchored import (
    AnchoredGraph,
    NotACutVertex,
    RootColorViolation,
    delta1,
    delta2,
    gamma,
    reconstruct_tree,
    rho,
    rooted_block_tree,
    split,
    validate_anchored,
    zbar,
)
from blocksieve.blocks import AnchorKind, InvalidAnchor, block_decomposition, block_tree
from blocksieve.graph import (
    DisconnectedInput,
    GraphError,
    Graph,
    VertexId,
    complete_graph,
    connected_components,
    cycle_graph,
    empty_graph,
    induced_subgraph,
    path_graph,
    star_graph,
)
from blocksieve.samples import glued_triangles
from blocksieve.trees import Color, ColoredTree, FreshNode, RootedColoredTree, TreeNode, tree_canonical
from conftest import atlas, connected_graphs, random_graph


def V(*xs):
    return frozenset(VertexId(0, x) for x in xs)


def all_anchors(g):
    dec = block_decomposition(g)
    return [frozenset([c]) for c in sorted(dec.cut_vertices)] + list(dec.blocks)


def kite_with_attachments():
    """Block {0,1,2,3} (K4 minus 1-3); 0 also lies in a triangle and a pendant edge, 3 in a triangle."""
    edges = [(0, 3), (3, 2), (2, 0), (0, 1), (1, 2), (0, 4), (4, 5), (5, 0), (0, 6), (3, 7), (7, 8), (8, 3)]
    return Graph(range(9), edges)


def single(color):
    return RootedColoredTree(ColoredTree((TreeNode(FreshNode("leaf"), color),), ((),)), 0)


class TestValidate:
    def test_examples(self):
        g = path_graph(3)
        assert validate_anchored(g, [1]).anchor == V(1)
        assert validate_anchored(g, [0, 1]).anchor == V(0, 1)
        with pytest.raises(InvalidAnchor):
            validate_anchored(g, [0])

    def test_names_the_component(self):
        g = Graph(range(5), [(0, 1), (1, 2), (3, 4)])
        with pytest.raises(InvalidAnchor) as exc:
            validate_anchored(g, [1, 3])
        assert exc.value.component == 1


class TestRho:
    def test_examples(self):
        assert rho(cycle_graph(4), 2) == V(0, 1, 2, 3)
        assert rho(path_graph(3), 1) == V(1)
        assert rho(Graph(range(3), [(0, 1)]), 2) == V(2)

    @given(connected_graphs(max_n=10))
    def test_contains_the_vertex(self, g):
        assert all(v in rho(g, v) for v in g)


class TestZbar:
    def test_examples(self):
        assert zbar(path_graph(3)).vertices == V(1) and zbar(path_graph(3)).is_cut
        assert zbar(cycle_graph(4)).vertices == V(0, 1, 2, 3)
        z = zbar(path_graph(4))
        assert z.kind is AnchorKind.BLOCK and z.vertices == V(1, 2)

    def test_disconnected(self):
        with pytest.raises(DisconnectedInput):
            zbar(empty_graph(2))

    @pytest.mark.parametrize("g", atlas(7, connected=True)[::4], ids=lambda g: f"n{g.n}m{g.m}")
    def test_gives_a_valid_anchor(self, g):
        validate_anchored(g, zbar(g).vertices)


class TestSplit:
    def test_glued_triangles(self):
        s = split(glued_triangles(), 0)
        comps = connected_components(s.graph)
        assert len(comps) == 2 and all(induced_subgraph(s.graph, c).m == 3 for c in comps)
        assert s.copies == (VertexId(0, 0), VertexId(1, 0))
        assert all(s.origin[c] == VertexId(0, 0) for c in s.copies)

    def test_star(self):
        s = split(star_graph(3), 0)
        assert s.graph.n == 6 and s.graph.m == 3 and len(s.copies) == 3

    def test_k1(self):
        s = split(empty_graph(1), 0)
        assert s.graph == empty_graph(1) and s.copies == (VertexId(0, 0),)

    def test_not_a_cut_vertex(self):
        with pytest.raises(NotACutVertex):
            split(cycle_graph(4), 0)


class TestGamma:
    def test_glued_triangles(self):
        out = gamma(validate_anchored(glued_triangles(), [0]))
        assert out.graph.n == 6 and out.graph.m == 6
        assert out.anchor == frozenset(out.graph.vertices)

    def test_c4_block(self):
        out = gamma(validate_anchored(cycle_graph(4), range(4)))
        assert out.graph == empty_graph(4) and out.anchor == V(0, 1, 2, 3)

    def test_block_anchor_expands_at_two_block_vertices(self):
        g = kite_with_attachments()
        out = gamma(validate_anchored(g, [0, 1, 2, 3]))
        # 0 sits in three blocks so stays alone; 3 sits in two so its other block joins
        assert out.anchor == V(0, 1, 2, 3, 7, 8)
        assert [c.kind() for c in out.components()].count(AnchorKind.BLOCK) == 1

    def test_disconnected(self):
        with pytest.raises(DisconnectedInput):
            gamma(AnchoredGraph(empty_graph(2), V(0, 1)))

    @pytest.mark.parametrize("g", atlas(7, connected=True)[1::4], ids=lambda g: f"n{g.n}m{g.m}")
    def test_descent_and_validity(self, g):
        nb = len(block_decomposition(g).blocks)
        for r in all_anchors(g):
            out = gamma(validate_anchored(g, r))
            validate_anchored(out.graph, out.anchor)
            if nb >= 2:
                for c in out.components():
                    assert len(block_decomposition(c.graph).blocks) < nb

    @pytest.mark.parametrize("g", atlas(7, connected=True)[2::4], ids=lambda g: f"n{g.n}m{g.m}")
    def test_block_anchor_growth(self, g):
        dec = block_decomposition(g)
        for i, r in enumerate(dec.blocks):
            out = gamma(validate_anchored(g, r))
            assert r <= out.anchor
            two = [u for u in r if len(dec.containing_blocks[u]) == 2]
            for v in out.anchor - r:
                assert any(any(u in b and v in b for b in dec.blocks) for u in two)
            for u in two:
                for b in dec.blocks_at(u):
                    assert b <= out.anchor


class TestRootedTrees:
    def test_p3_cut(self):
        t = rooted_block_tree(validate_anchored(path_graph(3), [1]))
        assert t.root_color is Color.BLACK and len(t) == 3

    def test_c4_block(self):
        t = rooted_block_tree(validate_anchored(cycle_graph(4), range(4)))
        assert len(t) == 1 and t.root_color is Color.WHITE

    def test_p4_zbar_root_is_middle_block(self):
        g = path_graph(4)
        t = rooted_block_tree(validate_anchored(g, zbar(g).vertices))
        assert len(t) == 5 and t.tree.nodes[t.root].payload == V(1, 2)
        assert len(t.tree.adjacency[t.root]) == 2


class TestDelta:
    def test_delta1_two_white_leaves(self):
        t = delta1([single(Color.WHITE), single(Color.WHITE)])
        assert t.root_color is Color.BLACK and len(t) == 3
        t.tree.check()

    def test_delta1_one_tree(self):
        t = delta1([single(Color.WHITE)])
        assert len(t) == 2 and t.root_color is Color.BLACK

    def test_delta1_rejects_black_roots(self):
        with pytest.raises(RootColorViolation):
            delta1([single(Color.BLACK)])

    def test_delta2_drops_single_black_nodes(self):
        t = delta2([single(Color.BLACK)] * 4)
        assert len(t) == 1 and t.root_color is Color.WHITE

    def test_delta2_interposes_black(self):
        t = delta2([single(Color.WHITE)])
        assert len(t) == 3 and t.root_color is Color.WHITE
        t.tree.check()
        assert tree_canonical(t) == "W(B(W()))"

    def test_delta1_rebuilds_glued_triangles(self):
        ag = validate_anchored(glued_triangles(), [0])
        pieces = [rooted_block_tree(c) for c in gamma(ag).components()]
        assert tree_canonical(delta1(pieces)) == tree_canonical(rooted_block_tree(ag))

    def test_delta2_rebuilds_kite(self):
        ag = validate_anchored(kite_with_attachments(), [0, 1, 2, 3])
        pieces = [rooted_block_tree(c) for c in gamma(ag).components()]
        assert tree_canonical(delta2(pieces)) == tree_canonical(rooted_block_tree(ag))


class TestReconstruction:
    def test_examples(self):
        for g, r in ((path_graph(3), [1]), (cycle_graph(4), range(4))):
            ag = validate_anchored(g, r)
            assert tree_canonical(reconstruct_tree(ag)) == tree_canonical(rooted_block_tree(ag))

    def test_needs_two_vertices(self):
        with pytest.raises(GraphError):
            reconstruct_tree(validate_anchored(empty_graph(1), [0]))

    @pytest.mark.parametrize("g", [g for g in atlas(7, connected=True) if g.n >= 2][::3],
                             ids=lambda g: f"n{g.n}m{g.m}")
    def test_exhaustive_sample(self, g):
        for r in all_anchors(g):
            ag = validate_anchored(g, r)
            assert tree_canonical(reconstruct_tree(ag)) == tree_canonical(rooted_block_tree(ag))

    def test_random_up_to_ten(self):
        rng = random.Random(7)
        for _ in range(100):
            g = random_graph(rng, rng.randint(2, 10), rng.uniform(0.1, 0.5), connected=True)
            for r in all_anchors(g):
                ag = validate_anchored(g, r)
                out = reconstruct_tree(ag)
                out.tree.check()
                assert tree_canonical(out) == tree_canonical(rooted_block_tree(ag))


class TestRootColourRigidity:
    def test_isomorphic_rooted_trees_have_same_anchor_kind(self):
        seen = {}
        for g in atlas(6, connected=True):
            for r in all_anchors(g):
                ag = validate_anchored(g, r)
                key = (g.n, tree_canonical(rooted_block_tree(ag)))
                kind = ag.kind()
                assert seen.setdefault(key, kind) is kind
