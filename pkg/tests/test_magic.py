import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blocksieve.anchored import gamma, split, validate_anchored, zbar
from blocksieve.blocks import block_decomposition
from blocksieve.graph import VertexId, connected_components, cycle_graph, empty_graph, path_graph
from blocksieve.magic import (
    DimensionMismatch,
    EmptyCell,
    IndexMismatch,
    MagicUnitary,
    NotAProjection,
    NotBijective,
    PartitionNotPreserved,
    PreconditionFailed,
    adjoint_mu,
    anchor_residual,
    block_distance_audit,
    block_unit,
    c4_mu,
    extract_block,
    from_permutation,
    fulton_compatible,
    gamma_transport,
    is_quantum_iso,
    opnorm,
    partition_sum,
    preserves_anchor,
    preserves_partition,
    projection_residual,
    validate_mu,
)
from blocksieve.samples import (
    P_DIAG,
    double_wheel_mu,
    glued_triangles,
    glued_triangles_swap,
    noncommuting_c4_mu,
    sun_graph,
    sun_mu,
)
from conftest import atlas
from oracles import automorphisms

I2 = np.eye(2, dtype=complex)


def random_projection(rng, d):
    k = rng.integers(0, d + 1)
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, _ = np.linalg.qr(a)
    v = q[:, :k]
    return v @ v.conj().T


def anchors(g):
    dec = block_decomposition(g)
    return [frozenset([c]) for c in dec.cut_vertices] + list(dec.blocks)


class TestMagicUnitaryType:
    def test_shape_checks(self):
        with pytest.raises(DimensionMismatch):
            MagicUnitary([0], [0], np.zeros((1, 1, 2, 3)))
        with pytest.raises(DimensionMismatch):
            MagicUnitary([0, 1], [0], np.zeros((1, 1, 1, 1)))
        with pytest.raises(IndexMismatch):
            MagicUnitary([0, 0], [0, 1], np.zeros((2, 2, 1, 1)))

    def test_immutable(self):
        u = from_permutation({0: 0})
        with pytest.raises(ValueError):
            u.entries[0, 0, 0, 0] = 5


class TestValidate:
    def test_identity_permutation(self):
        r = validate_mu(from_permutation({i: i for i in range(3)}))
        assert r.passed and (r.max_projection_residual, r.max_row_residual, r.max_col_residual) == (0, 0, 0)

    def test_half_identity_entry(self):
        e = np.zeros((2, 2, 2, 2), dtype=complex)
        e[0, 0] = 0.5 * I2
        e[1, 1] = I2
        r = validate_mu(MagicUnitary(range(2), range(2), e))
        assert r.max_projection_residual == pytest.approx(0.25, abs=1e-15)
        assert not r

    def test_c4_mu_exact(self):
        r = validate_mu(noncommuting_c4_mu())
        assert max(r.max_projection_residual, r.max_row_residual, r.max_col_residual) <= 1e-12

    def test_opnorm_is_spectral(self):
        m = np.array([[3, 0], [4, 0]], dtype=complex)
        assert opnorm(m) == pytest.approx(5.0)


class TestFromPermutation:
    def test_k2(self):
        assert from_permutation({0: 0, 1: 1}).entries[..., 0, 0].tolist() == [[1, 0], [0, 1]]
        assert from_permutation({0: 1, 1: 0}).entries[..., 0, 0].tolist() == [[0, 1], [1, 0]]

    def test_not_bijective(self):
        with pytest.raises(NotBijective):
            from_permutation({0: 1, 1: 1})

    @given(st.permutations(range(6)), st.integers(1, 3))
    def test_always_valid(self, perm, d):
        r = validate_mu(from_permutation(dict(enumerate(perm)), d))
        assert (r.max_projection_residual, r.max_row_residual, r.max_col_residual) == (0, 0, 0)


class TestQuantumIso:
    def test_isomorphism_and_non(self):
        g = path_graph(3)
        assert is_quantum_iso(from_permutation({0: 2, 1: 1, 2: 0}), g, g).residual == 0
        bad = is_quantum_iso(from_permutation({0: 1, 1: 0, 2: 2}), g, g)
        assert not bad and bad.residual >= 1

    def test_c4(self):
        c = cycle_graph(4)
        assert is_quantum_iso(noncommuting_c4_mu(), c, c).residual <= 1e-12

    def test_index_mismatch(self):
        with pytest.raises(IndexMismatch):
            is_quantum_iso(from_permutation({0: 0, 1: 1}), path_graph(3), path_graph(3))


class TestC4:
    def test_noncommuting_entries(self):
        u = noncommuting_c4_mu()
        p, q = u.entry(0, 0), u.entry(1, 1)
        # pq - qp = [[0, 1/2], [-1/2, 0]] by hand
        assert np.allclose(p @ q - q @ p, [[0, 0.5], [-0.5, 0]])
        assert opnorm(p @ q - q @ p) == pytest.approx(0.5)

    def test_identity_coefficients(self):
        u = c4_mu(I2, I2)
        assert u == from_permutation({i: i for i in range(4)}, d=2)

    def test_commutative_case(self):
        u = c4_mu(P_DIAG, P_DIAG)
        assert validate_mu(u) and is_quantum_iso(u, cycle_graph(4), cycle_graph(4))

    def test_rejects_non_projection(self):
        with pytest.raises(NotAProjection):
            c4_mu(0.5 * I2, I2)

    @given(st.integers(0, 2**32 - 1), st.integers(1, 4))
    @settings(max_examples=40, deadline=None)
    def test_random_projections(self, seed, d):
        rng = np.random.default_rng(seed)
        u = c4_mu(random_projection(rng, d), random_projection(rng, d))
        assert validate_mu(u)
        assert is_quantum_iso(u, cycle_graph(4), cycle_graph(4))
        assert fulton_compatible(u, cycle_graph(4), cycle_graph(4))


class TestPartitions:
    def test_component_preserving_permutation(self):
        u = from_permutation({0: 2, 1: 3, 2: 0, 3: 1})
        parts = [[0, 1], [2, 3]]
        assert preserves_partition(u, parts, parts)
        p = partition_sum(u, parts, parts)
        assert p.entries[..., 0, 0].tolist() == [[0, 1], [1, 0]]
        assert p.rows == (VertexId(0, 0), VertexId(0, 1))

    def test_identity(self):
        u = from_permutation({i: i for i in range(4)})
        p = partition_sum(u, [[0, 1], [2, 3]], [[0, 1], [2, 3]])
        assert p.entries[..., 0, 0].tolist() == [[1, 0], [0, 1]]

    def test_violated(self):
        u = from_permutation({0: 0, 1: 2, 2: 1, 3: 3})
        parts = [[0, 1], [2, 3]]
        assert not preserves_partition(u, parts, parts)
        with pytest.raises(PartitionNotPreserved):
            partition_sum(u, parts, parts)

    def test_c4_bipartition(self):
        classes = [[0, 2], [1, 3]]
        u = noncommuting_c4_mu()
        assert preserves_partition(u, classes, classes)
        assert validate_mu(partition_sum(u, classes, classes))

    def test_glued_triangles_p_is_swap(self):
        u, ag = glued_triangles_swap()
        g = ag.graph
        comps = connected_components(g.remove_vertices([0]))
        u0 = extract_block(u, range(1, 5), range(1, 5))
        p = partition_sum(u0, comps, comps)
        assert p.entries[..., 0, 0].tolist() == [[0, 1], [1, 0]]

    def test_representative_independence_and_duality(self):
        for u, parts in ((noncommuting_c4_mu(), [[0, 2], [1, 3]]),
                         (sun_mu()[0], [[0, 2, 4, 6], [1, 3, 5, 7]]),
                         (double_wheel_mu()[0], [[0], [1, 2, 3, 4], [5, 6, 7, 8]])):
            base = partition_sum(u, parts, parts)
            assert validate_mu(base)
            for reps in itertools.product(*parts):
                other = partition_sum(u, parts, parts, representatives=dict(enumerate(reps)))
                assert np.max(opnorm(other.entries - base.entries)) <= u.tolerance
            dual = partition_sum(adjoint_mu(u), parts, parts)
            assert np.allclose(dual.entries, adjoint_mu(base).entries, atol=1e-12)


class TestBlocks:
    def test_anchored_permutation_restricted(self):
        u, ag = glued_triangles_swap()
        sub = extract_block(u, [0], [0])
        assert validate_mu(sub)

    def test_zero_cell(self):
        u, _ = glued_triangles_swap()
        sub = extract_block(u, [1, 2], [1, 2])
        assert not np.any(sub.entries)
        unit, spread = block_unit(sub)
        assert not np.any(unit) and spread == 0

    def test_sun_restricted_to_cycle(self):
        u, _ = sun_mu()
        assert extract_block(u, range(4), range(4)) == noncommuting_c4_mu()

    def test_double_wheel_blocks_have_projection_units(self):
        u, _ = double_wheel_mu()
        sub = extract_block(u, range(1, 5), range(5, 9))
        unit, spread = block_unit(sub)
        assert spread <= 1e-12 and projection_residual(unit) <= 1e-12
        assert validate_mu(sub, unit=unit)

    def test_empty(self):
        with pytest.raises(EmptyCell):
            extract_block(noncommuting_c4_mu(), [], [0])


class TestAnchors:
    def test_examples(self):
        assert preserves_anchor(from_permutation({0: 2, 1: 1, 2: 0}), [1], [1])
        assert not preserves_anchor(from_permutation({0: 1, 1: 0, 2: 2}), [1], [1])
        assert preserves_anchor(noncommuting_c4_mu(), range(4), range(4))
        assert anchor_residual(from_permutation({0: 1, 1: 0, 2: 2}), [1], [1]) == 1


class TestAdjoint:
    def test_permutation_inverse(self):
        perm = {0: 1, 1: 2, 2: 0}
        inv = {a: x for x, a in perm.items()}
        assert adjoint_mu(from_permutation(perm)) == from_permutation(inv)

    def test_involution_and_c4(self):
        u = noncommuting_c4_mu()
        assert adjoint_mu(adjoint_mu(u)) == u
        assert np.allclose(adjoint_mu(u).entries, u.entries)
        assert validate_mu(adjoint_mu(double_wheel_mu()[0]))


class TestTransport:
    def test_glued_triangles(self):
        u, ag = glued_triangles_swap()
        out = gamma_transport(u, ag, ag)
        gg = gamma(ag)
        assert out.shape == (6, 6) and out.cols == gg.graph.vertices
        assert validate_mu(out) and is_quantum_iso(out, gg.graph, gg.graph)
        assert preserves_anchor(out, gg.anchor, gg.anchor)
        copies = split(ag.graph, 0).copies
        block = extract_block(out, copies, copies)
        assert block.entries[..., 0, 0].tolist() == [[0, 1], [1, 0]]

    def test_sun(self):
        u, ag = sun_mu()
        out = gamma_transport(u, ag, ag)
        gg = gamma(ag)
        assert gg.anchor == frozenset(sun_graph().vertices)
        r = validate_mu(out)
        assert max(r.max_projection_residual, r.max_row_residual, r.max_col_residual) <= 1e-10
        assert is_quantum_iso(out, gg.graph, gg.graph).residual <= 1e-10
        assert preserves_anchor(out, gg.anchor, gg.anchor, tolerance=1e-10)

    def test_double_wheel(self):
        u, ag = double_wheel_mu()
        out = gamma_transport(u, ag, ag)
        assert out.dim == 4 and validate_mu(out)

    def test_preconditions(self):
        g = path_graph(3)
        ag = validate_anchored(g, [1])
        with pytest.raises(PreconditionFailed) as exc:
            gamma_transport(from_permutation({0: 1, 1: 0, 2: 2}), ag, ag)
        assert exc.value.check == "is_quantum_iso"
        other = validate_anchored(g, [0, 1])
        with pytest.raises(PreconditionFailed) as exc:
            gamma_transport(from_permutation({0: 2, 1: 1, 2: 0}), other, other)
        assert exc.value.check == "preserves_anchor"

    def test_k1(self):
        ag = validate_anchored(empty_graph(1), [0])
        u = from_permutation({0: 0})
        assert gamma_transport(u, ag, ag) == u

    @pytest.mark.parametrize("g", atlas(6, connected=True)[1::2], ids=lambda g: f"n{g.n}m{g.m}")
    def test_scalar_transport_is_a_permutation(self, g):
        for r in anchors(g):
            ag = validate_anchored(g, r)
            for perm in automorphisms(g):
                if {perm[x] for x in r} != set(r):
                    continue
                out = gamma_transport(from_permutation(perm), ag, ag)
                e = out.entries[..., 0, 0]
                assert set(np.unique(e.real)) <= {0.0, 1.0} and not np.any(e.imag)
                assert (e.sum(axis=0) == 1).all() and (e.sum(axis=1) == 1).all()


class TestAudits:
    def test_fulton(self):
        g = path_graph(4)
        assert fulton_compatible(from_permutation({0: 3, 1: 2, 2: 1, 3: 0}), g, g)
        assert fulton_compatible(noncommuting_c4_mu(), cycle_graph(4), cycle_graph(4))
        s = sun_graph()
        assert fulton_compatible(sun_mu()[0], s, s)
        assert not fulton_compatible(from_permutation({0: 1, 1: 0, 2: 2, 3: 3}), g, g)

    def test_distance_audit_on_fixtures(self):
        for u, ag in (sun_mu(), double_wheel_mu(), glued_triangles_swap()):
            assert block_distance_audit(u, ag.graph, ag.graph) == []


class TestScalarPreservation:
    @pytest.mark.parametrize("g", atlas(6, connected=True), ids=lambda g: f"n{g.n}m{g.m}")
    def test_cut_vertices_and_centre_anchor(self, g):
        cuts = block_decomposition(g).cut_vertices
        z = zbar(g).vertices
        for perm in automorphisms(g):
            u = from_permutation(perm)
            for x in g:
                assert (x in cuts) == (perm[x] in cuts)
            assert preserves_anchor(u, z, z)
