import math
from collections import Counter

import numpy as np
import pytest

from cayley_spectra import (
    GOLDEN_RATIO,
    RegularOperator,
    class_alignment,
    from_scalar_coeffs,
    hermitian_eig,
    identity_element,
    identify_irrep,
    irrep_multiplicities,
    left_regular,
    level_character,
    projector_to_algebra,
    random_selfadjoint,
    spectral_projector,
    tensor_multiplicities,
    translation_unitary,
    zero_element,
)
from cayley_spectra.errors import (
    IrrepMatchError,
    NonHermitianError,
    NotInAlgebraError,
    NotProjectorError,
)
from cayley_spectra.models import adjacency_irrep_eigenvalues

PHI = GOLDEN_RATIO


def cluster_at(sd, value):
    k = int(np.argmin(np.abs(sd.cluster_values - value)))
    assert abs(sd.clusters[k].value - value) < 1e-9
    return k


class TestHermitianEig:
    def test_simple_diagonal(self, ip):
        m = np.diag(np.repeat([1.0, 2.0, 3.0], 20)).astype(complex)
        sd = hermitian_eig(RegularOperator(m, ip, 1))
        assert sd.cluster_values.tolist() == [1.0, 2.0, 3.0]
        assert sd.multiplicities == (20, 20, 20)

    def test_non_hermitian_rejected(self, ip):
        m = np.zeros((60, 60), dtype=complex)
        m[0, 1] = 1.0
        with pytest.raises(NonHermitianError):
            hermitian_eig(RegularOperator(m, ip, 1))

    def test_adjacency_spectrum_in_band(self, adjacency_spectrum):
        assert adjacency_spectrum.eigenvalues.min() >= -2.0 - 1e-12
        assert adjacency_spectrum.eigenvalues.max() <= 2.0 + 1e-12
        assert adjacency_spectrum.clusters[0].value == pytest.approx(-2.0, abs=1e-12)
        assert adjacency_spectrum.clusters[0].multiplicity == 1

    def test_marker_eigenvalues_present(self, adjacency_spectrum):
        dims = {"Ag": 1, "T1g": 3, "T2g": 3, "Gg": 4, "Hg": 5}
        for label, lam in adjacency_irrep_eigenvalues().items():
            k = cluster_at(adjacency_spectrum, lam)
            assert adjacency_spectrum.clusters[k].multiplicity == dims[label]

    def test_basis_orthonormal_and_residual(self, adjacency_spectrum, adjacency_operator):
        h = adjacency_operator.matrix
        scale = np.linalg.norm(h)
        for cluster in adjacency_spectrum.clusters:
            b = cluster.basis
            assert np.max(np.abs(b.conj().T @ b - np.eye(b.shape[1]))) < 1e-10
            residual = h @ b - b * np.full(b.shape[1], cluster.value)
            assert np.max(np.linalg.norm(residual, axis=0)) < 1e-9 * scale

    def test_multiplicities_sum_to_dimension(self, adjacency_spectrum):
        assert sum(adjacency_spectrum.multiplicities) == 60


class TestSpectralProjector:
    def test_resolution_of_identity(self, adjacency_spectrum, ip):
        total = sum(
            spectral_projector(adjacency_spectrum, k).matrix
            for k in range(len(adjacency_spectrum.clusters))
        )
        assert np.max(np.abs(total - np.eye(60))) < 1e-9

    def test_lowest_cluster_is_uniform_projector(self, adjacency_spectrum):
        p = spectral_projector(adjacency_spectrum, 0).matrix
        assert np.max(np.abs(p - np.full((60, 60), 1.0 / 60.0))) < 1e-10

    def test_idempotent_hermitian_trace(self, adjacency_spectrum):
        for label, lam in adjacency_irrep_eigenvalues().items():
            k = cluster_at(adjacency_spectrum, lam)
            p = spectral_projector(adjacency_spectrum, k).matrix
            assert np.max(np.abs(p @ p - p)) < 1e-12
            assert np.max(np.abs(p - p.conj().T)) < 1e-12
            mult = adjacency_spectrum.clusters[k].multiplicity
            assert np.trace(p).real == pytest.approx(mult, abs=1e-10)

    def test_projectors_commute_with_translations(self, adjacency_spectrum, ip):
        for k in range(len(adjacency_spectrum.clusters)):
            p = spectral_projector(adjacency_spectrum, k).matrix
            for g in (1, 7, 30):
                u = translation_unitary(ip, g).matrix
                assert np.max(np.abs(u @ p - p @ u)) < 1e-9


class TestLevelCharacter:
    def test_identity_projector_gives_regular_character(self, ip):
        p = RegularOperator(np.eye(60, dtype=complex), ip, 1)
        values = level_character(p, ip)
        expected = np.zeros(5)
        expected[[len(c) for c in ip.classes].index(1)] = 60.0
        assert np.allclose(values.real, expected, atol=1e-12)

    def test_trivial_row_at_lowest_cluster(self, adjacency_spectrum, ip):
        p = spectral_projector(adjacency_spectrum, 0)
        values = level_character(p, ip)
        assert np.allclose(values, np.ones(5), atol=1e-10)

    def test_threefold_row_with_golden_ratio(self, adjacency_spectrum, ip, char_table):
        lam = adjacency_irrep_eigenvalues()["T1g"]
        p = spectral_projector(adjacency_spectrum, cluster_at(adjacency_spectrum, lam))
        values = level_character(p, ip)
        align = class_alignment(ip, char_table)
        aligned = np.array([values[k] for k in align])
        assert np.allclose(aligned.real, [3.0, PHI, 1.0 - PHI, 0.0, -1.0], atol=1e-8)
        assert np.max(np.abs(aligned.imag)) < 1e-10

    def test_non_projector_rejected(self, ip):
        with pytest.raises(NotProjectorError):
            level_character(RegularOperator(2 * np.eye(60, dtype=complex), ip, 1), ip)


class TestCharacterTable:
    def test_identity_column_is_dims(self, char_table):
        assert char_table.values[:, 0].tolist() == [1.0, 3.0, 3.0, 4.0, 5.0]
        assert char_table.dims == (1, 3, 3, 4, 5)

    def test_fivefold_row(self, char_table):
        assert char_table.row("Hg").tolist() == [5.0, 0.0, 0.0, -1.0, 1.0]

    def test_row_orthogonality(self, char_table):
        sizes = np.array(char_table.class_sizes, dtype=float)
        gram = (char_table.values * sizes) @ char_table.values.T / char_table.group_order
        assert np.max(np.abs(gram - np.eye(5))) < 1e-12

    def test_dim_squares_sum_to_order(self, char_table):
        assert sum(d * d for d in char_table.dims) == 60

    def test_class_alignment_bijective(self, ip, char_table):
        align = class_alignment(ip, char_table)
        assert sorted(align) == list(range(5))
        for col, k in enumerate(align):
            assert len(ip.classes[k]) == char_table.class_sizes[col]


class TestIdentifyIrrep:
    def test_marker_clusters_identified(self, adjacency_spectrum, ip, char_table):
        for label, lam in adjacency_irrep_eigenvalues().items():
            p = spectral_projector(
                adjacency_spectrum, cluster_at(adjacency_spectrum, lam)
            )
            got, residual = identify_irrep(p, ip, char_table)
            assert got == label
            assert residual < 1e-8

    def test_every_adjacency_cluster_has_a_label(self, adjacency_spectrum, ip, char_table):
        labels = []
        for k in range(len(adjacency_spectrum.clusters)):
            p = spectral_projector(adjacency_spectrum, k)
            labels.append(identify_irrep(p, ip, char_table)[0])
        counts = Counter(labels)
        # each irrep appears as many times as its dimension
        assert counts == {"Ag": 1, "T1g": 3, "T2g": 3, "Gg": 4, "Hg": 5}

    def test_reducible_projector_rejected(self, adjacency_spectrum, ip, char_table):
        p0 = spectral_projector(adjacency_spectrum, 0).matrix
        p1 = spectral_projector(adjacency_spectrum, 1).matrix
        both = RegularOperator(p0 + p1, ip, 1)
        with pytest.raises(IrrepMatchError):
            identify_irrep(both, ip, char_table)


class TestPairings:
    def test_unit_pairs_to_dims(self, ip, char_table):
        n = irrep_multiplicities(identity_element(ip), char_table)
        assert n == {"Ag": 1, "T1g": 3, "T2g": 3, "Gg": 4, "Hg": 5}

    def test_zero_pairs_to_zero(self, ip, char_table):
        n = irrep_multiplicities(zero_element(ip), char_table)
        assert set(n.values()) == {0}

    def test_marker_clusters_pair_to_kronecker_delta(
        self, adjacency_spectrum, ip, char_table
    ):
        for label, lam in adjacency_irrep_eigenvalues().items():
            p_op = spectral_projector(
                adjacency_spectrum, cluster_at(adjacency_spectrum, lam)
            )
            p = projector_to_algebra(p_op)
            n = irrep_multiplicities(p, char_table)
            assert n == {l: int(l == label) for l in char_table.labels}

    def test_completeness(self, adjacency_spectrum, ip, char_table):
        for k in range(len(adjacency_spectrum.clusters)):
            p = projector_to_algebra(spectral_projector(adjacency_spectrum, k))
            n = irrep_multiplicities(p, char_table)
            total = sum(n[l] * d for l, d in zip(char_table.labels, char_table.dims))
            assert total == adjacency_spectrum.clusters[k].multiplicity

    def test_non_projection_rejected(self, ip, char_table, delta):
        with pytest.raises(NotProjectorError):
            irrep_multiplicities(delta, char_table)


class TestProjectorToAlgebra:
    def test_identity(self, ip):
        p = projector_to_algebra(RegularOperator(np.eye(60, dtype=complex), ip, 1))
        assert p.support == (ip.identity_index,)
        assert p.block(ip.identity_index)[0, 0] == pytest.approx(1.0)

    def test_uniform_projector(self, adjacency_spectrum, ip):
        p = projector_to_algebra(spectral_projector(adjacency_spectrum, 0))
        assert len(p.support) == 60
        for g in range(60):
            assert p.block(g)[0, 0] == pytest.approx(1.0 / 60.0, abs=1e-12)

    def test_round_trip_and_projection_law(self, adjacency_spectrum, ip):
        lam = adjacency_irrep_eigenvalues()["T2g"]
        p_op = spectral_projector(adjacency_spectrum, cluster_at(adjacency_spectrum, lam))
        p = projector_to_algebra(p_op)
        assert np.max(np.abs(left_regular(p).matrix - p_op.matrix)) < 1e-8
        from cayley_spectra import adjoint, canonical_trace, multiply

        pp = multiply(p, p)
        for g in set(p.support) | set(pp.support):
            assert np.allclose(pp.block(g), p.block(g), atol=1e-8)
            assert np.allclose(adjoint(p).block(g), p.block(g), atol=1e-8)
        assert canonical_trace(p) == pytest.approx(3.0 / 60.0, abs=1e-10)

    def test_non_symmetric_operator_rejected(self, ip):
        m = np.zeros((60, 60), dtype=complex)
        m[0, 0] = 1.0  # rank-one site projector does not commute with translations
        with pytest.raises(NotInAlgebraError):
            projector_to_algebra(RegularOperator(m, ip, 1))


class TestRandomSelfadjoint:
    def test_self_adjoint(self, ip):
        h = random_selfadjoint(ip, 1, seed=0)
        assert h.is_selfadjoint(tol=1e-15)

    def test_deterministic(self, ip):
        a = random_selfadjoint(ip, 2, seed=4)
        b = random_selfadjoint(ip, 2, seed=4)
        assert a.support == b.support
        for g in a.support:
            assert np.array_equal(a.block(g), b.block(g))

    def test_support_inside_word_ball(self, ip):
        from cayley_spectra import standard_graph, word_distances_from

        h = random_selfadjoint(ip, 2, seed=1)
        dist = word_distances_from(standard_graph(ip), ip.identity_index)
        assert all(dist[g] <= 2 for g in h.support)

    def test_generic_cluster_sizes_match_irrep_dims(self, ip):
        sd = hermitian_eig(left_regular(random_selfadjoint(ip, 1, seed=0)))
        counts = Counter(sd.multiplicities)
        assert counts == {1: 1, 3: 6, 4: 4, 5: 5}

    def test_generic_levels_carry_irreps(self, ip, char_table):
        # ten seeds, every cluster matches exactly one character row
        for seed in range(10):
            sd = hermitian_eig(left_regular(random_selfadjoint(ip, 1, seed=seed)))
            labels = Counter()
            for k in range(len(sd.clusters)):
                label, residual = identify_irrep(
                    spectral_projector(sd, k), ip, char_table, tol=1e-6
                )
                labels[label] += 1
            assert labels == {"Ag": 1, "T1g": 3, "T2g": 3, "Gg": 4, "Hg": 5}


class TestTensorMultiplicities:
    def test_trivial_is_unit(self, char_table):
        for label in char_table.labels:
            n = tensor_multiplicities(char_table, "Ag", label)
            assert n == {l: int(l == label) for l in char_table.labels}

    def test_threefold_square_dimension(self, char_table):
        n = tensor_multiplicities(char_table, "T1g", "T1g")
        total = sum(n[l] * d for l, d in zip(char_table.labels, char_table.dims))
        assert total == 9

    def test_against_class_sum_oracle(self, char_table):
        # brute-force oracle: weighted class sums of products of rows
        sizes = np.array(char_table.class_sizes, dtype=float)
        for l1 in char_table.labels:
            for l2 in char_table.labels:
                n = tensor_multiplicities(char_table, l1, l2)
                prod = char_table.row(l1) * char_table.row(l2)
                for l3 in char_table.labels:
                    raw = np.sum(sizes * prod * char_table.row(l3)) / 60.0
                    assert n[l3] == pytest.approx(raw, abs=1e-9)

    def test_fivefold_square_contains_everything(self, char_table):
        n = tensor_multiplicities(char_table, "Hg", "Hg")
        assert all(n[l] >= 1 for l in char_table.labels)
