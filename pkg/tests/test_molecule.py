import math

import numpy as np
import pytest

from cayley_spectra import (
    CouplingSpec,
    Pose,
    assemble_dynamical_matrix,
    coupling_from_kernel,
    cyclic_group,
    driven_response,
    generate_group,
    left_regular,
    orbit_lattice,
    rotation_from_axis_angle,
    translation_unitary,
)
from cayley_spectra.algebra import AlgebraElement
from cayley_spectra.errors import (
    FixedPointError,
    NonHermitianError,
    PositivityError,
    ResonanceError,
)
from cayley_spectra.rotations import GOLDEN_RATIO


def generic_pose():
    return Pose(np.array([2.0, 0.3, 0.1]), rotation_from_axis_angle((0, 0, 1), 0.4))


class TestOrbitLattice:
    def test_trivial_group_single_pose(self):
        g = generate_group([])
        lattice = orbit_lattice(g, generic_pose())
        assert len(lattice.poses) == 1

    def test_icosahedral_orbit_has_sixty_poses(self, ip):
        lattice = orbit_lattice(ip, generic_pose())
        assert len(lattice.poses) == 60
        pos = lattice.positions()
        diff = np.linalg.norm(pos[:, None] - pos[None, :], axis=-1)
        diff[np.arange(60), np.arange(60)] = np.inf
        assert diff.min() > 1e-6

    def test_seed_on_symmetry_axis_rejected(self, ip):
        on_axis = Pose(
            np.array([0.0, 1.0, GOLDEN_RATIO]),
            rotation_from_axis_angle((0, 1, GOLDEN_RATIO), 0.3),
        )
        with pytest.raises(FixedPointError):
            orbit_lattice(ip, on_axis)

    def test_orbit_isometry(self, ip):
        # the same distance-shell histogram is seen from every orbit point
        lattice = orbit_lattice(ip, generic_pose())
        pos = lattice.positions()
        dist = np.linalg.norm(pos[:, None] - pos[None, :], axis=-1)
        reference = np.sort(dist[0])
        for i in range(1, 60):
            assert np.allclose(np.sort(dist[i]), reference, atol=1e-9)

    def test_orientations_follow_rotations(self, ip):
        lattice = orbit_lattice(ip, generic_pose())
        seed = lattice.seed
        for r, pose in zip(ip.elements, lattice.poses):
            assert np.allclose(pose.position, r.matrix @ seed.position, atol=1e-12)
            assert np.allclose(
                pose.orientation.matrix, r.matrix @ seed.orientation.matrix, atol=1e-12
            )


class TestAssembleDynamicalMatrix:
    def test_identity_support_gives_block_diagonal(self, ip):
        block = np.array([[2.0, 1.0j], [-1.0j, 3.0]])
        spec = CouplingSpec(2, {ip.identity_index: block})
        d = assemble_dynamical_matrix(ip, spec)
        assert np.allclose(d.matrix, np.kron(np.eye(60), block), atol=1e-15)

    def test_matches_left_regular_of_element(self, ip, delta):
        spec = CouplingSpec(1, {g: delta.block(g) for g in delta.support})
        d = assemble_dynamical_matrix(ip, spec)
        assert np.allclose(d.matrix, left_regular(delta).matrix, atol=1e-15)

    def test_covariance_under_all_translations(self, ip, rng_factory):
        rng = rng_factory(2)
        support = [int(g) for g in rng.choice(60, size=4, replace=False)]
        w = {}
        for g in support:
            w[g] = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        for g in list(w):
            w[ip.inverse(g)] = w[g].conj().T
        d = assemble_dynamical_matrix(ip, CouplingSpec(2, w)).matrix
        for g in range(ip.order):
            u = translation_unitary(ip, g, block_dim=2).matrix
            assert np.max(np.abs(u.conj().T @ d @ u - d)) <= 1e-10

    def test_non_selfadjoint_spec_rejected(self, ip, gens):
        spec = CouplingSpec(1, {gens[0]: np.array([[1.0]])})
        with pytest.raises(NonHermitianError):
            assemble_dynamical_matrix(ip, spec)


class TestCouplingFromKernel:
    def test_self_only_kernel(self, ip):
        lattice = orbit_lattice(ip, generic_pose())
        spec = coupling_from_kernel(lattice, lambda r: 1.0 if r == 0.0 else 0.0)
        assert set(spec.w) == {ip.identity_index}

    def test_step_kernel_counts_nearest_shell(self, ip):
        lattice = orbit_lattice(ip, generic_pose())
        pos = lattice.positions()
        d0 = np.linalg.norm(pos - pos[ip.identity_index], axis=1)
        shells = np.sort(np.unique(np.round(d0, 9)))
        cut = (shells[1] + shells[2]) / 2.0
        spec = coupling_from_kernel(lattice, lambda r: 1.0 if r <= cut else 0.0)
        expected = int(np.sum(d0 <= cut))
        assert len(spec.w) == expected
        assert expected > 1  # identity plus the nearest shell

    def test_kernel_coupling_is_covariant(self, ip):
        lattice = orbit_lattice(ip, generic_pose())
        spec = coupling_from_kernel(lattice, lambda r: math.exp(-r))
        d = assemble_dynamical_matrix(ip, spec)
        assert d.is_hermitian(tol=1e-12)

    def test_seed_motion_changes_couplings_continuously(self, ip):
        # secant vs half-step secant agree to first order in the seed shift
        base = np.array([2.0, 0.3, 0.1])
        orient = rotation_from_axis_angle((0, 0, 1), 0.4)
        kernel = lambda r: math.exp(-r)

        def coupling_vector(position):
            lattice = orbit_lattice(ip, Pose(position, orient))
            spec = coupling_from_kernel(lattice, kernel)
            return np.array([spec.w.get(g, np.zeros((1, 1)))[0, 0] for g in range(60)])

        step = 1e-3
        delta_full = coupling_vector(base + [step, 0, 0]) - coupling_vector(base)
        delta_half = coupling_vector(base + [step / 2, 0, 0]) - coupling_vector(base)
        assert np.allclose(delta_full, 2.0 * delta_half, atol=1e-6)


class TestDrivenResponse:
    def test_zero_force_zero_response(self, ip, models_v=None):
        v = np.eye(60)
        q = driven_response(np.eye(60), v, omega=0.5, F=np.zeros(60))
        assert np.allclose(q, 0.0)

    def test_static_identity_response(self):
        f = np.arange(6.0)
        q = driven_response(np.eye(6), np.eye(6), omega=0.0, F=f)
        assert np.allclose(q, f, atol=1e-12)

    def test_residual_bound_on_model_potential(self, ip, gens):
        from cayley_spectra import squared_shift_model

        h = squared_shift_model(ip, *gens, -2.0).element
        v = left_regular(h).matrix
        t = np.eye(60)
        f = np.zeros(60)
        f[0] = 1.0
        omega = math.sqrt(0.5)
        q = driven_response(t, v, omega, f)
        residual = np.linalg.norm((-(omega**2) * t + v) @ q - f)
        assert residual <= 1e-8

    def test_linearity(self, ip, rng_factory):
        rng = rng_factory(6)
        v = np.diag(rng.uniform(1.0, 2.0, 60))
        t = np.eye(60)
        f1 = rng.standard_normal(60)
        f2 = rng.standard_normal(60)
        qa = driven_response(t, v, 0.3, 2.0 * f1 + 3.0 * f2)
        qb = 2.0 * driven_response(t, v, 0.3, f1) + 3.0 * driven_response(t, v, 0.3, f2)
        assert np.max(np.abs(qa - qb)) < 1e-9

    def test_resonance_rejected(self):
        v = np.diag([1.0, 2.0, 3.0])
        with pytest.raises(ResonanceError):
            driven_response(np.eye(3), v, omega=math.sqrt(2.0), F=np.ones(3))

    def test_indefinite_mass_rejected(self):
        with pytest.raises(PositivityError):
            driven_response(np.diag([1.0, -1.0]), np.eye(2), 0.1, np.ones(2))

    def test_indefinite_stiffness_rejected(self):
        with pytest.raises(PositivityError):
            driven_response(np.eye(2), np.diag([1.0, -1.0]), 0.1, np.ones(2))

    def test_nontrivial_mass_matrix(self, rng_factory):
        rng = rng_factory(9)
        a = rng.standard_normal((6, 6))
        t = a @ a.T + 6.0 * np.eye(6)
        v = np.eye(6)
        f = rng.standard_normal(6)
        q = driven_response(t, v, 0.4, f)
        residual = np.linalg.norm((-(0.4**2) * t + v) @ q - f)
        assert residual <= 1e-8 * np.linalg.norm(f)
