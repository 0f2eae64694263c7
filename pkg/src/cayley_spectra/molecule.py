"""Physical layer: orbit lattices of seed poses, covariant dynamical matrices,
and driven harmonic response."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .algebra import AlgebraElement, RegularOperator, left_regular
from .errors import FixedPointError, NonHermitianError, PositivityError, ResonanceError
from .rotations import FiniteGroup, Rotation

DEFAULT_FIXED_POINT_TOL = 1e-6
DEFAULT_RESONANCE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Pose:
    """Position and orientation of one resonator frame."""

    position: np.ndarray
    orientation: Rotation

    def __post_init__(self) -> None:
        pos = np.array(self.position, dtype=float)
        if pos.shape != (3,) or not np.all(np.isfinite(pos)):
            raise ValueError("position must be a finite 3-vector")
        pos.setflags(write=False)
        object.__setattr__(self, "position", pos)


@dataclass(frozen=True, eq=False)
class OrbitLattice:
    """Orbit of a seed pose under a rotation group, one pose per element."""

    group: FiniteGroup
    seed: Pose
    poses: tuple[Pose, ...]

    def positions(self) -> np.ndarray:
        return np.stack([p.position for p in self.poses])


def orbit_lattice(
    group: FiniteGroup,
    seed: Pose,
    fixed_point_tol: float = DEFAULT_FIXED_POINT_TOL,
) -> OrbitLattice:
    """Act on the seed pose with every group element.

    Rejects seeds whose orbit collapses: if two orbit positions come closer
    than fixed_point_tol the seed sits on a symmetry axis (its stabilizer is
    nontrivial) and the resonators would physically coincide.
    """
    poses = tuple(
        Pose(r.matrix @ seed.position, Rotation(r.matrix @ seed.orientation.matrix))
        for r in group.elements
    )
    pos = np.stack([p.position for p in poses])
    if group.order > 1:
        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        dist[np.arange(group.order), np.arange(group.order)] = np.inf
        if dist.min() <= fixed_point_tol:
            i, j = np.unravel_index(np.argmin(dist), dist.shape)
            raise FixedPointError(
                f"orbit positions {i} and {j} coincide within {fixed_point_tol}; "
                "the seed has a nontrivial stabilizer"
            )
    return OrbitLattice(group=group, seed=seed, poses=poses)


@dataclass(frozen=True, eq=False)
class CouplingSpec:
    """Coupling blocks per group element; must be globally self-adjoint."""

    block_dim: int
    w: Mapping[int, np.ndarray]

    def __post_init__(self) -> None:
        clean = {}
        for g, value in self.w.items():
            block = np.asarray(value, dtype=complex)
            if block.ndim == 0:
                block = block.reshape(1, 1)
            if block.shape != (self.block_dim, self.block_dim):
                raise ValueError(
                    f"coupling block at {g} has shape {block.shape}, "
                    f"expected ({self.block_dim}, {self.block_dim})"
                )
            clean[int(g)] = block
        object.__setattr__(self, "w", clean)

    def validate_selfadjoint(self, group: FiniteGroup, tol: float = 1e-12) -> None:
        for g, block in self.w.items():
            g_inv = group.inverse(g)
            partner = self.w.get(g_inv)
            partner = partner if partner is not None else np.zeros_like(block)
            if np.max(np.abs(partner - block.conj().T)) > tol:
                raise NonHermitianError(
                    f"coupling at inverse of element {g} is not the conjugate "
                    "transpose of the coupling at the element"
                )


def assemble_dynamical_matrix(group: FiniteGroup, spec: CouplingSpec) -> RegularOperator:
    """Dynamical matrix of the coupling data: the left-regular image of the
    algebra element with blocks w_g.  Hermitian and translation-covariant."""
    spec.validate_selfadjoint(group)
    element = AlgebraElement(group, spec.block_dim, dict(spec.w))
    return left_regular(element)


def coupling_from_kernel(
    lattice: OrbitLattice,
    kernel: Callable[[float], float],
    block_dim: int = 1,
) -> CouplingSpec:
    """Scalar couplings from a radial kernel of the pose-to-pose distance.

    w_g = kernel(|x0 - g x0|); the distance is invariant along orbits, so the
    self-adjointness constraint holds automatically for real kernels.
    """
    if block_dim != 1:
        raise ValueError("kernel couplings are scalar; block_dim must be 1")
    x0 = lattice.seed.position
    w = {}
    for g, pose in enumerate(lattice.poses):
        value = float(kernel(float(np.linalg.norm(pose.position - x0))))
        if value != 0.0:
            w[g] = np.array([[value]], dtype=complex)
    return CouplingSpec(block_dim=1, w=w)


def driven_response(
    T: np.ndarray,
    V: np.ndarray,
    omega: float,
    F: np.ndarray,
    resonance_tol: float = DEFAULT_RESONANCE_TOL,
) -> np.ndarray:
    """Steady-state complex amplitudes of the harmonically driven system.

    Solves (-omega^2 T + V) Q = F through the dynamical matrix
    D = T^{-1/2} V T^{-1/2}.  T must be positive definite and V positive
    semidefinite; driving within resonance_tol of a resonance is an error
    (the undamped response diverges there).
    """
    T = np.asarray(T, dtype=complex)
    V = np.asarray(V, dtype=complex)
    F = np.asarray(F, dtype=complex)
    wt, vt = np.linalg.eigh(T)
    if wt.min() <= 1e-10:
        raise PositivityError(f"mass matrix is not positive definite (min eig {wt.min():.3e})")
    t_m12 = (vt * (1.0 / np.sqrt(wt))) @ vt.conj().T
    d = t_m12 @ V @ t_m12
    d = (d + d.conj().T) / 2.0
    wd, vd = np.linalg.eigh(d)
    if wd.min() < -1e-10 * max(1.0, abs(wd.max())):
        raise PositivityError(f"stiffness matrix is not PSD (min dyn eig {wd.min():.3e})")
    if np.min(np.abs(wd - omega**2)) <= resonance_tol:
        raise ResonanceError(
            f"drive frequency squared {omega**2:.6g} is within {resonance_tol} "
            "of a resonance"
        )
    inv_shift = vd @ np.diag(1.0 / (wd - omega**2)) @ vd.conj().T
    q = t_m12 @ (inv_shift @ (t_m12 @ F))
    residual = np.linalg.norm((-(omega**2) * T + V) @ q - F)
    if residual > 1e-8 * max(np.linalg.norm(F), 1e-30):
        raise ArithmeticError(f"driven response residual {residual:.3e} too large")
    return q
