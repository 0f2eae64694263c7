"""Spectral analysis on the group Hilbert space.

Eigen-clustering of Hermitian operators, spectral projectors, identification
of the irreducible representation carried by each level through characters,
pull-back of symmetric projectors into the group algebra, and the integer
pairings that count the irrep content of a projection.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    RegularOperator,
    adjoint,
    left_regular,
    multiply,
    translation_permutation,
)
from .cayley import CayleyGraph, standard_graph, word_distances_from
from .errors import (
    ClassInconsistencyError,
    IrrepMatchError,
    NonHermitianError,
    NonIntegerPairingError,
    NotInAlgebraError,
    NotProjectorError,
)
from .rotations import GOLDEN_RATIO, FiniteGroup

DEFAULT_CLUSTER_TOL = 1e-6


@dataclass(frozen=True)
class EigenCluster:
    value: float
    multiplicity: int
    basis: np.ndarray  # orthonormal columns spanning the eigenspace


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Full spectrum of a Hermitian operator, grouped into clusters."""

    eigenvalues: np.ndarray
    clusters: tuple[EigenCluster, ...]
    source: RegularOperator
    cluster_tol: float

    @property
    def cluster_values(self) -> np.ndarray:
        return np.array([c.value for c in self.clusters])

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(c.multiplicity for c in self.clusters)

    def lowest_gap(self) -> float:
        if len(self.clusters) < 2:
            return 0.0
        return self.clusters[1].value - self.clusters[0].value


def cluster_eigenvalues(w: np.ndarray, cluster_tol: float) -> list[tuple[int, int]]:
    """Split an ascending eigenvalue list into (start, stop) runs whose
    consecutive gaps stay within cluster_tol."""
    runs = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > cluster_tol:
            runs.append((start, i))
            start = i
    return runs


def hermitian_eig(
    op: RegularOperator, cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> SpectralData:
    """Diagonalize a Hermitian operator and cluster its spectrum.

    Warns when a gap between adjacent clusters is within a decade of
    cluster_tol, since the clustering is then sensitive to the tolerance.
    """
    m = op.matrix
    if np.max(np.abs(m - m.conj().T)) > 1e-10:
        raise NonHermitianError("operator is not Hermitian within 1e-10")
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    clusters = []
    for start, stop in cluster_eigenvalues(w, cluster_tol):
        basis = v[:, start:stop].copy()
        clusters.append(
            EigenCluster(
                value=float(np.mean(w[start:stop])),
                multiplicity=stop - start,
                basis=basis,
            )
        )
    for a, b in zip(clusters, clusters[1:]):
        gap = b.value - a.value
        if gap <= 10.0 * cluster_tol:
            warnings.warn(
                f"cluster gap {gap:.3e} is within a decade of cluster_tol "
                f"{cluster_tol:.1e}; clustering may be tolerance-sensitive",
                stacklevel=2,
            )
    return SpectralData(
        eigenvalues=w, clusters=tuple(clusters), source=op, cluster_tol=cluster_tol
    )


def spectral_projector(sd: SpectralData, cluster: int) -> RegularOperator:
    """Orthogonal projector onto one eigenvalue cluster."""
    basis = sd.clusters[cluster].basis
    p = basis @ basis.conj().T
    return RegularOperator(
        p, sd.source.group, sd.source.block_dim, side="none", source=None
    )


def _check_projector(matrix: np.ndarray, tol: float) -> None:
    if np.max(np.abs(matrix - matrix.conj().T)) > tol:
        raise NotProjectorError("matrix is not self-adjoint")
    if np.max(np.abs(matrix @ matrix - matrix)) > tol:
        raise NotProjectorError("matrix is not idempotent")


def level_character(P: RegularOperator, group: FiniteGroup) -> np.ndarray:
    """Trace of U_g P per conjugacy class (in the group's class order).

    P must be a scalar-block projector commuting with the right translations;
    the trace is then constant on classes, which is verified to 1e-8.
    """
    if P.block_dim != 1:
        raise NotProjectorError("level characters are defined for block_dim 1")
    _check_projector(P.matrix, 1e-8)
    m = P.matrix
    values = np.empty(len(group.classes), dtype=complex)
    for c, members in enumerate(group.classes):
        traces = []
        for g in members:
            perm = translation_permutation(group, g)
            # Tr(U_g P) with (U_g)_{a, perm[a]} = 1.
            traces.append(m[np.arange(group.order), perm].sum())
        traces = np.array(traces)
        if np.max(np.abs(traces - traces[0])) > 1e-8:
            raise ClassInconsistencyError(
                f"trace varies over class {c} by {np.max(np.abs(traces - traces[0])):.2e}"
            )
        values[c] = traces.mean()
    return values


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Character table: one row per irrep, one column per conjugacy class.

    Classes carry (size, rotation angle) metadata so the columns can be
    aligned with the computed class partition of a concrete group.
    """

    labels: tuple[str, ...]
    dims: tuple[int, ...]
    class_names: tuple[str, ...]
    class_sizes: tuple[int, ...]
    class_angles: tuple[float, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def group_order(self) -> int:
        return int(sum(self.class_sizes))

    def irrep_index(self, label: str) -> int:
        return self.labels.index(label)

    def row(self, label: str) -> np.ndarray:
        return self.values[self.irrep_index(label)]


def icosahedral_character_table() -> CharacterTable:
    """The five-row character table of the proper icosahedral group."""
    phi = GOLDEN_RATIO
    values = np.array(
        [
            [1.0, 1.0, 1.0, 1.0, 1.0],
            [3.0, phi, 1.0 - phi, 0.0, -1.0],
            [3.0, 1.0 - phi, phi, 0.0, -1.0],
            [4.0, -1.0, -1.0, 1.0, 0.0],
            [5.0, 0.0, 0.0, -1.0, 1.0],
        ]
    )
    return CharacterTable(
        labels=("Ag", "T1g", "T2g", "Gg", "Hg"),
        dims=(1, 3, 3, 4, 5),
        class_names=("E", "12C5", "12C5^2", "20C3", "15C2"),
        class_sizes=(1, 12, 12, 20, 15),
        class_angles=(
            0.0,
            2.0 * math.pi / 5.0,
            4.0 * math.pi / 5.0,
            2.0 * math.pi / 3.0,
            math.pi,
        ),
        values=values,
    )


def class_alignment(group: FiniteGroup, table: CharacterTable) -> tuple[int, ...]:
    """For each table column, the index of the matching group class.

    Matching is by class size and class rotation angle, which identifies the
    columns regardless of either side's ordering convention.
    """
    if group.order != table.group_order:
        raise IrrepMatchError(
            f"group order {group.order} != table order {table.group_order}"
        )
    alignment = []
    for size, angle in zip(table.class_sizes, table.class_angles):
        matches = [
            k
            for k, members in enumerate(group.classes)
            if len(members) == size
            and abs(group.elements[members[0]].angle - angle) < 1e-8
        ]
        if len(matches) != 1:
            raise IrrepMatchError(
                f"class with size {size}, angle {angle:.6f} matched {len(matches)} times"
            )
        alignment.append(matches[0])
    return tuple(alignment)


def element_characters(group: FiniteGroup, table: CharacterTable, label: str) -> np.ndarray:
    """Character value per group element for one irrep."""
    alignment = class_alignment(group, table)
    row = table.row(label)
    out = np.empty(group.order)
    for col, k in enumerate(alignment):
        for g in group.classes[k]:
            out[g] = row[col]
    return out


def identify_irrep(
    P: RegularOperator,
    group: FiniteGroup,
    table: CharacterTable,
    tol: float = 1e-6,
) -> tuple[str, float]:
    """Match a level's character against the table rows.

    Returns (label, residual).  Raises :class:`IrrepMatchError` when no row
    matches within tol, which flags a degenerate (non-generic) level.
    """
    values = level_character(P, group)
    alignment = class_alignment(group, table)
    aligned = np.array([values[k] for k in alignment])
    if np.max(np.abs(aligned.imag)) > tol:
        raise IrrepMatchError("level character has a non-real part")
    residuals = np.max(np.abs(table.values - aligned.real[None, :]), axis=1)
    best = int(np.argmin(residuals))
    if residuals[best] > tol:
        raise IrrepMatchError(
            f"no character row within {tol:.1e}; best residual {residuals[best]:.3e}"
        )
    return table.labels[best], float(residuals[best])


def _pairing_traces(p: AlgebraElement) -> np.ndarray:
    """Tr(U_g pi_L(p)) for every group element g."""
    group, d = p.group, p.block_dim
    n = group.order
    m4 = left_regular(p).matrix.reshape(n, d, n, d)
    sites = np.arange(n)
    out = np.empty(n, dtype=complex)
    for g in range(n):
        rows = group.mult_table[sites, g]  # U_g pi_L(p) has diagonal blocks m4[a*g, :, a, :]
        out[g] = np.einsum("aii->", m4[rows, :, sites, :])
    return out


def irrep_multiplicities(
    p: AlgebraElement,
    table: CharacterTable,
    projector_tol: float = 1e-8,
    integer_tol: float = 1e-6,
) -> dict[str, int]:
    """Integer pairing of a projection with every irrep.

    n_chi = (1/|group|) sum_g Tr(U_g pi_L(p)) chi(g); each value must land
    within integer_tol of an integer, else the computation is reported as a
    numerical failure.
    """
    group = p.group
    pp = multiply(p, p)
    pa = adjoint(p)
    keys = set(p.coeffs) | set(pp.coeffs) | set(pa.coeffs)
    err = max(
        (
            max(
                np.max(np.abs(pp.block(g) - p.block(g))),
                np.max(np.abs(pa.block(g) - p.block(g))),
            )
            for g in keys
        ),
        default=0.0,
    )
    if err > projector_tol:
        raise NotProjectorError(f"element is not a projection (residual {err:.3e})")
    traces = _pairing_traces(p)
    out = {}
    for label in table.labels:
        chi = element_characters(group, table, label)
        value = complex(np.dot(traces, chi)) / group.order
        nearest = round(value.real)
        if abs(value - nearest) > integer_tol:
            raise NonIntegerPairingError(
                f"pairing with {label} is {value:.8f}, not an integer"
            )
        out[label] = int(nearest)
    return out


def projector_to_algebra(
    P: RegularOperator, commutant_tol: float = 1e-8
) -> AlgebraElement:
    """Pull a symmetric projector back to its group-algebra preimage.

    Requires P to commute with every translation unitary; coefficients are
    read off from the identity row as block(g) = <e| P |g>.  The round trip
    through the left regular representation is verified.
    """
    group, d, n = P.group, P.block_dim, P.group.order
    m = P.matrix
    m4 = m.reshape(n, d, n, d)
    for g in range(n):
        perm = translation_permutation(group, g)
        # U_g P U_g^-1 permutes site blocks; compare against P blockwise.
        diff = m4.take(perm, axis=0).take(perm, axis=2) - m4
        if np.max(np.abs(diff)) > commutant_tol:
            raise NotInAlgebraError(
                f"projector fails to commute with translation {g} "
                f"by {np.max(np.abs(diff)):.3e}"
            )
    e = group.identity_index
    coeffs = {g: m4[e, :, g, :].copy() for g in range(n)}
    q = AlgebraElement(group, d, coeffs)
    back = left_regular(q).matrix
    if np.max(np.abs(back - m)) > commutant_tol:
        raise NotInAlgebraError("round trip through the regular representation failed")
    return q


def _unit_disk_samples(rng: np.random.Generator, count: int) -> np.ndarray:
    r = np.sqrt(rng.uniform(0.0, 1.0, count))
    theta = rng.uniform(0.0, 2.0 * math.pi, count)
    return r * np.exp(1j * theta)


def symmetrized_random_element(
    group: FiniteGroup, support: list[int], seed: int
) -> AlgebraElement:
    """Self-adjoint element with unit-disk coefficients on a fixed support.

    Coefficients are drawn in ascending element order and symmetrized as
    (a_g + conj(a_{g^-1})) / 2, so the result is exactly self-adjoint and
    reproducible for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    support = sorted(set(int(g) for g in support))
    draws = dict(zip(support, _unit_disk_samples(rng, len(support))))
    coeffs = {}
    for g in support:
        g_inv = group.inverse(g)
        partner = np.conj(draws.get(g_inv, 0.0))
        coeffs[g] = 0.5 * (draws[g] + partner)
    return AlgebraElement(group, 1, {g: np.array([[v]]) for g, v in coeffs.items()})


def random_selfadjoint(
    group: FiniteGroup,
    support_range: int,
    seed: int,
    graph: CayleyGraph | None = None,
) -> AlgebraElement:
    """Random self-adjoint element supported on a word-metric ball.

    The support is every element within support_range of the identity on the
    Cayley graph (the standard one when none is given).
    """
    if support_range < 1:
        raise ValueError("support_range must be >= 1")
    if graph is None:
        graph = standard_graph(group)
    dist = word_distances_from(graph, group.identity_index)
    support = [g for g in range(group.order) if 0 <= dist[g] <= support_range]
    return symmetrized_random_element(group, support, seed)


def tensor_multiplicities(
    table: CharacterTable, label1: str, label2: str, integer_tol: float = 1e-6
) -> dict[str, int]:
    """Decomposition of a tensor product of irreps into irreps.

    n_chi = (1/|group|) sum_c |c| chi1(c) chi2(c) conj(chi(c)), rounded to
    integers; the total dimension is verified to match.
    """
    sizes = np.array(table.class_sizes, dtype=float)
    r1 = table.row(label1)
    r2 = table.row(label2)
    out = {}
    for label in table.labels:
        value = float(np.sum(sizes * r1 * r2 * table.row(label))) / table.group_order
        nearest = round(value)
        if abs(value - nearest) > integer_tol:
            raise NonIntegerPairingError(
                f"tensor multiplicity of {label} is {value}, not an integer"
            )
        out[label] = int(nearest)
    d1 = table.dims[table.irrep_index(label1)]
    d2 = table.dims[table.irrep_index(label2)]
    total = sum(out[l] * d for l, d in zip(table.labels, table.dims))
    if total != d1 * d2:
        raise NonIntegerPairingError(
            f"tensor decomposition dimensions sum to {total}, expected {d1 * d2}"
        )
    return out
