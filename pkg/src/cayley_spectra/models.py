"""Short-range fundamental models, one per irreducible representation.

Two constructions are provided.  The squared-shift model squares the shifted
adjacency element so its kernel is exactly one irrep's eigenspace.  The
truncation flow progressively switches off coefficients of an algebra
projection by distance from the identity and watches the lowest spectral gap;
the model is frozen just before the first gap closing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgebraElement,
    add,
    group_element,
    identity_element,
    left_regular,
    multiply,
    scale,
)
from .cayley import (
    CayleyGraph,
    MetricChoice,
    adjacency_element,
    graph_diameter,
    standard_graph,
    word_distances_from,
)
from .rotations import FiniteGroup, rotation_angle
from .spectra import DEFAULT_CLUSTER_TOL, cluster_eigenvalues

IRREP_LABELS = ("Ag", "T1g", "T2g", "Gg", "Hg")

DEFAULT_GAP_TOL = 1e-6
DEFAULT_T_SAMPLES = 400


def adjacency_irrep_eigenvalues() -> dict[str, float]:
    """Eigenvalues of the weighted Cayley adjacency operator whose eigenspaces
    carry exactly one copy of each irrep, keyed by irrep label."""
    s5 = math.sqrt(5.0)
    return {
        "Ag": -2.0,
        "T1g": (5.0 - s5) / 4.0,
        "T2g": (5.0 + s5) / 4.0,
        "Gg": (1.0 + math.sqrt(21.0)) / 4.0,
        "Hg": (1.0 + math.sqrt(13.0)) / 4.0,
    }


@dataclass(frozen=True)
class CutoffFunction:
    """Smooth ramp: 1 below 0, 0 above epsilon, cosine in between."""

    epsilon: float = 1e-3

    def __post_init__(self) -> None:
        if self.epsilon <= 0.0:
            raise ValueError("cutoff width must be positive")

    def __call__(self, x: float) -> float:
        if x <= 0.0:
            return 1.0
        if x >= self.epsilon:
            return 0.0
        return 0.5 * (1.0 + math.cos(math.pi * x / self.epsilon))


@dataclass(frozen=True, eq=False)
class TruncationSweep:
    """Record of a truncation sweep: spectra, lowest gap and cluster size per
    sample, and the detected first gap closing (if any)."""

    t: np.ndarray
    eigenvalues: np.ndarray  # (num samples, hilbert dim), ascending rows
    lowest_gap: np.ndarray
    lowest_multiplicity: np.ndarray
    t_c: float | None
    pre_index: int | None
    post_index: int | None

    @property
    def closed(self) -> bool:
        return self.t_c is not None


@dataclass(frozen=True, eq=False)
class FundamentalModel:
    """A short-range self-adjoint element whose marked spectral cluster carries
    one copy of one irrep."""

    irrep_label: str | None
    element: AlgebraElement
    method: str  # 'squared_shift' or 'truncation'
    lambda_chi: float | None = None
    t_star: float | None = None
    sweep: TruncationSweep | None = None
    post_element: AlgebraElement | None = None


def squared_shift_model(
    group: FiniteGroup,
    c5: int,
    c2: int,
    lambda_chi: float,
    irrep_label: str | None = None,
) -> FundamentalModel:
    """Square of the shifted adjacency element, computed by convolution.

    The result is positive semidefinite and its kernel is the adjacency
    eigenspace at lambda_chi (empty if lambda_chi is not an eigenvalue).
    """
    delta = adjacency_element(group, c5, c2)
    shifted = add(delta, scale(lambda_chi, identity_element(group)))
    h = multiply(shifted, shifted)
    return FundamentalModel(
        irrep_label=irrep_label,
        element=h,
        method="squared_shift",
        lambda_chi=float(lambda_chi),
    )


def coupling_range(q: AlgebraElement, graph: CayleyGraph | None = None) -> int:
    """Largest word distance from the identity over the support of q."""
    if graph is None:
        graph = standard_graph(q.group)
    dist = word_distances_from(graph, q.group.identity_index)
    if not q.coeffs:
        return 0
    return int(max(dist[g] for g in q.support))


def support_distances(
    q: AlgebraElement,
    metric: MetricChoice,
    graph: CayleyGraph | None = None,
) -> dict[int, float]:
    """Distance from the identity to each support element, in the chosen metric."""
    group = q.group
    if metric is MetricChoice.WORD:
        if graph is None:
            graph = standard_graph(group)
        dist = word_distances_from(graph, group.identity_index)
        return {g: float(dist[g]) for g in q.support}
    return {g: rotation_angle(group.elements[g]) for g in q.support}


def truncation_family(
    p: AlgebraElement,
    t: float,
    metric: MetricChoice = MetricChoice.ANGULAR,
    cutoff: CutoffFunction = CutoffFunction(),
    sign: str = "plus",
    graph: CayleyGraph | None = None,
    distances: dict[int, float] | None = None,
) -> AlgebraElement:
    """Coefficients of p damped by the cutoff of (t - distance to identity).

    With sign 'plus' the element itself is truncated, so the small-t spectrum
    of a truncated projection is {0, 1}; 'minus' negates the result, giving
    the mirrored spectrum {-1, 0}.
    """
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    if distances is None:
        distances = support_distances(p, metric, graph)
    factor = 1.0 if sign == "plus" else -1.0
    coeffs = {}
    for g, block in p.coeffs.items():
        eta = cutoff(t - distances[g])
        if eta != 0.0:
            coeffs[g] = factor * eta * block
    return AlgebraElement(p.group, p.block_dim, coeffs)


def default_t_grid(
    p: AlgebraElement,
    metric: MetricChoice,
    cutoff: CutoffFunction,
    graph: CayleyGraph | None = None,
    base_samples: int = DEFAULT_T_SAMPLES,
) -> np.ndarray:
    """Sweep grid: uniform samples plus dense windows around each distance
    shell of the support.

    All spectral motion happens inside the cutoff ramps [d, d + epsilon]; a
    uniform grid alone would step right over them, so each shell window is
    refined explicitly.
    """
    eps = cutoff.epsilon
    distances = support_distances(p, metric, graph)
    if metric is MetricChoice.WORD:
        if graph is None:
            graph = standard_graph(p.group)
        t_end = graph_diameter(graph) + 1.0
    else:
        t_end = math.pi + 2.0 * eps  # let the outermost shell finish its ramp
    parts = [np.linspace(0.0, t_end, base_samples)]
    for d in _distance_shells(distances.values()):
        parts.append(np.linspace(d - 0.25 * eps, d + 1.25 * eps, 151))
    grid = np.unique(np.concatenate(parts))
    return grid[(grid >= 0.0) & (grid <= t_end)]


def _distance_shells(values, tol: float = 1e-9) -> list[float]:
    """Distinct distance values, merging floating-point near-duplicates."""
    shells: list[float] = []
    for d in sorted(values):
        if not shells or d - shells[-1] > tol:
            shells.append(float(d))
    return shells


def _lowest_gap_and_mult(w: np.ndarray, cluster_tol: float) -> tuple[float, int]:
    runs = cluster_eigenvalues(w, cluster_tol)
    m1 = runs[0][1] - runs[0][0]
    if len(runs) == 1:
        return 0.0, m1
    c1 = float(np.mean(w[runs[0][0] : runs[0][1]]))
    c2 = float(np.mean(w[runs[1][0] : runs[1][1]]))
    return c2 - c1, m1


def truncation_model(
    p: AlgebraElement,
    metric: MetricChoice = MetricChoice.ANGULAR,
    cutoff: CutoffFunction = CutoffFunction(),
    t_grid: np.ndarray | None = None,
    sign: str = "plus",
    gap_tol: float = DEFAULT_GAP_TOL,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    graph: CayleyGraph | None = None,
    irrep_label: str | None = None,
    refine_tol: float = 1e-6,
) -> FundamentalModel:
    """Sweep the truncation parameter and freeze the model before the first
    closing of the lowest spectral gap.

    A closing is detected either by the sampled gap dropping below gap_tol or
    by the multiplicity of the lowest cluster changing between samples (a
    split or merge, which forces the gap through zero in between); the event
    location is then refined by bisection.  If the gap never closes, the
    fully truncated end of the sweep is returned.
    """
    distances = support_distances(p, metric, graph)
    if t_grid is None:
        t_grid = default_t_grid(p, metric, cutoff, graph)
    t_grid = np.asarray(t_grid, dtype=float)

    def family(t: float) -> AlgebraElement:
        return truncation_family(
            p, t, metric=metric, cutoff=cutoff, sign=sign, distances=distances
        )

    # The sweep evaluates thousands of family members; assemble their regular
    # representations by weighting a precomputed stack of one-element images
    # instead of going through AlgebraElement construction each time.
    group, d = p.group, p.block_dim
    n = group.order
    support = p.support
    dists = np.array([distances[g] for g in support])
    factor = 1.0 if sign == "plus" else -1.0
    term_stack = np.empty((len(support), n * d, n * d), dtype=complex)
    cols = np.arange(n)
    for k, g in enumerate(support):
        m = np.zeros((n, d, n, d), dtype=complex)
        m[group.mult_table[g, :], :, cols, :] += p.coeffs[g]
        term_stack[k] = m.reshape(n * d, n * d)

    def spectrum(t: float) -> np.ndarray:
        eta = factor * np.array([cutoff(t - dist) for dist in dists])
        return np.linalg.eigvalsh(np.tensordot(eta, term_stack, axes=1))

    spectra = np.stack([spectrum(t) for t in t_grid])
    gaps = np.empty(len(t_grid))
    mults = np.empty(len(t_grid), dtype=int)
    for i, w in enumerate(spectra):
        gaps[i], mults[i] = _lowest_gap_and_mult(w, cluster_tol)

    event = None
    for i in range(len(t_grid)):
        if gaps[i] < gap_tol or (i > 0 and mults[i] != mults[i - 1]):
            event = i
            break

    t_c: float | None = None
    pre_index: int | None = None
    post_index: int | None = None
    if event is not None and event > 0:
        lo, hi = float(t_grid[event - 1]), float(t_grid[event])
        m_ref = int(mults[event - 1])
        while hi - lo > refine_tol:
            mid = 0.5 * (lo + hi)
            gap_mid, m_mid = _lowest_gap_and_mult(spectrum(mid), cluster_tol)
            if gap_mid < gap_tol or m_mid != m_ref:
                hi = mid
            else:
                lo = mid
        t_c = hi
        pre_index = event - 1
        post_index = event
    elif event == 0:
        t_c = float(t_grid[0])
        pre_index = None
        post_index = 0

    sweep = TruncationSweep(
        t=t_grid,
        eigenvalues=spectra,
        lowest_gap=gaps,
        lowest_multiplicity=mults,
        t_c=t_c,
        pre_index=pre_index,
        post_index=post_index,
    )
    if pre_index is not None:
        t_star = float(t_grid[pre_index])
        post = family(float(t_grid[post_index]))
    else:
        t_star = float(t_grid[-1])  # no closing: fully truncated end
        post = None
    return FundamentalModel(
        irrep_label=irrep_label,
        element=family(t_star),
        method="truncation",
        t_star=t_star,
        sweep=sweep,
        post_element=post,
    )
