"""Finite rotation groups generated from axis-angle data.

Rotations are proper orthogonal 3x3 matrices.  A group is closed under
floating-point matrix products once, during construction; afterwards all
group combinatorics (products, inverses, conjugacy classes) go through
exact integer tables, so repeated products never accumulate drift.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    ClosureError,
    GroupStructureError,
    InvalidAxisError,
    NotIcosahedralError,
)

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

# so(3) basis; (n . L) v = n x v, so exp(theta n . L) rotates by theta about n.
L_X = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
L_Y = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
L_Z = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

ORTHOGONALITY_TOL = 1e-12
DEFAULT_MATCH_TOL = 1e-8
DEFAULT_CLOSURE_CAP = 10_000


@dataclass(frozen=True)
class GroupTolerance:
    """Matrix-distance threshold under which two rotations are identified."""

    match_tol: float = DEFAULT_MATCH_TOL

    def __post_init__(self) -> None:
        if not 0.0 < self.match_tol < 0.1:
            raise ValueError(f"match_tol must lie in (0, 0.1), got {self.match_tol}")


@dataclass(frozen=True, eq=False)
class Rotation:
    """A proper rotation, optionally tagged with its index inside a group."""

    matrix: np.ndarray
    index: int | None = None

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"rotation matrix must be 3x3, got shape {m.shape}")
        if np.linalg.norm(m.T @ m - np.eye(3)) > ORTHOGONALITY_TOL:
            raise ValueError("matrix is not orthogonal within 1e-12")
        if abs(np.linalg.det(m) - 1.0) > ORTHOGONALITY_TOL:
            raise ValueError("matrix is not a proper rotation (det != +1)")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def angle(self) -> float:
        return rotation_angle(self)


def rotation_from_axis_angle(axis: Sequence[float], angle: float) -> Rotation:
    """Build exp(angle * axis_hat . L) via the Rodrigues formula."""
    n = np.array(axis, dtype=float)
    norm = np.linalg.norm(n)
    if not np.isfinite(norm) or norm == 0.0:
        raise InvalidAxisError("rotation axis must have positive norm")
    if not np.isfinite(angle):
        raise InvalidAxisError("rotation angle must be finite")
    n = n / norm
    k = n[0] * L_X + n[1] * L_Y + n[2] * L_Z
    m = np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)
    return Rotation(m)


def rotation_angle(r: Rotation | np.ndarray) -> float:
    """Rotation angle in [0, pi].

    Equals arccos((trace - 1) / 2) clamped to [-1, 1], but is evaluated as
    atan2(|skew part|, (trace - 1) / 2), which keeps full precision at the
    endpoints where arccos loses half the digits.
    """
    m = r.matrix if isinstance(r, Rotation) else np.asarray(r, dtype=float)
    c = (np.trace(m) - 1.0) / 2.0
    skew = (m - m.T) / 2.0
    s = math.sqrt(skew[2, 1] ** 2 + skew[0, 2] ** 2 + skew[1, 0] ** 2)
    return math.atan2(s, c)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite rotation group with exact integer combinatorics.

    ``elements[i].matrix`` realizes element ``i``; ``mult_table[i, j]`` is the
    index of ``elements[i] @ elements[j]``.  Immutable after construction.
    """

    elements: tuple[Rotation, ...]
    identity_index: int
    mult_table: np.ndarray
    inverse_table: np.ndarray
    classes: tuple[tuple[int, ...], ...]
    generator_indices: tuple[int, ...] = ()
    name: str = "group"

    def __post_init__(self) -> None:
        mult = np.array(self.mult_table, dtype=np.intp)
        inv = np.array(self.inverse_table, dtype=np.intp)
        mult.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "mult_table", mult)
        object.__setattr__(self, "inverse_table", inv)
        _check_group_axioms(self)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mult(self, i: int, j: int) -> int:
        return int(self.mult_table[i, j])

    def inverse(self, i: int) -> int:
        return int(self.inverse_table[i])

    def conjugate(self, g: int, by: int) -> int:
        """Index of by * g * by^-1."""
        return self.mult(self.mult(by, g), self.inverse(by))

    def element_order(self, i: int) -> int:
        k, power = 1, i
        while power != self.identity_index:
            power = self.mult(power, i)
            k += 1
        return k

    def angles(self) -> np.ndarray:
        return np.array([rotation_angle(r) for r in self.elements])

    def matrices(self) -> np.ndarray:
        return np.stack([r.matrix for r in self.elements])

    def class_of(self, i: int) -> int:
        for c, members in enumerate(self.classes):
            if i in members:
                return c
        raise GroupStructureError(f"element {i} missing from class partition")


def _check_group_axioms(group: FiniteGroup) -> None:
    n = len(group.elements)
    mult, inv, e = group.mult_table, group.inverse_table, group.identity_index
    if mult.shape != (n, n) or inv.shape != (n,):
        raise GroupStructureError("table shapes do not match the element count")
    idx = np.arange(n)
    if not (np.array_equal(mult[e], idx) and np.array_equal(mult[:, e], idx)):
        raise GroupStructureError("identity row/column is not the identity permutation")
    for i in range(n):
        if len(set(mult[i].tolist())) != n or len(set(mult[:, i].tolist())) != n:
            raise GroupStructureError("multiplication table is not a Latin square")
    if not np.array_equal(mult[idx, inv], np.full(n, e)):
        raise GroupStructureError("inverse table is inconsistent")
    covered = sorted(i for c in group.classes for i in c)
    if covered != list(range(n)):
        raise GroupStructureError("classes do not partition the element indices")


def _match_element(matrices: np.ndarray, m: np.ndarray, match_tol: float) -> int | None:
    """Index of m among matrices (Frobenius distance < match_tol), else None."""
    if len(matrices) == 0:
        return None
    d2 = np.einsum("kij->k", (matrices - m) ** 2)
    k = int(np.argmin(d2))
    return k if d2[k] < match_tol**2 else None


def generate_group(
    generators: Sequence[Rotation],
    tol: GroupTolerance = GroupTolerance(),
    cap: int = DEFAULT_CLOSURE_CAP,
    name: str = "group",
) -> FiniteGroup:
    """Close a generator set under multiplication.

    Elements are enumerated breadth-first from the identity, multiplying by
    each generator on the left, which makes the element indices deterministic.
    Raises :class:`ClosureError` if more than ``cap`` elements appear (generic
    angles generate infinite groups).
    """
    gen_mats = [np.array(g.matrix, dtype=float) for g in generators]
    mats: list[np.ndarray] = [np.eye(3)]
    stack = np.eye(3)[None]
    queue = [0]
    while queue:
        g = queue.pop(0)
        for s in gen_mats:
            prod = s @ mats[g]
            if _match_element(stack, prod, tol.match_tol) is None:
                if len(mats) >= cap:
                    raise ClosureError(
                        f"closure exceeded {cap} elements; generators do not "
                        "span a finite group at this tolerance"
                    )
                mats.append(prod)
                stack = np.concatenate([stack, prod[None]])
                queue.append(len(mats) - 1)
    n = len(mats)
    mult = np.empty((n, n), dtype=np.intp)
    for i in range(n):
        prods = mats[i] @ stack  # (n, 3, 3): element i times every element
        for j in range(n):
            k = _match_element(stack, prods[j], tol.match_tol)
            if k is None:
                raise GroupStructureError("product escaped the closed element set")
            mult[i, j] = k
    inv = np.empty(n, dtype=np.intp)
    for i in range(n):
        inv[i] = int(np.nonzero(mult[i] == 0)[0][0])
    elements = tuple(Rotation(m, index=i) for i, m in enumerate(mats))
    classes = _conjugacy_classes_from_tables(mult, inv, elements)
    gen_idx = []
    for g in gen_mats:
        k = _match_element(stack, g, tol.match_tol)
        if k is not None and k not in gen_idx:
            gen_idx.append(k)
    return FiniteGroup(
        elements=elements,
        identity_index=0,
        mult_table=mult,
        inverse_table=inv,
        classes=classes,
        generator_indices=tuple(gen_idx),
        name=name,
    )


def _conjugacy_classes_from_tables(
    mult: np.ndarray, inv: np.ndarray, elements: tuple[Rotation, ...]
) -> tuple[tuple[int, ...], ...]:
    n = mult.shape[0]
    seen = [False] * n
    classes = []
    for i in range(n):
        if seen[i]:
            continue
        orbit = sorted({int(mult[mult[a, i], inv[a]]) for a in range(n)})
        for j in orbit:
            seen[j] = True
        classes.append(tuple(orbit))
    # Deterministic order: size, then rotation angle, then smallest member.
    def key(c: tuple[int, ...]):
        return (len(c), round(rotation_angle(elements[c[0]]), 10), c[0])

    return tuple(sorted(classes, key=key))


def conjugacy_classes(group: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """Orbits under conjugation, sorted by (size, rotation angle)."""
    return _conjugacy_classes_from_tables(
        group.mult_table, group.inverse_table, group.elements
    )


def find_standard_generators(group: FiniteGroup) -> tuple[Rotation, Rotation]:
    """Search for a pair (c5, c2) with c5^5 = c2^2 = (c5 c2)^3 = identity.

    The pair presents the order-60 proper icosahedral group.  The search is
    exhaustive over index pairs and returns the lexicographically smallest
    match, so the result is independent of element ordering conventions.
    """
    if group.order != 60:
        raise NotIcosahedralError(
            f"group has order {group.order}, expected 60 for the icosahedral group"
        )
    fives = [i for i in range(group.order) if group.element_order(i) == 5]
    twos = [j for j in range(group.order) if group.element_order(j) == 2]
    for i in fives:
        for j in twos:
            if group.element_order(group.mult(i, j)) == 3:
                c5 = group.elements[i]
                c2 = group.elements[j]
                return (
                    Rotation(c5.matrix, index=i),
                    Rotation(c2.matrix, index=j),
                )
    raise NotIcosahedralError("no element pair satisfies the icosahedral relations")


# Class size -> angle census of the order-60 proper icosahedral group:
# identity, 12 five-fold, 12 five-fold squared, 20 three-fold, 15 two-fold.
ICOSAHEDRAL_ANGLE_CENSUS = {
    0.0: 1,
    2.0 * math.pi / 5.0: 12,
    4.0 * math.pi / 5.0: 12,
    2.0 * math.pi / 3.0: 20,
    math.pi: 15,
}


def icosahedral_group(tol: GroupTolerance = GroupTolerance()) -> FiniteGroup:
    """The proper icosahedral rotation group (order 60).

    Generated by one five-fold rotation about a vertex axis (0, 1, phi) and
    one two-fold rotation about the edge axis z; the construction is then
    validated against the known rotation-angle census.
    """
    c5 = rotation_from_axis_angle((0.0, 1.0, GOLDEN_RATIO), 2.0 * math.pi / 5.0)
    c2 = rotation_from_axis_angle((0.0, 0.0, 1.0), math.pi)
    group = generate_group([c5, c2], tol=tol, name="ip")
    census: dict[float, int] = {}
    for a in group.angles():
        key = min(ICOSAHEDRAL_ANGLE_CENSUS, key=lambda ref: abs(ref - a))
        if abs(key - a) > 1e-9:
            raise GroupStructureError(f"unexpected rotation angle {a}")
        census[key] = census.get(key, 0) + 1
    if census != ICOSAHEDRAL_ANGLE_CENSUS:
        raise GroupStructureError(f"angle census {census} is not icosahedral")
    return group


def cyclic_group(n: int, axis: Sequence[float] = (0.0, 0.0, 1.0)) -> FiniteGroup:
    """Cyclic rotation group of order n about the given axis."""
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    if n == 1:
        return generate_group([], name="c1")
    g = rotation_from_axis_angle(axis, 2.0 * math.pi / n)
    return generate_group([g], name=f"c{n}")


def permute_elements(group: FiniteGroup, perm: Sequence[int]) -> FiniteGroup:
    """Relabel elements by a permutation (new index = position in perm).

    Useful for checking that purely combinatorial operations do not depend on
    the construction order.
    """
    perm = list(perm)
    n = group.order
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of 0..order-1")
    inv_perm = [0] * n
    for new, old in enumerate(perm):
        inv_perm[old] = new
    mult = np.empty((n, n), dtype=np.intp)
    for a in range(n):
        for b in range(n):
            mult[a, b] = inv_perm[group.mult(perm[a], perm[b])]
    inv = np.array([inv_perm[group.inverse(perm[a])] for a in range(n)], dtype=np.intp)
    elements = tuple(
        Rotation(group.elements[perm[a]].matrix, index=a) for a in range(n)
    )
    classes = _conjugacy_classes_from_tables(mult, inv, elements)
    return FiniteGroup(
        elements=elements,
        identity_index=inv_perm[group.identity_index],
        mult_table=mult,
        inverse_table=inv,
        classes=classes,
        name=group.name + "-permuted",
    )


def group_to_json(group: FiniteGroup) -> dict:
    """JSON-ready dict: elements as row-major 9-float arrays plus all tables."""
    return {
        "name": group.name,
        "identity_index": group.identity_index,
        "elements": [r.matrix.reshape(9).tolist() for r in group.elements],
        "mult_table": group.mult_table.tolist(),
        "inverse_table": group.inverse_table.tolist(),
        "classes": [list(c) for c in group.classes],
    }


def group_from_json(data: dict | str) -> FiniteGroup:
    if isinstance(data, str):
        data = json.loads(data)
    elements = tuple(
        Rotation(np.array(row, dtype=float).reshape(3, 3), index=i)
        for i, row in enumerate(data["elements"])
    )
    return FiniteGroup(
        elements=elements,
        identity_index=int(data["identity_index"]),
        mult_table=np.array(data["mult_table"], dtype=np.intp),
        inverse_table=np.array(data["inverse_table"], dtype=np.intp),
        classes=tuple(tuple(int(i) for i in c) for c in data["classes"]),
        name=str(data.get("name", "group")),
    )
