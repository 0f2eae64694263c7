"""The group algebra with matrix coefficients and its regular representations.

An :class:`AlgebraElement` is a finitely supported map from group elements to
D x D complex blocks.  Products are convolutions resolved through the group's
integer tables.  ``left_regular``/``right_regular`` materialize elements as
dense operators on the (D * |group|)-dimensional Hilbert space, with basis
index ``site * D + internal``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .errors import AlgebraMismatchError
from .rotations import FiniteGroup


def _same_group(a: FiniteGroup, b: FiniteGroup) -> bool:
    return a is b or (a.order == b.order and np.array_equal(a.mult_table, b.mult_table))


def _as_block(value, block_dim: int) -> np.ndarray:
    block = np.asarray(value, dtype=complex)
    if block.ndim == 0:
        block = block.reshape(1, 1)
    if block.shape != (block_dim, block_dim):
        raise AlgebraMismatchError(
            f"coefficient block has shape {block.shape}, expected ({block_dim}, {block_dim})"
        )
    return block


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Finitely supported group-algebra element with D x D coefficient blocks.

    Zero blocks are dropped so the support is canonical.  Scalars are accepted
    wherever a 1 x 1 block is expected.
    """

    group: FiniteGroup
    block_dim: int
    coeffs: Mapping[int, np.ndarray]

    def __post_init__(self) -> None:
        clean: dict[int, np.ndarray] = {}
        for g, value in self.coeffs.items():
            block = _as_block(value, self.block_dim)
            if not np.any(block):
                continue
            block = block.copy()
            block.setflags(write=False)
            clean[int(g)] = block
        object.__setattr__(self, "coeffs", clean)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    def block(self, g: int) -> np.ndarray:
        z = self.coeffs.get(int(g))
        return z if z is not None else np.zeros((self.block_dim, self.block_dim), complex)

    def items(self) -> Iterator[tuple[int, np.ndarray]]:
        return iter(sorted(self.coeffs.items()))

    def is_selfadjoint(self, tol: float = 1e-12) -> bool:
        q = adjoint(self)
        keys = set(self.coeffs) | set(q.coeffs)
        return all(np.max(np.abs(self.block(g) - q.block(g))) <= tol for g in keys)

    # Convenience arithmetic; the module-level functions are the primary API.
    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return add(self, other)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return add(self, scale(-1.0, other))

    def __neg__(self) -> "AlgebraElement":
        return scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return scale(other, self)

    def __rmul__(self, scalar) -> "AlgebraElement":
        return scale(scalar, self)


def identity_element(group: FiniteGroup, block_dim: int = 1) -> AlgebraElement:
    return AlgebraElement(group, block_dim, {group.identity_index: np.eye(block_dim)})


def group_element(
    group: FiniteGroup, index: int, coefficient: complex = 1.0, block_dim: int = 1
) -> AlgebraElement:
    return AlgebraElement(group, block_dim, {index: coefficient * np.eye(block_dim)})


def from_scalar_coeffs(group: FiniteGroup, coeffs: Mapping[int, complex]) -> AlgebraElement:
    return AlgebraElement(group, 1, {g: np.array([[v]], complex) for g, v in coeffs.items()})


def zero_element(group: FiniteGroup, block_dim: int = 1) -> AlgebraElement:
    return AlgebraElement(group, block_dim, {})


def _check_compatible(q: AlgebraElement, r: AlgebraElement) -> None:
    if not _same_group(q.group, r.group):
        raise AlgebraMismatchError("elements live over different groups")
    if q.block_dim != r.block_dim:
        raise AlgebraMismatchError(
            f"block dimensions differ: {q.block_dim} vs {r.block_dim}"
        )


def add(q: AlgebraElement, r: AlgebraElement) -> AlgebraElement:
    _check_compatible(q, r)
    out: dict[int, np.ndarray] = {g: b.copy() for g, b in q.coeffs.items()}
    for g, b in r.coeffs.items():
        out[g] = out.get(g, 0) + b
    return AlgebraElement(q.group, q.block_dim, out)


def scale(scalar: complex, q: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(q.group, q.block_dim, {g: scalar * b for g, b in q.coeffs.items()})


def multiply(q: AlgebraElement, r: AlgebraElement) -> AlgebraElement:
    """Convolution product: the coefficient at g collects all products
    block_q(g1) @ block_r(g2) with g1 * g2 = g, via the integer tables."""
    _check_compatible(q, r)
    mult = q.group.mult_table
    out: dict[int, np.ndarray] = {}
    for g1, b1 in q.coeffs.items():
        for g2, b2 in r.coeffs.items():
            g = int(mult[g1, g2])
            prod = b1 @ b2
            if g in out:
                out[g] = out[g] + prod
            else:
                out[g] = prod
    return AlgebraElement(q.group, q.block_dim, out)


def adjoint(q: AlgebraElement) -> AlgebraElement:
    """Star operation: the block at g becomes the conjugate transpose of the
    block at g^-1."""
    inv = q.group.inverse_table
    return AlgebraElement(
        q.group, q.block_dim, {int(inv[g]): b.conj().T for g, b in q.coeffs.items()}
    )


def canonical_trace(q: AlgebraElement):
    """Coefficient block at the identity; a faithful positive trace.

    Returns a complex scalar when the block dimension is 1, else the D x D
    block.  Equals Tr(left_regular(q)) / |group| blockwise.
    """
    block = q.block(q.group.identity_index)
    if q.block_dim == 1:
        return complex(block[0, 0])
    return block.copy()


@dataclass(frozen=True, eq=False)
class RegularOperator:
    """Dense operator on C^D tensor l2(group).

    ``side`` records how it was produced: 'left'/'right' for regular
    representations of an algebra element, 'none' for operators (projectors,
    disorder, rescalings) that are not a representation image.
    """

    matrix: np.ndarray
    group: FiniteGroup
    block_dim: int = 1
    side: str = "none"
    source: AlgebraElement | None = None

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        dim = self.group.order * self.block_dim
        if m.shape != (dim, dim):
            raise ValueError(f"matrix must be {dim} x {dim}, got {m.shape}")
        if self.side not in ("left", "right", "none"):
            raise ValueError(f"unknown side {self.side!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)


def _assemble(q: AlgebraElement, row_of_col: np.ndarray) -> np.ndarray:
    n, d = q.group.order, q.block_dim
    m = np.zeros((n, d, n, d), dtype=complex)
    cols = np.arange(n)
    for g, block in q.coeffs.items():
        m[row_of_col(g), :, cols, :] += block
    return m.reshape(n * d, n * d)


def left_regular(q: AlgebraElement) -> RegularOperator:
    """pi_L(q): sends basis vector |g'> to sum_g block(g) |g g'>."""
    mult = q.group.mult_table
    matrix = _assemble(q, lambda g: mult[g, :])
    return RegularOperator(matrix, q.group, q.block_dim, side="left", source=q)


def right_regular(q: AlgebraElement) -> RegularOperator:
    """pi_R(q): sends basis vector |g'> to sum_g block(g) |g' g^-1>."""
    mult, inv = q.group.mult_table, q.group.inverse_table
    matrix = _assemble(q, lambda g: mult[:, inv[g]])
    return RegularOperator(matrix, q.group, q.block_dim, side="right", source=q)


def translation_unitary(group: FiniteGroup, g: int, block_dim: int = 1) -> RegularOperator:
    """U_g = pi_R(g): the right-translation unitary every model commutes with."""
    return right_regular(group_element(group, g, block_dim=block_dim))


def translation_permutation(group: FiniteGroup, g: int) -> np.ndarray:
    """Site permutation of U_g: U_g maps site s to perm[s] = s * g^-1."""
    return np.asarray(group.mult_table[:, group.inverse_table[g]])


def operator_norm(q: AlgebraElement) -> float:
    """Spectral norm of pi_L(q), via Hermitian diagonalization of q* q."""
    m = left_regular(multiply(adjoint(q), q)).matrix
    eigs = np.linalg.eigvalsh(m)
    return float(np.sqrt(max(eigs[-1], 0.0)))


def element_to_json(q: AlgebraElement) -> dict:
    """JSON-ready dict: list of {element_index, block} with row-major
    (re, im) pairs per block entry."""
    terms = []
    for g, block in q.items():
        flat = [[float(z.real), float(z.imag)] for z in block.reshape(-1)]
        terms.append({"element_index": int(g), "block": flat})
    return {"block_dim": q.block_dim, "terms": terms}


def element_from_json(group: FiniteGroup, data: dict) -> AlgebraElement:
    d = int(data["block_dim"])
    coeffs = {}
    for term in data["terms"]:
        flat = np.array([complex(re, im) for re, im in term["block"]])
        coeffs[int(term["element_index"])] = flat.reshape(d, d)
    return AlgebraElement(group, d, coeffs)
