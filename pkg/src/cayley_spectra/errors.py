"""Exception types raised across the package."""


class CayleySpectraError(Exception):
    """Base class for all errors raised by this package."""


class InvalidAxisError(CayleySpectraError, ValueError):
    """Rotation axis has zero (or non-finite) length."""


class ClosureError(CayleySpectraError):
    """Group closure exceeded the element cap; generators are not a finite group."""


class GroupStructureError(CayleySpectraError):
    """Multiplication/inverse/class tables violate the group axioms."""


class NotIcosahedralError(CayleySpectraError):
    """No element pair satisfies the standard icosahedral presentation."""


class InvalidGeneratorError(CayleySpectraError, ValueError):
    """Generating set is empty, contains the identity, or fails a relation check."""


class UnreachableError(CayleySpectraError):
    """Vertex not reachable; the chosen set does not generate the group."""


class AlgebraMismatchError(CayleySpectraError, ValueError):
    """Operands live over different groups or have different block dimensions."""


class NonHermitianError(CayleySpectraError):
    """Operator expected to be Hermitian is not, beyond tolerance."""


class NotProjectorError(CayleySpectraError):
    """Operator expected to satisfy P*P = P = P^dagger is not a projector."""


class NotInAlgebraError(CayleySpectraError):
    """Operator does not commute with the translation unitaries, so it has no
    group-algebra preimage."""


class NonIntegerPairingError(CayleySpectraError):
    """A pairing that must be integral came out non-integer (numerical failure)."""


class ClassInconsistencyError(CayleySpectraError):
    """A supposed class function takes different values within one conjugacy class."""


class IrrepMatchError(CayleySpectraError):
    """Level character does not match any character-table row (degenerate draw)."""


class NoGapError(CayleySpectraError):
    """Spectrum is fully degenerate; there is no gap to rescale."""


class FixedPointError(CayleySpectraError):
    """Orbit of the seed pose collapses; the seed has a nontrivial stabilizer."""


class ResonanceError(CayleySpectraError):
    """Drive frequency hits a resonance of the undamped model."""


class PositivityError(CayleySpectraError):
    """Matrix expected positive (semi)definite is not."""
