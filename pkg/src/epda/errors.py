"""Exception hierarchy shared across the package."""


class EpdaError(Exception):
    """Base class for all errors raised by this package."""


class MalformedEncoding(EpdaError):
    """Byte string has the wrong length or an out-of-range field."""


class NotOnCurve(EpdaError):
    """Decoded x-coordinate does not correspond to a curve point."""


class WrongSubgroup(EpdaError):
    """Element is on the curve (or in the field) but outside the prime-order subgroup."""


class MalformedElement(EpdaError):
    """A group element fails structural validation (identity where forbidden, off-curve, ...)."""


class DegenerateIdentity(EpdaError):
    """Identity hash collides with the master secret; the manager must reject it."""


class InvalidPartialKey(EpdaError):
    """Partial private key fails its pairing validity check."""


class KeyRingMismatch(EpdaError):
    """Signing key does not correspond to the claimed ring position."""


class LengthMismatch(EpdaError):
    """Signature and ring disagree on the number of members."""


class DuplicateIdentity(EpdaError):
    """Identity already registered (or already present in a ring)."""


class UnknownIdentity(EpdaError):
    """Identity has not completed the first registration phase."""


class MalformedReport(EpdaError):
    """Sensing report cannot be parsed into its ring/data/signature parts."""


class TransportError(EpdaError):
    """Channel-level failure, distinct from a protocol-level rejection."""
