"""Exception hierarchy shared by every zkset module."""


class ZKSetError(Exception):
    """Base class for all zkset errors."""


class ParameterError(ZKSetError, ValueError):
    """An argument is outside the range an operation accepts."""


class UnsupportedBackendError(ParameterError):
    """The requested curve or group backend does not exist."""


class DecodeError(ZKSetError, ValueError):
    """Bytes are truncated, non-canonical, or not a valid group element."""


class MalformedProofError(DecodeError):
    """A proof decodes but its structure does not fit the statement."""


class MissingSetupSecretError(ZKSetError):
    """RSA exponent arithmetic was requested without phi(N)."""


class ExtractionError(ZKSetError):
    """A witness cannot be extracted from the given transcripts."""


class NonInvertibleChallengeError(ExtractionError):
    """The challenge gap shares a factor with the exponent modulus."""


class EmptySetError(ParameterError):
    """A set operation would produce (or received) an empty set."""


class DuplicateElementError(ParameterError):
    """The same element was supplied twice."""


class ElementMembershipError(ParameterError):
    """Add of a present element, or removal of an absent one."""


class ParamsMismatchError(ZKSetError, ValueError):
    """Objects built over different groups were combined."""


class AnalysisIncompleteError(ZKSetError):
    """Benchmark records do not cover what an analysis needs."""
