"""
Exception hierarchy.

Precondition failures on caller input derive from ValueError; broken internal
certificates (a discriminant that will not drop, a mass that overshoots) derive
from RuntimeError. Verification failures are never raised, they are reported.
"""


class CohenEisensteinError(Exception):
    """Base class for every error raised by this package"""


class ConfigError(CohenEisensteinError, ValueError):
    """Invalid level or run configuration"""


class CongruencePreconditionError(CohenEisensteinError, ValueError):
    """The prime l violates the hypotheses of a congruence suite"""


class CertificateError(CohenEisensteinError, RuntimeError):
    """An internal exactness certificate failed"""


class SearchExhaustedError(CertificateError):
    """No quaternion algebra found within the configured search bound"""


class SaturationError(CertificateError):
    """Maximal order saturation could not enlarge the order at a prime"""

    def __init__(self, prime: int, discriminant: int):
        super().__init__(f"saturation failed at p={prime} (reduced discriminant {discriminant})")
        self.prime = prime
        self.discriminant = discriminant


class SplittingNotFoundError(CertificateError):
    """No usable zero divisor mod q for the Eichler order construction"""

    def __init__(self, prime: int):
        super().__init__(f"no splitting found mod q={prime}")
        self.prime = prime


class MassOvershootError(CertificateError):
    """Class enumeration exceeded (or could not reach) the mass"""


class NoRationalSplittingError(CertificateError):
    """Simultaneous rational eigenspaces stayed more than one-dimensional"""

    def __init__(self, dimensions):
        super().__init__(f"eigenspaces did not split, dimensions {list(dimensions)}")
        self.dimensions = list(dimensions)


class EmbeddingCountError(CertificateError):
    """An optimal embedding count came out non-integral"""


class LatticeError(CertificateError):
    """A lattice failed an integrality or rank requirement"""


class CacheError(CohenEisensteinError):
    """A cached class set is unreadable or failed validation"""
