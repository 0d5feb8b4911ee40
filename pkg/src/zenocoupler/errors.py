"""Exception types shared across the package."""


class ZenoCouplerError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameters(ZenoCouplerError):
    """A parameter set violates a hard precondition (e.g. k = 0)."""


class DegenerateParameters(ZenoCouplerError):
    """Parameter set sits on the 2|k| = |dk| resonance where the
    closed-form coefficient denominators vanish."""


class ExcessiveTruncationLoss(ZenoCouplerError):
    """Fock-space cutoffs are too small for the requested amplitudes."""


class NonConvergence(ZenoCouplerError):
    """Step doubling exceeded the configured ceiling."""


class InternalConsistencyError(ZenoCouplerError):
    """A quantity that must be real came out with a significant
    imaginary residue."""
