"""Exception types raised by the package."""

import numpy as np


class ParameterError(ValueError):
    """Invalid argument value or inconsistent dimensions."""


class NumericalRankError(np.linalg.LinAlgError):
    """A channel matrix is too ill-conditioned to invert."""


class IllConditionedPdpError(ValueError):
    """The PDP spectrum comes too close to zero inside the subcarrier band."""


class DomainError(ValueError):
    """A closed form is evaluated outside its range of validity (e.g. ZF with N <= K)."""


class WindowError(IndexError):
    """Requested symbol lag falls outside the support of a Toeplitz selector."""
