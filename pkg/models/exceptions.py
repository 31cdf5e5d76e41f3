class LocalizerLabError(Exception):
    """
    Base class for every error raised by the localizer lab.
    """


class ConfigurationError(LocalizerLabError):
    """
    Invalid user input: malformed grids, unknown models, bad parameter records.
    """


class DimensionMismatchError(LocalizerLabError, ValueError):
    """
    Tuple, representation and probe point disagree in size.
    """


class NonHermitianError(LocalizerLabError, ValueError):
    """
    A matrix handed to a Hermitian tuple is not Hermitian to tolerance.
    """


class NumericalError(LocalizerLabError):
    """
    Base class for failures of the numerics themselves.
    """


class SingularLocalizerError(NumericalError):
    """
    The localizer is singular to tolerance, so its signature is undefined.
    """

    def __init__(self, gap: float, singular_tol: float):
        super().__init__(f"Localizer gap {gap:.3e} is below the singular tolerance {singular_tol:.3e}; "
                         f"the probe point lies on or near the Clifford spectrum.")
        self.gap = gap
        self.singular_tol = singular_tol


class OddSignatureError(NumericalError):
    """
    The signature is odd, so half of it is not an index.
    """

    def __init__(self, signature: int):
        super().__init__(f"Signature {signature} is odd; check the representation and its orientation.")
        self.signature = signature


class SolverConvergenceError(NumericalError):
    """
    An iterative eigensolver or factorization did not deliver a trustworthy result.
    """

    def __init__(self, message: str, residual: float = float('nan')):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class RayOriginOnSpectrumError(NumericalError):
    """
    A ray starts on the Clifford spectrum, so crossings cannot be counted from it.
    """

    def __init__(self, gap: float, eps: float):
        super().__init__(f"Ray origin has gap {gap:.3e} <= eps {eps:.3e}.")
        self.gap = gap
        self.eps = eps
