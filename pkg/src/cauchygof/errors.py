"""Exception and warning types shared across the package."""


class CauchyGofError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateSampleError(CauchyGofError):
    """Sample has zero half-interquartile range (or zero standard deviation
    where a kernel bandwidth is needed), so scale-dependent statistics are
    undefined."""


class TiedDataError(CauchyGofError):
    """Exactly tied observations produced a zero spacing inside an entropy
    estimator.  Ties have probability zero under any continuous model but do
    occur in rounded data; jitter the input explicitly if you accept the
    approximation."""


class EstimatorDomainError(CauchyGofError):
    """An estimator produced a nonpositive argument to ``log`` for a reason
    other than tied data (only possible under non-default readings such as the
    literal difference form of the kernel-spacing entropy estimator)."""


class TableLookupError(CauchyGofError):
    """A critical-value table is missing the requested entry or was generated
    under an incompatible configuration."""


class SupportExtensionWarning(UserWarning):
    """The interval [a, b] = [mean - k*sd, mean + k*sd] used by the augmented
    spacing entropy estimator failed to cover the sample range and was widened
    to keep all spacings positive."""
