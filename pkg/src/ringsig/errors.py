"""Exception types raised across the package."""


class RingsigError(Exception):
    """Base class for all package-specific errors."""


class LengthNotDivisible(RingsigError):
    """Bit string length is not a multiple of bits-per-symbol; caller must pad."""


class IndexOutOfRange(RingsigError):
    """Symbol index outside [0, order)."""


class LengthMismatch(RingsigError):
    """Paired sequences (samples vs. factors, captured vs. expected) differ in length."""


class DegenerateFactor(RingsigError):
    """A magnitude factor is below the inversion floor."""


class DomainError(RingsigError):
    """Numeric argument outside its legal domain."""


class EmptyInput(RingsigError):
    """Operation received an empty sample block."""


class TooFewSamples(RingsigError):
    """Input block is shorter than the operation's minimum."""


class NoFrame(RingsigError):
    """Header correlation peak below the detection threshold."""


class PayloadTooLarge(RingsigError):
    """Payload bits exceed the frame's data-bit budget."""


class EmptyMessage(RingsigError):
    """Message expansion requires at least one byte."""


class MissingClass(RingsigError):
    """Training dataset lacks one of the required modulation classes."""


class ModelMissing(RingsigError):
    """A trained classifier model is required but not available."""


class NotPsk(RingsigError):
    """Operation is defined for PSK schemes only."""


class NotFitted(RingsigError):
    """Estimator used before fit()."""


class ConfigError(RingsigError):
    """Bad experiment configuration (unknown key, bad type, bad value)."""
