"""Exception taxonomy. Input/data problems exit 2 at the CLI; I/O faults exit 1.

Each class carries a stable `code` used in messages and service payloads.
"""


class CdrError(Exception):
    code = "CdrError"

    def __str__(self) -> str:  # "Code: detail" so shell users can grep codes
        base = super().__str__()
        return f"{self.code}: {base}" if base else self.code


class InputFormatError(CdrError):
    """Malformed or inconsistent on-disk input."""

    code = "InputFormatError"


class BadMagicError(InputFormatError):
    code = "BadMagic"


class VersionUnsupportedError(InputFormatError):
    code = "VersionUnsupported"


class LengthMismatchError(InputFormatError):
    code = "LengthMismatch"


class SidecarRowGapError(InputFormatError):
    code = "SidecarRowGap"


class MalformedJsonError(InputFormatError):
    code = "MalformedJson"


class DuplicateVerdictError(InputFormatError):
    code = "DuplicateVerdict"


class DuplicateConfigIdError(InputFormatError):
    code = "DuplicateConfigId"


class KnobOutOfRangeError(InputFormatError):
    code = "KnobOutOfRange"


class InvalidTableError(InputFormatError):
    code = "InvalidTable"


class MetricInputError(CdrError):
    """Metric preconditions not met by the data."""

    code = "MetricInputError"


class DimMismatchError(MetricInputError):
    code = "DimMismatch"


class ZeroVectorError(MetricInputError):
    code = "ZeroVector"


class TooFewRowsError(MetricInputError):
    code = "TooFewRows"


class MissingVerdictsError(MetricInputError):
    code = "MissingVerdicts"


class NeedAtLeastTwoSamplesError(MetricInputError):
    code = "NeedAtLeastTwoSamples"


class NoRealReferencesError(MetricInputError):
    code = "NoRealReferences"


class MissingPromptEmbeddingError(MetricInputError):
    code = "MissingPromptEmbedding"


class CriterionUnavailableError(MetricInputError):
    code = "CriterionUnavailable"


class NonFiniteKernelError(MetricInputError):
    code = "NonFiniteKernel"


class KernelNotPsdError(MetricInputError):
    code = "KernelNotPsd"


class EmptyInputError(MetricInputError):
    code = "EmptyInput"


class RegistryError(CdrError):
    code = "RegistryError"


class DuplicateAxisError(RegistryError):
    code = "DuplicateAxis"


class UnknownAxisError(RegistryError):
    code = "UnknownAxis"


class UnknownDirectionError(RegistryError):
    code = "UnknownDirection"


class SweepError(CdrError):
    code = "SweepError"


class UnresolvedBindingError(SweepError):
    code = "UnresolvedBinding"


class NoCompletePointsError(SweepError):
    code = "NoCompletePoints"


class UnknownPromptError(CdrError):
    code = "UnknownPrompt"
