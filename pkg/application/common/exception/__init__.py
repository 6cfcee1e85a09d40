from .error_code_enum import EvalErrorCodeEnum
from .exception import (
    ConfigError,
    ConfigMismatch,
    DegenerateSize,
    EmptyConfig,
    EncodeFailure,
    EvalBusinessException,
    HttpStatusError,
    InvalidImage,
    ManifestParseError,
    ManifestValidationError,
    MetricsInputError,
    NonPositiveVG,
    PartialResultsRefused,
    RequestTimeout,
    RetriesExhausted,
    SeverityMissing,
    SeverityNotApplicable,
    TransportError,
    UnknownAugmentation,
    ZeroReferenceError,
)

__all__ = [
    "EvalErrorCodeEnum",
    "EvalBusinessException",
    "ConfigError",
    "ConfigMismatch",
    "DegenerateSize",
    "EmptyConfig",
    "EncodeFailure",
    "HttpStatusError",
    "InvalidImage",
    "ManifestParseError",
    "ManifestValidationError",
    "MetricsInputError",
    "NonPositiveVG",
    "PartialResultsRefused",
    "RequestTimeout",
    "RetriesExhausted",
    "SeverityMissing",
    "SeverityNotApplicable",
    "TransportError",
    "UnknownAugmentation",
    "ZeroReferenceError",
]
