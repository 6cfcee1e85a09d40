from typing import Optional

from application.common.exception.error_code_enum import EvalErrorCodeEnum


class EvalBusinessException(Exception):
    """基础业务异常类"""
    message: str
    code: str
    exit_code: int

    error_code: EvalErrorCodeEnum = EvalErrorCodeEnum.ERROR

    def __init__(self, error_code: Optional[EvalErrorCodeEnum] = None, message: str = ""):
        error_code = error_code or self.error_code
        self.error_code = error_code
        self.message = message if message else error_code.message
        self.code = error_code.code
        self.exit_code = error_code.exit_code
        super().__init__(self.message)


class ConfigError(EvalBusinessException):
    error_code = EvalErrorCodeEnum.CONFIG_ERROR


class ConfigMismatch(EvalBusinessException):
    error_code = EvalErrorCodeEnum.CONFIG_MISMATCH


# ---------------- 腐蚀引擎 ----------------

class UnknownAugmentation(EvalBusinessException):
    error_code = EvalErrorCodeEnum.UNKNOWN_AUGMENTATION

    def __init__(self, aug_id: str):
        self.aug_id = aug_id
        super().__init__(message=f"未知的增强: {aug_id}")


class SeverityMissing(EvalBusinessException):
    error_code = EvalErrorCodeEnum.SEVERITY_MISSING

    def __init__(self, aug_id: str):
        super().__init__(message=f"增强 {aug_id} 需要指定严重程度 (low/mid/high)")


class SeverityNotApplicable(EvalBusinessException):
    error_code = EvalErrorCodeEnum.SEVERITY_NOT_APPLICABLE

    def __init__(self, aug_id: str):
        super().__init__(message=f"二值增强 {aug_id} 不接受严重程度")


class DegenerateSize(EvalBusinessException):
    """仅用于告警记录，resample 不会抛出"""
    error_code = EvalErrorCodeEnum.DEGENERATE_SIZE


class EncodeFailure(EvalBusinessException):
    error_code = EvalErrorCodeEnum.ENCODE_FAILURE


class InvalidImage(EvalBusinessException):
    error_code = EvalErrorCodeEnum.INVALID_IMAGE


# ---------------- 数据集 ----------------

class ManifestParseError(EvalBusinessException):
    error_code = EvalErrorCodeEnum.MANIFEST_PARSE_ERROR

    def __init__(self, line: int, detail: str = ""):
        self.line = line
        super().__init__(message=f"manifest 第 {line} 行解析失败: {detail}")


class ManifestValidationError(EvalBusinessException):
    error_code = EvalErrorCodeEnum.MANIFEST_VALIDATION_ERROR

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"manifest 第 {line} 行: " if line is not None else ""
        super().__init__(message=f"{prefix}{message}")


# ---------------- 推理端点 ----------------

class TransportError(EvalBusinessException):
    error_code = EvalErrorCodeEnum.TRANSPORT_ERROR


class HttpStatusError(EvalBusinessException):
    error_code = EvalErrorCodeEnum.HTTP_STATUS_ERROR

    def __init__(self, status: int, body: str = ""):
        self.status = status
        super().__init__(message=f"推理端点返回 HTTP {status}: {body[:200]}")


class RequestTimeout(EvalBusinessException):
    error_code = EvalErrorCodeEnum.REQUEST_TIMEOUT


class RetriesExhausted(EvalBusinessException):
    error_code = EvalErrorCodeEnum.RETRIES_EXHAUSTED

    def __init__(self, attempts: int, last_error: Exception):
        self.attempts = attempts
        self.last_error = last_error
        super().__init__(message=f"重试 {attempts} 次后仍失败: {last_error}")


# ---------------- 指标 ----------------

class EmptyConfig(EvalBusinessException):
    error_code = EvalErrorCodeEnum.EMPTY_CONFIG


class NonPositiveVG(EvalBusinessException):
    error_code = EvalErrorCodeEnum.NON_POSITIVE_VG

    def __init__(self, vg: float):
        self.vg = vg
        super().__init__(message=f"Visual Gain 必须大于 0，当前为 {vg}")


class ZeroReferenceError(EvalBusinessException):
    error_code = EvalErrorCodeEnum.ZERO_REFERENCE_ERROR

    def __init__(self, corruption: str):
        self.corruption = corruption
        super().__init__(message=f"参考模型在 {corruption} 上的误差和为 0")


class MetricsInputError(EvalBusinessException):
    error_code = EvalErrorCodeEnum.METRICS_INPUT_ERROR


class PartialResultsRefused(EvalBusinessException):
    error_code = EvalErrorCodeEnum.PARTIAL_RESULTS_REFUSED
