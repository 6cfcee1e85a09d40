from enum import Enum


class EvalErrorCodeEnum(Enum):
    """
    错误代码枚举 (code, message, exit_code)
    exit_code: 1 用法/配置错误, 2 运行时错误, 3 拒绝输出不完整结果
    """
    ERROR = ("E0000", "运行失败", 2)
    CONFIG_ERROR = ("E0001", "配置错误", 1)
    CONFIG_MISMATCH = ("E0002", "结果目录与当前配置不匹配", 1)
    UNKNOWN_AUGMENTATION = ("E0100", "未知的增强", 1)
    SEVERITY_MISSING = ("E0101", "该增强需要指定严重程度", 1)
    SEVERITY_NOT_APPLICABLE = ("E0102", "二值增强不接受严重程度", 1)
    DEGENERATE_SIZE = ("E0103", "缩放后尺寸退化为 0，已钳制为 1", 2)
    ENCODE_FAILURE = ("E0104", "图像编码失败", 2)
    INVALID_IMAGE = ("E0105", "图像格式不合法", 2)
    MANIFEST_PARSE_ERROR = ("E0200", "manifest 解析失败", 1)
    MANIFEST_VALIDATION_ERROR = ("E0201", "manifest 校验失败", 1)
    TRANSPORT_ERROR = ("E0300", "推理端点连接失败", 2)
    HTTP_STATUS_ERROR = ("E0301", "推理端点返回错误状态码", 2)
    REQUEST_TIMEOUT = ("E0302", "推理请求超时", 2)
    RETRIES_EXHAUSTED = ("E0303", "重试次数已耗尽", 2)
    EMPTY_CONFIG = ("E0400", "配置没有任何记录", 2)
    NON_POSITIVE_VG = ("E0401", "Visual Gain 必须大于 0", 2)
    ZERO_REFERENCE_ERROR = ("E0402", "参考模型误差和为 0", 2)
    METRICS_INPUT_ERROR = ("E0403", "指标输入不合法", 2)
    PARTIAL_RESULTS_REFUSED = ("E0404", "存在未完成的结果，拒绝输出（使用 --allow-partial 强制）", 3)

    def __init__(self, code, message, exit_code):
        self.code = code
        self.message = message
        self.exit_code = exit_code
