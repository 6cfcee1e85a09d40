from enum import Enum


class ConfigKindEnum(str, Enum):
    CLEAN = "clean"
    NO_IMAGE = "no_image"
    CORRUPTED = "corrupted"


class RecordStatusEnum(str, Enum):
    OK = "ok"
    FAILED = "failed"  # 重试耗尽，resume 时重新执行
