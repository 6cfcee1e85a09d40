"""
评测记录相关的 Schema 定义
"""
from typing import Dict, Optional

from pydantic import BaseModel, Field, model_validator

from application.common.constants import ConfigKindEnum, RecordStatusEnum, SeverityEnum


class EvalConfigKey(BaseModel):
    """评测配置键：Clean / NoImage / Corrupted(aug_id, severity?)"""
    kind: ConfigKindEnum
    aug_id: Optional[str] = None
    severity: Optional[SeverityEnum] = None

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def corrupted_has_aug(self) -> "EvalConfigKey":
        if self.kind == ConfigKindEnum.CORRUPTED and not self.aug_id:
            raise ValueError("corrupted 配置必须指定 aug_id")
        if self.kind != ConfigKindEnum.CORRUPTED and (self.aug_id or self.severity):
            raise ValueError(f"{self.kind.value} 配置不能带增强参数")
        return self

    @classmethod
    def clean(cls) -> "EvalConfigKey":
        return cls(kind=ConfigKindEnum.CLEAN)

    @classmethod
    def no_image(cls) -> "EvalConfigKey":
        return cls(kind=ConfigKindEnum.NO_IMAGE)

    @classmethod
    def corrupted(cls, aug_id: str, severity: Optional[SeverityEnum] = None) -> "EvalConfigKey":
        return cls(kind=ConfigKindEnum.CORRUPTED, aug_id=aug_id, severity=severity)

    @property
    def slug(self) -> str:
        """clean / no_image / glass_blur:high / flip_v"""
        if self.kind != ConfigKindEnum.CORRUPTED:
            return self.kind.value
        if self.severity is None:
            return self.aug_id
        return f"{self.aug_id}:{self.severity.value}"

    @classmethod
    def from_slug(cls, slug: str) -> "EvalConfigKey":
        if slug == ConfigKindEnum.CLEAN.value:
            return cls.clean()
        if slug == ConfigKindEnum.NO_IMAGE.value:
            return cls.no_image()
        aug_id, _, severity = slug.partition(":")
        return cls.corrupted(aug_id, SeverityEnum.from_value(severity) if severity else None)

    @property
    def is_corrupted(self) -> bool:
        return self.kind == ConfigKindEnum.CORRUPTED

    def __str__(self) -> str:
        return self.slug


class EvalRecord(BaseModel):
    """一条评测记录 ŷ = g(M(I, Q))"""
    sample_id: str
    config: str = Field(description="EvalConfigKey.slug")
    answer: str = Field(default="", description="正确答案")
    stratum: str = Field(default="")
    raw_response: str = Field(default="")
    extracted: Optional[str] = None
    correct: bool = False
    unparsable: bool = False
    latency: float = 0.0
    token_usage: Optional[Dict[str, int]] = None
    timestamp: str = ""
    status: RecordStatusEnum = RecordStatusEnum.OK
    error: Optional[str] = None

    @model_validator(mode="after")
    def consistent(self) -> "EvalRecord":
        if self.correct and self.extracted != self.answer:
            raise ValueError("correct 记录的提取答案必须等于正确答案")
        if self.unparsable and self.correct:
            raise ValueError("无法解析的回答不能判为正确")
        return self

    @property
    def key(self) -> tuple:
        return self.sample_id, self.config

    @property
    def failed(self) -> bool:
        return self.status == RecordStatusEnum.FAILED


class StoreMeta(BaseModel):
    """结果目录头信息 meta.json"""
    config_hash: str
    model_name: str
    dataset_name: str
    prompt_mode: str
    sample_count: int
    plan: list = Field(default_factory=list, description="按计划顺序排列的配置 slug")
    params: Optional[float] = Field(None, description="模型参数量，用于缩放分析")
    family: Optional[str] = Field(None, description="模型家族，用于分组平均")
    created_at: str = ""
    updated_at: str = ""


__all__ = ["EvalConfigKey", "EvalRecord", "StoreMeta"]
