"""
增强目录相关的 Schema 定义
"""
from typing import Optional, Tuple, Union

from pydantic import BaseModel, Field, model_validator

from application.common.constants import CategoryEnum, SeverityEnum

Number = Union[int, float]


class AugmentationSpec(BaseModel):
    """增强规格：42 个带 (low, mid, high) 参数表，7 个二值变换无参数表"""
    id: str = Field(description="增强标识，如 glass_blur")
    category: CategoryEnum = Field(description="所属分类")
    param_name: str = Field(default="", description="参数名")
    schedule: Optional[Tuple[Number, Number, Number]] = Field(None, description="low/mid/high 参数值")
    direction: str = Field(default="", description="参数方向注记，如 higher=more / lower=more")
    note: str = Field(default="", description="说明")
    preserves_shape: bool = Field(default=True, description="输出尺寸是否与输入一致")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def schedule_matches_category(self) -> "AugmentationSpec":
        if (self.category == CategoryEnum.BINARY) != (self.schedule is None):
            raise ValueError(f"{self.id}: 仅二值增强可以没有参数表")
        return self

    @property
    def is_binary(self) -> bool:
        return self.schedule is None

    def value_for(self, severity: SeverityEnum) -> Number:
        if self.schedule is None:
            raise ValueError(f"{self.id} 没有严重程度参数")
        return self.schedule[SeverityEnum.from_value(severity).rank]

    def catalog_row(self) -> dict:
        return {
            "id": self.id,
            "category": self.category.value,
            "param_name": self.param_name,
            "schedule": list(self.schedule) if self.schedule is not None else None,
            "direction": self.direction,
            "preserves_shape": self.preserves_shape,
            "note": self.note,
        }


class CorruptionConfig(BaseModel):
    """一次腐蚀调用：增强 + 严重程度 + 样本序号（决定随机种子）"""
    aug_id: str
    severity: Optional[SeverityEnum] = None
    sample_index: int = Field(default=0, ge=0)

    model_config = {"frozen": True}


__all__ = ["AugmentationSpec", "CorruptionConfig", "Number"]
