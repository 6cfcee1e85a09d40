"""
指标相关的 Schema 定义
所有准确率、Δ 均为百分点 (0-100)，仅在报表输出时舍入
"""
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator


class AccuracyTable(BaseModel):
    """
    单个 (模型, 数据集) 的准确率表
    来自结果目录时带有计数 (n, correct)，Δ 用计数精确计算；
    来自外部表格（如已发表的汇总值）时只有百分比
    """
    model: str
    dataset: str
    acc_clean: float = Field(ge=0, le=100)
    acc_noimage: Optional[float] = Field(None, ge=0, le=100)
    acc: Dict[str, float] = Field(default_factory=dict, description="corrupted slug → 准确率")
    n: Optional[int] = Field(None, ge=1, description="样本数")
    correct: Dict[str, int] = Field(default_factory=dict, description="slug → 正确数，含 clean/no_image")
    unparsable: Dict[str, int] = Field(default_factory=dict, description="slug → 无法解析数")
    params: Optional[float] = Field(None, gt=0, description="模型参数量")
    family: Optional[str] = None
    partial: bool = Field(default=False, description="是否包含未完成的配置")

    @field_validator("acc")
    @classmethod
    def acc_in_range(cls, v: Dict[str, float]) -> Dict[str, float]:
        for slug, value in v.items():
            if not 0 <= value <= 100:
                raise ValueError(f"{slug} 准确率超出 [0, 100]: {value}")
        return v


class FlipStats(BaseModel):
    """逐样本翻转统计，均为百分比"""
    flip_plus: float = Field(description="clean 正确 → corrupted 错误")
    flip_minus: float = Field(description="clean 错误 → corrupted 正确")
    n: int = 0
    n_plus: int = 0
    n_minus: int = 0
    net_exact: Optional[float] = Field(None, description="由计数精确计算的净值")

    @property
    def net(self) -> float:
        if self.net_exact is not None:
            return self.net_exact
        return round(self.flip_plus - self.flip_minus, 10)


class MceInputs(BaseModel):
    """每个腐蚀类型（49 个）的误差和：带严重程度的 3 项，二值的 1 项"""
    model: str
    error_sums: Dict[str, float] = Field(default_factory=dict)


class SeverityMismatchRow(BaseModel):
    aug_id: str
    drops: Tuple[float, float, float]
    violation: bool
    rho: Optional[float] = None


class MetricsReport(BaseModel):
    """单个 (模型, 数据集) 的全部派生指标"""
    model: str
    dataset: str
    n: Optional[int] = None
    acc_clean: float
    acc_noimage: Optional[float] = None
    visual_gain: Optional[float] = None
    worst_case: Optional[Tuple[str, float]] = None
    worst_at_low: Optional[Tuple[str, float]] = None
    severe_failure_rate: Optional[float] = None
    benign_at_low: Optional[float] = None
    mrce: Optional[float] = None
    mean_drop: Optional[float] = None
    mce: Optional[float] = None
    drops: Dict[str, float] = Field(default_factory=dict)
    rce: Dict[str, float] = Field(default_factory=dict)
    rce_by_severity: Dict[str, float] = Field(default_factory=dict)
    tiers: Dict[str, Dict[str, int]] = Field(default_factory=dict, description="分片 → 分档 → 数量")
    tier_shares: Dict[str, float] = Field(default_factory=dict)
    positive_configs: List[str] = Field(default_factory=list)
    top_k: Dict[str, List[Tuple[str, float]]] = Field(default_factory=dict)
    flips: Dict[str, FlipStats] = Field(default_factory=dict)
    severity_mismatch: List[SeverityMismatchRow] = Field(default_factory=list)
    category_sensitivity: Dict[str, float] = Field(default_factory=dict)
    tail_risk_share: Optional[float] = None
    unparsable: Dict[str, int] = Field(default_factory=dict)
    partial: bool = False
    withheld: List[str] = Field(default_factory=list, description="因配置不完整而未计算的指标")


__all__ = ["AccuracyTable", "FlipStats", "MceInputs", "SeverityMismatchRow", "MetricsReport"]
