"""
数据集样本相关的 Schema 定义
"""
from typing import List

from pydantic import BaseModel, Field, field_validator, model_validator

VALID_LETTERS = "ABCDEFGHIJ"


class Option(BaseModel):
    """选项"""
    letter: str = Field(description="选项字母 A-J")
    text: str = Field(description="选项内容")

    @field_validator("letter")
    @classmethod
    def letter_valid(cls, v: str) -> str:
        v = v.strip().upper()
        if len(v) != 1 or v not in VALID_LETTERS:
            raise ValueError(f"选项字母必须是 A-J 之一: {v!r}")
        return v


class Sample(BaseModel):
    """评测样本 (I, Q, y)"""
    id: str = Field(min_length=1, description="样本ID")
    images: List[str] = Field(default_factory=list, description="图片路径，按顺序全部传给模型")
    question: str = Field(description="问题文本")
    options: List[Option] = Field(description="有序选项列表")
    answer: str = Field(description="正确答案字母")
    stratum: str = Field(min_length=1, description="分层标签 (MMBench category / MMMU-Pro subject)")

    model_config = {"frozen": True}

    @field_validator("answer")
    @classmethod
    def answer_upper(cls, v: str) -> str:
        return v.strip().upper()

    @field_validator("stratum")
    @classmethod
    def stratum_not_blank(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("stratum 不能为空")
        return v

    @model_validator(mode="after")
    def answer_in_options(self) -> "Sample":
        if not 2 <= len(self.options) <= 10:
            raise ValueError(f"选项数量必须在 2-10 之间，当前 {len(self.options)}")
        letters = [o.letter for o in self.options]
        if len(set(letters)) != len(letters):
            raise ValueError(f"选项字母重复: {letters}")
        if self.answer not in letters:
            raise ValueError(f"答案 {self.answer!r} 不在选项 {letters} 中")
        return self

    @property
    def valid_letters(self) -> List[str]:
        return [o.letter for o in self.options]


class Dataset(BaseModel):
    """有序样本集合，顺序决定采样后的 sample_index"""
    name: str
    samples: List[Sample] = Field(default_factory=list)

    @model_validator(mode="after")
    def ids_unique(self) -> "Dataset":
        seen = set()
        for s in self.samples:
            if s.id in seen:
                raise ValueError(f"样本ID重复: {s.id}")
            seen.add(s.id)
        return self

    def __len__(self) -> int:
        return len(self.samples)

    def strata(self) -> List[str]:
        """按首次出现顺序返回分层标签"""
        return list(dict.fromkeys(s.stratum for s in self.samples))


__all__ = ["VALID_LETTERS", "Option", "Sample", "Dataset"]
