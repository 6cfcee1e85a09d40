from .CategoryEnum import CategoryEnum, CategoryNameEnum
from .ConfigKindEnum import ConfigKindEnum, RecordStatusEnum
from .PromptModeEnum import PromptModeEnum
from .SeverityEnum import SeverityEnum
from .TierEnum import TierEnum

__all__ = [
    "CategoryEnum",
    "CategoryNameEnum",
    "ConfigKindEnum",
    "RecordStatusEnum",
    "PromptModeEnum",
    "SeverityEnum",
    "TierEnum",
]
