from enum import Enum


class PromptModeEnum(str, Enum):
    DIRECT = "direct"
    COT = "cot"
