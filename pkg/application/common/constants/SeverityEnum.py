from enum import Enum


class SeverityEnum(str, Enum):
    """
    严重程度，严格有序 LOW < MID < HIGH
    """
    LOW = "low"
    MID = "mid"
    HIGH = "high"

    @property
    def rank(self) -> int:
        return _ORDER[self]

    def __lt__(self, other):
        if not isinstance(other, SeverityEnum):
            return NotImplemented
        return self.rank < other.rank

    @classmethod
    def ordered(cls) -> list["SeverityEnum"]:
        return [cls.LOW, cls.MID, cls.HIGH]

    @classmethod
    def from_value(cls, value) -> "SeverityEnum":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"无法识别的严重程度: {value}")


_ORDER = {SeverityEnum.LOW: 0, SeverityEnum.MID: 1, SeverityEnum.HIGH: 2}
