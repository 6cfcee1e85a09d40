from enum import Enum


class TierEnum(str, Enum):
    """
    Δ 分档：Δ<0; 0≤Δ≤1; 1<Δ≤3; 3<Δ≤10; Δ>10
    """
    POSITIVE = "positive"
    BENIGN = "benign"
    MILD = "mild"
    MODERATE = "moderate"
    CATASTROPHIC = "catastrophic"

    @classmethod
    def of(cls, drop: float) -> "TierEnum":
        if drop < 0:
            return cls.POSITIVE
        if drop <= 1:
            return cls.BENIGN
        if drop <= 3:
            return cls.MILD
        if drop <= 10:
            return cls.MODERATE
        return cls.CATASTROPHIC

    @classmethod
    def ordered(cls) -> list["TierEnum"]:
        return [cls.POSITIVE, cls.BENIGN, cls.MILD, cls.MODERATE, cls.CATASTROPHIC]
