"""
报表数字格式化
计算全程保持双精度，只在展示时按 1 位小数四舍五入（远离零）
"""
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional


def round_half_up(value: float, digits: int = 1) -> Decimal:
    quantum = Decimal(1).scaleb(-digits)
    # repr 给出最短往返表示，避免 9.775 这类二进制误差
    return Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP)


def fmt_number(value: Optional[float], digits: int = 1) -> str:
    if value is None:
        return "-"
    rounded = round_half_up(value, digits)
    if rounded == 0:
        rounded = abs(rounded)
    return f"{rounded:.{digits}f}"


def fmt_key_drop(key: Optional[str], drop: Optional[float], digits: int = 1) -> str:
    """worst-case 单元格：upsample (high, 26.3)"""
    if key is None or drop is None:
        return "-"
    aug_id, _, severity = key.partition(":")
    label = f"{severity}, " if severity else ""
    return f"{aug_id} ({label}{fmt_number(drop, digits)})"


__all__ = ["round_half_up", "fmt_number", "fmt_key_drop"]
