"""
确定性随机源

所有腐蚀算法只从这里取随机数：
- sample_seed: 每个样本的增强种子 (base × 1000003 + index) mod 2^32
- RngStream: splitmix64 流，u32 种子零扩展为 64 位状态

流是值对象，不在线程间共享；需要分叉时使用 copy()。
数组接口与标量接口消费同一序列：取 n 个数组元素等价于连续调用 n 次标量接口。
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

MASK64 = (1 << 64) - 1
MASK32 = (1 << 32) - 1
SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
SPLITMIX_MUL1 = 0xBF58476D1CE4E5B9
SPLITMIX_MUL2 = 0x94D049BB133111EB
SEED_MULTIPLIER = 1000003
F64_SCALE = 1.0 / (1 << 53)
ALGORITHM = "splitmix64"

_GAMMA_U64 = np.uint64(SPLITMIX_GAMMA)
_MUL1_U64 = np.uint64(SPLITMIX_MUL1)
_MUL2_U64 = np.uint64(SPLITMIX_MUL2)


def sample_seed(base: int, index: int) -> int:
    """
    (base × 1000003 + index) mod 2^32，Python 整数精确运算
    index ≥ 2^32 时会与低位窗口发生碰撞，属于模运算的正常结果
    """
    if base < 0 or index < 0:
        raise ValueError("base 和 index 必须为非负整数")
    return (base * SEED_MULTIPLIER + index) & MASK32


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * SPLITMIX_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * SPLITMIX_MUL2) & MASK64
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    # uint64 数组运算按 2^64 回绕
    z = (z ^ (z >> np.uint64(30))) * _MUL1_U64
    z = (z ^ (z >> np.uint64(27))) * _MUL2_U64
    return z ^ (z >> np.uint64(31))


@dataclass
class RngStream:
    state: int
    algorithm: str = ALGORITHM
    _cached_gaussian: Optional[float] = None

    def copy(self) -> "RngStream":
        return RngStream(self.state, self.algorithm, self._cached_gaussian)

    # ---------------- 标量接口 ----------------

    def next_u64(self) -> int:
        self.state = (self.state + SPLITMIX_GAMMA) & MASK64
        return _mix(self.state)

    def next_f64(self) -> float:
        """[0, 1) 上的均匀分布，取高 53 位"""
        return (self.next_u64() >> 11) * F64_SCALE

    def next_gaussian(self) -> float:
        """
        Box–Muller：u1, u2 依次抽取，返回 cos 分量，sin 分量缓存给下一次调用
        使用 1 - u1 避免 log(0)
        """
        if self._cached_gaussian is not None:
            value = self._cached_gaussian
            self._cached_gaussian = None
            return value
        u1 = self.next_f64()
        u2 = self.next_f64()
        radius = math.sqrt(-2.0 * math.log(1.0 - u1))
        theta = 2.0 * math.pi * u2
        self._cached_gaussian = radius * math.sin(theta)
        return radius * math.cos(theta)

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.next_f64()

    def integer(self, low: int, high: int) -> int:
        """[low, high) 上的整数"""
        if high <= low:
            return low
        return low + min(int(self.next_f64() * (high - low)), high - low - 1)

    # ---------------- 数组接口 ----------------

    def u64_array(self, n: int) -> np.ndarray:
        if n <= 0:
            return np.zeros(0, dtype=np.uint64)
        counters = np.arange(1, n + 1, dtype=np.uint64) * _GAMMA_U64 + np.uint64(self.state)
        self.state = (self.state + n * SPLITMIX_GAMMA) & MASK64
        return _mix_array(counters)

    def uniform_array(self, shape, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        """按 C 顺序填充的 [low, high) 均匀数组"""
        n = int(np.prod(shape)) if np.ndim(shape) else int(shape)
        values = (self.u64_array(n) >> np.uint64(11)).astype(np.float64) * F64_SCALE
        if low != 0.0 or high != 1.0:
            values = low + (high - low) * values
        return values.reshape(shape)

    def gaussian_array(self, shape, std: float = 1.0) -> np.ndarray:
        """
        标准正态数组，与连续调用 next_gaussian 的消费顺序一致：
        先用缓存值，再按 (u1, u2) 成对抽取，奇数个时缓存最后一个 sin 分量
        """
        n = int(np.prod(shape)) if np.ndim(shape) else int(shape)
        out = np.empty(n, dtype=np.float64)
        filled = 0
        if n > 0 and self._cached_gaussian is not None:
            out[0] = self._cached_gaussian
            self._cached_gaussian = None
            filled = 1
        remaining = n - filled
        if remaining > 0:
            pairs = (remaining + 1) // 2
            uniforms = self.uniform_array(2 * pairs)
            radius = np.sqrt(-2.0 * np.log(1.0 - uniforms[0::2]))
            theta = 2.0 * np.pi * uniforms[1::2]
            values = np.empty(2 * pairs, dtype=np.float64)
            values[0::2] = radius * np.cos(theta)
            values[1::2] = radius * np.sin(theta)
            out[filled:] = values[:remaining]
            if 2 * pairs > remaining:
                self._cached_gaussian = float(values[-1])
        if std != 1.0:
            out *= std
        return out.reshape(shape)

    def integer_array(self, shape, low: int, high: int) -> np.ndarray:
        """[low, high) 上的整数数组"""
        values = self.uniform_array(shape)
        span = max(high - low, 1)
        return low + np.minimum(np.floor(values * span).astype(np.int64), span - 1)


def make_rng(seed: int) -> RngStream:
    """以零扩展的 u32 种子创建 splitmix64 流"""
    if seed < 0 or seed > MASK32:
        raise ValueError(f"种子必须在 [0, 2^32) 内: {seed}")
    return RngStream(state=seed)


__all__ = ["RngStream", "make_rng", "sample_seed", "ALGORITHM"]
