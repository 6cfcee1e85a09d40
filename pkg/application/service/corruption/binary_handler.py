import numpy as np
from PIL import ImageOps

from application.common.utils.ImageUtils import from_pil, to_pil
from application.core.determinism import RngStream
from application.service.corruption.corruption_handler import CorruptionHandler

# 循环置换 R→G→B→R：新 G 取原 R，新 B 取原 G，新 R 取原 B
CHANNEL_CYCLE = [2, 0, 1]


class BinaryHandler(CorruptionHandler):
    """二值变换，不消耗随机数"""

    def operations(self):
        return {
            "flip_h": self.flip_h,
            "flip_v": self.flip_v,
            "grayscale": self.grayscale,
            "invert": self.invert,
            "channel_swap": self.channel_swap,
            "equalize": self.equalize,
            "autocontrast": self.autocontrast,
        }

    @staticmethod
    def flip_h(image: np.ndarray, value, rng: RngStream) -> np.ndarray:
        return from_pil(ImageOps.mirror(to_pil(image)))

    @staticmethod
    def flip_v(image: np.ndarray, value, rng: RngStream) -> np.ndarray:
        return from_pil(ImageOps.flip(to_pil(image)))

    @staticmethod
    def grayscale(image: np.ndarray, value, rng: RngStream) -> np.ndarray:
        # ITU-R 601 亮度，灰度图上是恒等变换
        return from_pil(ImageOps.grayscale(to_pil(image)))

    @staticmethod
    def invert(image: np.ndarray, value, rng: RngStream) -> np.ndarray:
        return from_pil(ImageOps.invert(to_pil(image)))

    @staticmethod
    def channel_swap(image: np.ndarray, value, rng: RngStream) -> np.ndarray:
        return image[..., CHANNEL_CYCLE].copy()

    @staticmethod
    def equalize(image: np.ndarray, value, rng: RngStream) -> np.ndarray:
        """逐通道直方图均衡，单一取值的通道保持不变"""
        return from_pil(ImageOps.equalize(to_pil(image)))

    @staticmethod
    def autocontrast(image: np.ndarray, value, rng: RngStream) -> np.ndarray:
        """
        逐通道把 [min, max] 线性拉伸到 [0, 255]，常数通道保持不变
        查表取 floor(x + 0.5)：max 必落在 255，两次执行结果一致
        （ImageOps.autocontrast 截断取整，max 可能落在 254）
        """
        out = np.empty_like(image)
        for c in range(3):
            channel = image[..., c]
            lo, hi = int(channel.min()), int(channel.max())
            if hi == lo:
                out[..., c] = channel
                continue
            levels = np.arange(256, dtype=np.float64)
            lut = np.clip(np.floor((levels - lo) * 255.0 / (hi - lo) + 0.5), 0, 255).astype(np.uint8)
            out[..., c] = lut[channel]
        return out
