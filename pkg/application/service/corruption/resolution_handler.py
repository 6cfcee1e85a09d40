import numpy as np
from PIL import ImageOps

from application.common.utils.ImageUtils import from_float, from_pil, to_float, to_pil
from application.core.determinism import RngStream
from application.service.corruption import primitives
from application.service.corruption.corruption_handler import CorruptionHandler

SHARPEN_SIGMA = 1.0


class ResolutionHandler(CorruptionHandler):

    def operations(self):
        return {
            "downsample": self.downsample,
            "upsample": self.upsample,
            "sharpen": self.sharpen,
            "posterize": self.posterize,
            "solarize": self.solarize,
        }

    @staticmethod
    def downsample(image: np.ndarray, scale: float, rng: RngStream) -> np.ndarray:
        # 保留缩小后的尺寸
        return primitives.resample(image, float(scale), "bilinear")

    @staticmethod
    def upsample(image: np.ndarray, scale: float, rng: RngStream) -> np.ndarray:
        # 保留放大后的尺寸，插值痕迹交给模型自身的预处理
        return primitives.resample(image, float(scale), "bilinear")

    @staticmethod
    def sharpen(image: np.ndarray, factor: float, rng: RngStream) -> np.ndarray:
        values = to_float(image)
        detail = values - primitives.gaussian_blur(values, SHARPEN_SIGMA)
        return from_float(values + float(factor) * detail)

    @staticmethod
    def posterize(image: np.ndarray, bits: int, rng: RngStream) -> np.ndarray:
        # 保留每个通道的高 bits 位
        return from_pil(ImageOps.posterize(to_pil(image), int(bits)))

    @staticmethod
    def solarize(image: np.ndarray, threshold: int, rng: RngStream) -> np.ndarray:
        # ≥ threshold 的像素取反
        return from_pil(ImageOps.solarize(to_pil(image), int(threshold)))
