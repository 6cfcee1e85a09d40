import numpy as np

from application.core.determinism import RngStream
from application.service.corruption import primitives
from application.service.corruption.corruption_handler import CorruptionHandler


class DigitalHandler(CorruptionHandler):

    def operations(self):
        return {
            "jpeg_compression": self.jpeg_compression,
            "pixelate": self.pixelate,
        }

    @staticmethod
    def jpeg_compression(image: np.ndarray, quality: int, rng: RngStream) -> np.ndarray:
        return primitives.jpeg_recompress(image, int(quality))

    @staticmethod
    def pixelate(image: np.ndarray, scale: float, rng: RngStream) -> np.ndarray:
        """nearest 缩小后再 nearest 放大回原尺寸"""
        height, width = image.shape[:2]
        small = primitives.resample(image, float(scale), "nearest")
        return primitives.resize(small, width, height, "nearest")
