import math

import numpy as np

from application.common.utils.ImageUtils import from_float, to_float
from application.core.determinism import RngStream
from application.service.corruption.corruption_handler import CorruptionHandler


class NoiseHandler(CorruptionHandler):

    def operations(self):
        return {
            "gaussian_noise": self.gaussian_noise,
            "shot_noise": self.shot_noise,
            "speckle_noise": self.speckle_noise,
            "salt_pepper": self.salt_pepper,
        }

    @staticmethod
    def gaussian_noise(image: np.ndarray, std: float, rng: RngStream) -> np.ndarray:
        values = to_float(image)
        return from_float(values + rng.gaussian_array(values.shape, float(std)))

    @staticmethod
    def speckle_noise(image: np.ndarray, std: float, rng: RngStream) -> np.ndarray:
        values = to_float(image)
        return from_float(values * (1.0 + rng.gaussian_array(values.shape, float(std))))

    @staticmethod
    def poisson_inversion(lam: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
        """逆变换法逐元素抽取 Poisson(λ)，每个元素恰好消耗一个均匀数"""
        k = np.zeros(lam.shape, dtype=np.float64)
        prob = np.exp(-lam)
        cdf = prob.copy()
        active = uniforms > cdf
        limit = int(math.ceil(float(lam.max(initial=0.0)) + 12.0 * math.sqrt(float(lam.max(initial=0.0)) + 1.0) + 10.0))
        step = 0
        while active.any() and step < limit:
            step += 1
            prob = np.where(active, prob * lam / step, prob)
            cdf = np.where(active, cdf + prob, cdf)
            k = np.where(active, k + 1.0, k)
            active = active & (uniforms > cdf)
        return k

    def shot_noise(self, image: np.ndarray, scale: float, rng: RngStream) -> np.ndarray:
        # scale 越小噪声越强
        values = to_float(image)
        uniforms = rng.uniform_array(values.shape)
        counts = self.poisson_inversion(values * float(scale), uniforms)
        return from_float(counts / float(scale))

    @staticmethod
    def salt_pepper(image: np.ndarray, amount: float, rng: RngStream) -> np.ndarray:
        """
        抽取顺序：先 H·W 个位置均匀数（稳定排序取前 n 个），再 n 个盐/椒判定数
        """
        height, width = image.shape[:2]
        total = height * width
        count = min(total, max(1, int(math.floor(float(amount) * total + 0.5))))
        order = np.argsort(rng.uniform_array(total), kind="stable")[:count]
        salt = rng.uniform_array(count) < 0.5
        out = image.reshape(total, 3).copy()
        out[order[salt]] = 255
        out[order[~salt]] = 0
        return out.reshape(image.shape)
