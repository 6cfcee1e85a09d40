import math

import numpy as np

from application.core.determinism import RngStream
from application.service.corruption.corruption_handler import CorruptionHandler

MAX_OCCLUSION_RECTS = 1000


class OcclusionHandler(CorruptionHandler):

    def operations(self):
        return {
            "random_occlusion": self.random_occlusion,
            "grid_mask": self.grid_mask,
            "center_occlusion": self.center_occlusion,
        }

    @staticmethod
    def random_occlusion(image: np.ndarray, ratio: float, rng: RngStream) -> np.ndarray:
        """
        不断放置黑色矩形直到覆盖率 ≥ ratio
        每个矩形依次抽取 w, h ∈ [5%, 30%] 边长，再抽取 x, y
        """
        height, width = image.shape[:2]
        target = float(ratio) * height * width
        min_w, max_w = max(1, round(0.05 * width)), max(1, round(0.3 * width))
        min_h, max_h = max(1, round(0.05 * height)), max(1, round(0.3 * height))
        covered = np.zeros((height, width), dtype=bool)
        for _ in range(MAX_OCCLUSION_RECTS):
            if covered.sum() >= target:
                break
            w = rng.integer(min_w, max_w + 1)
            h = rng.integer(min_h, max_h + 1)
            x = rng.integer(0, width - w + 1)
            y = rng.integer(0, height - h + 1)
            covered[y:y + h, x:x + w] = True
        out = image.copy()
        out[covered] = 0
        return out

    @staticmethod
    def grid_mask(image: np.ndarray, ratio: float, rng: RngStream) -> np.ndarray:
        """
        周期 d = max(2, round(min(H, W)/8)) 的规则网格，每格遮挡边长 round(d·√ratio) 的方块
        网格偏移 (ox, oy) 从流中抽取
        """
        height, width = image.shape[:2]
        period = max(2, int(math.floor(min(height, width) / 8.0 + 0.5)))
        side = min(period, max(1, int(math.floor(period * math.sqrt(float(ratio)) + 0.5))))
        ox = rng.integer(0, period)
        oy = rng.integer(0, period)
        ys = (np.arange(height) - oy) % period
        xs = (np.arange(width) - ox) % period
        mask = (ys[:, None] < side) & (xs[None, :] < side)
        out = image.copy()
        out[mask] = 0
        return out

    @staticmethod
    def center_occlusion(image: np.ndarray, ratio: float, rng: RngStream) -> np.ndarray:
        """面积 ratio·W·H 的居中方块，超出图像的部分被裁掉"""
        height, width = image.shape[:2]
        side = int(math.floor(math.sqrt(float(ratio) * width * height) + 0.5))
        side_w, side_h = min(side, width), min(side, height)
        x0 = (width - side_w) // 2
        y0 = (height - side_h) // 2
        out = image.copy()
        out[y0:y0 + side_h, x0:x0 + side_w] = 0
        return out
