import math

import numpy as np

from application.common.utils.ImageUtils import from_float, to_float
from application.core.determinism import RngStream
from application.service.corruption import primitives
from application.service.corruption.corruption_handler import CorruptionHandler

ZOOM_TAPS = 5
GLASS_ITERATIONS = 2


class BlurHandler(CorruptionHandler):

    def operations(self):
        return {
            "gaussian_blur": self.gaussian_blur,
            "motion_blur": self.motion_blur,
            "defocus_blur": self.defocus_blur,
            "zoom_blur": self.zoom_blur,
            "glass_blur": self.glass_blur,
        }

    @staticmethod
    def gaussian_blur(image: np.ndarray, radius: float, rng: RngStream) -> np.ndarray:
        # radius 即高斯 σ
        return from_float(primitives.gaussian_blur(to_float(image), float(radius)))

    @staticmethod
    def motion_kernel(ksize: int, angle_deg: float) -> np.ndarray:
        """
        1×ksize 水平线核绕中心旋转 angle 度
        对每个核格点求其到旋转后线段的距离，距离 ≤ 0.5 的格点为 1
        """
        ksize = int(ksize)
        half = ksize // 2
        theta = math.radians(angle_deg)
        cos_t, sin_t = math.cos(theta), math.sin(theta)
        ys, xs = np.mgrid[-half:half + 1, -half:half + 1].astype(np.float64)
        along = xs * cos_t + ys * sin_t
        across = -xs * sin_t + ys * cos_t
        kernel = ((np.abs(across) <= 0.5) & (np.abs(along) <= half + 0.5)).astype(np.float64)
        if kernel.sum() == 0:
            kernel[half, :] = 1.0
        return kernel / kernel.sum()

    def motion_blur(self, image: np.ndarray, ksize: int, rng: RngStream) -> np.ndarray:
        # 第 1 次抽取：角度 [0, 360)
        angle = rng.uniform(0.0, 360.0)
        kernel = self.motion_kernel(int(ksize), angle)
        return from_float(primitives.convolve2d(to_float(image), kernel))

    @staticmethod
    def disk_kernel(radius: float) -> np.ndarray:
        r = int(math.ceil(radius))
        ys, xs = np.mgrid[-r:r + 1, -r:r + 1].astype(np.float64)
        kernel = (xs * xs + ys * ys <= radius * radius).astype(np.float64)
        return kernel / kernel.sum()

    def defocus_blur(self, image: np.ndarray, radius: float, rng: RngStream) -> np.ndarray:
        return from_float(primitives.convolve2d(to_float(image), self.disk_kernel(float(radius))))

    @staticmethod
    def zoom_blur(image: np.ndarray, factor: float, rng: RngStream) -> np.ndarray:
        """5 个放大倍率 1, 1+f/4, 1+f/2, 1+3f/4, 1+f 的中心放大副本取平均"""
        values = image.astype(np.float64)
        height, width = values.shape[:2]
        xs, ys = primitives.pixel_grid(height, width)
        cx, cy = (width - 1) / 2.0, (height - 1) / 2.0
        acc = np.zeros_like(values)
        for k in range(ZOOM_TAPS):
            zoom = 1.0 + float(factor) * k / (ZOOM_TAPS - 1)
            src_x = np.clip(cx + (xs - cx) / zoom, 0, width - 1)
            src_y = np.clip(cy + (ys - cy) / zoom, 0, height - 1)
            acc += primitives.bilinear_sample(values, src_x, src_y)
        return from_float(acc / ZOOM_TAPS / 255.0)

    @staticmethod
    def glass_blur(image: np.ndarray, sigma: float, rng: RngStream) -> np.ndarray:
        """
        高斯模糊后做 2 轮光栅顺序的局部像素交换
        每轮先一次性抽取全部 (dy, dx) ∈ {−1,0,1}²，dy 在前
        """
        blurred = from_float(primitives.gaussian_blur(to_float(image), float(sigma)))
        height, width = blurred.shape[:2]
        xs, ys = np.meshgrid(np.arange(width), np.arange(height))
        # order[p] 为当前位置 p 上像素的来源下标，交换只动下标，最后一次性取像素
        order = list(range(height * width))
        for _ in range(GLASS_ITERATIONS):
            offsets = rng.integer_array((height, width, 2), -1, 2)
            ny = ys + offsets[..., 0]
            nx = xs + offsets[..., 1]
            inside = ((ny >= 0) & (ny < height) & (nx >= 0) & (nx < width)).ravel()
            sources = np.flatnonzero(inside).tolist()
            targets = (ny * width + nx).ravel()[inside].tolist()
            # 光栅顺序逐个交换，后面的交换会看到前面的结果
            for p, q in zip(sources, targets):
                order[p], order[q] = order[q], order[p]
        flat = blurred.reshape(-1, 3)[np.asarray(order, dtype=np.int64)]
        return flat.reshape(blurred.shape)
