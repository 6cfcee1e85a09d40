"""
腐蚀算法共用的图像原语

约定：
- 浮点域为 [0, 1]，H×W×3 float64；回到 8 位统一走 ImageUtils.from_float
- 卷积边界为 reflect-101（scipy 的 mirror 模式）
- 采样为像素中心对齐，越界填充黑色
"""
import io
import math
from typing import Tuple

import numpy as np
from PIL import Image as PILImage
from scipy import ndimage

from application.common.exception import EncodeFailure
from application.common.utils.ImageUtils import from_float, from_levels
from application.core.logger_util import logger

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114], dtype=np.float64)


# ============================
#          卷积
# ============================

def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """半径 ceil(3σ) 的归一化一维高斯核"""
    if sigma <= 0:
        return np.ones(1, dtype=np.float64)
    radius = max(1, int(math.ceil(3.0 * sigma)))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def gaussian_blur(values: np.ndarray, sigma: float) -> np.ndarray:
    """可分离高斯模糊，适用于 H×W 或 H×W×C 浮点数组"""
    if sigma <= 0:
        return values.copy()
    kernel = gaussian_kernel1d(sigma)
    out = ndimage.correlate1d(values, kernel, axis=0, mode="mirror")
    return ndimage.correlate1d(out, kernel, axis=1, mode="mirror")


def convolve2d(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """二维核逐通道相关运算，核需已归一化"""
    if values.ndim == 2:
        return ndimage.correlate(values, kernel, mode="mirror")
    return ndimage.correlate(values, kernel[:, :, None], mode="mirror")


# ============================
#          采样
# ============================

def bilinear_sample(values: np.ndarray, src_x: np.ndarray, src_y: np.ndarray) -> np.ndarray:
    """
    在 (src_x, src_y) 处双线性采样，越界的邻居按黑色 (0) 计
    src_x/src_y 形状为 H'×W'，输入为 H×W 时返回 H'×W'，H×W×C 时返回 H'×W'×C
    """
    coords = np.stack([src_y, src_x])
    if values.ndim == 2:
        return ndimage.map_coordinates(values, coords, order=1, mode="grid-constant", cval=0.0)
    return np.stack([
        ndimage.map_coordinates(values[..., c], coords, order=1, mode="grid-constant", cval=0.0)
        for c in range(values.shape[2])
    ], axis=-1)


def pixel_grid(height: int, width: int) -> Tuple[np.ndarray, np.ndarray]:
    ys, xs = np.meshgrid(np.arange(height, dtype=np.float64), np.arange(width, dtype=np.float64), indexing="ij")
    return xs, ys


def remap(image: np.ndarray, src_x: np.ndarray, src_y: np.ndarray) -> np.ndarray:
    """逆映射：输出像素 p 取输入在 (src_x[p], src_y[p]) 处的双线性值"""
    sampled = bilinear_sample(image.astype(np.float64), src_x, src_y)
    return from_levels(sampled)


def warp(image: np.ndarray, dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """
    位移场形变：output(p) = input(p − d(p))，越界填充黑色
    零位移场返回逐字节相同的图像
    """
    height, width = image.shape[:2]
    if dx.shape != (height, width) or dy.shape != (height, width):
        raise ValueError(f"位移场尺寸 {dx.shape}/{dy.shape} 与图像 {(height, width)} 不一致")
    xs, ys = pixel_grid(height, width)
    return remap(image, xs - dx, ys - dy)


def _scaled_size(length: int, scale: float) -> int:
    # 四舍五入远离零；长度为正，等价于 floor(x + 0.5)
    return int(math.floor(length * scale + 0.5))


def resample(image: np.ndarray, scale: float, filter: str = "bilinear") -> np.ndarray:
    """
    按比例缩放到 round(W·scale) × round(H·scale)
    结果尺寸为 0 时钳制为 1 并记录告警
    """
    if scale <= 0:
        raise ValueError(f"缩放比例必须大于 0: {scale}")
    height, width = image.shape[:2]
    out_w = _scaled_size(width, scale)
    out_h = _scaled_size(height, scale)
    if out_w < 1 or out_h < 1:
        logger.warning(f"⚠️ 缩放 {width}×{height} @ {scale} 尺寸退化，已钳制为 1")
        out_w, out_h = max(out_w, 1), max(out_h, 1)
    return resize(image, out_w, out_h, filter)


def resize(image: np.ndarray, out_w: int, out_h: int, filter: str = "bilinear") -> np.ndarray:
    """像素中心对齐的缩放；bilinear 在边缘复制像素"""
    height, width = image.shape[:2]
    if (out_w, out_h) == (width, height):
        return image.copy()

    if filter == "nearest":
        xi = np.minimum(np.floor((np.arange(out_w) + 0.5) * width / out_w).astype(np.int64), width - 1)
        yi = np.minimum(np.floor((np.arange(out_h) + 0.5) * height / out_h).astype(np.int64), height - 1)
        return image[yi[:, None], xi[None, :]].copy()
    if filter != "bilinear":
        raise ValueError(f"未知的插值方式: {filter}")

    sx = np.clip((np.arange(out_w, dtype=np.float64) + 0.5) * width / out_w - 0.5, 0, width - 1)
    sy = np.clip((np.arange(out_h, dtype=np.float64) + 0.5) * height / out_h - 0.5, 0, height - 1)
    src_x, src_y = np.meshgrid(sx, sy)
    # 坐标已夹在图像内，不会触发黑色填充
    return remap(image, src_x, src_y)


# ============================
#          编码
# ============================

def jpeg_recompress(image: np.ndarray, quality: int) -> np.ndarray:
    """用固定版本的 Pillow JPEG 编码后再解码，4:2:0 色度子采样"""
    if not 1 <= int(quality) <= 100:
        raise EncodeFailure(message=f"JPEG 质量必须在 1-100: {quality}")
    try:
        buffer = io.BytesIO()
        PILImage.fromarray(image).save(buffer, format="JPEG", quality=int(quality), subsampling=2, optimize=False)
        buffer.seek(0)
        with PILImage.open(buffer) as decoded:
            return np.asarray(decoded.convert("RGB"), dtype=np.uint8).copy()
    except (OSError, ValueError) as e:
        raise EncodeFailure(message=f"JPEG 编码失败: {e}") from e


# ============================
#          颜色
# ============================

def luma(values: np.ndarray) -> np.ndarray:
    """H×W×3 → H×W 亮度"""
    return values @ LUMA_WEIGHTS


def blend(a: np.ndarray, b: np.ndarray, alpha) -> np.ndarray:
    """(1−α)·a + α·b，α 可为标量或 H×W(×1) 数组"""
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.ndim == 2:
        alpha = alpha[..., None]
    return a * (1.0 - alpha) + b * alpha


__all__ = [
    "LUMA_WEIGHTS",
    "gaussian_kernel1d",
    "gaussian_blur",
    "convolve2d",
    "bilinear_sample",
    "pixel_grid",
    "remap",
    "warp",
    "resample",
    "resize",
    "jpeg_recompress",
    "luma",
    "blend",
    "from_float",
]
