"""
几何类腐蚀，全部通过逆映射双线性采样实现，越界填充黑色
"""
import math

import numpy as np

from application.core.determinism import RngStream
from application.service.corruption import primitives
from application.service.corruption.corruption_handler import CorruptionHandler

ELASTIC_SIGMA = 8.0


def _center(height: int, width: int):
    return (width - 1) / 2.0, (height - 1) / 2.0


def rotation_source(height: int, width: int, degrees: float):
    """输出像素对应的源坐标：图像绕中心逆时针旋转 degrees 度"""
    xs, ys = primitives.pixel_grid(height, width)
    cx, cy = _center(height, width)
    theta = math.radians(degrees)
    u, v = xs - cx, ys - cy
    src_x = cx + math.cos(theta) * u - math.sin(theta) * v
    src_y = cy + math.sin(theta) * u + math.cos(theta) * v
    return src_x, src_y


def homography(src_pts: np.ndarray, dst_pts: np.ndarray) -> np.ndarray:
    """求 3×3 单应矩阵 H，使 H·src ~ dst（四点，h33 = 1）"""
    rows, rhs = [], []
    for (x, y), (u, v) in zip(src_pts, dst_pts):
        rows.append([x, y, 1, 0, 0, 0, -u * x, -u * y])
        rows.append([0, 0, 0, x, y, 1, -v * x, -v * y])
        rhs.extend([u, v])
    solution = np.linalg.solve(np.array(rows, dtype=np.float64), np.array(rhs, dtype=np.float64))
    return np.append(solution, 1.0).reshape(3, 3)


class GeometricHandler(CorruptionHandler):

    def operations(self):
        return {
            "rotate": self.rotate,
            "shear": self.shear,
            "affine": self.affine,
            "perspective_transform": self.perspective_transform,
            "elastic_transform": self.elastic_transform,
        }

    @staticmethod
    def rotate(image: np.ndarray, degrees: float, rng: RngStream) -> np.ndarray:
        height, width = image.shape[:2]
        return primitives.remap(image, *rotation_source(height, width, float(degrees)))

    @staticmethod
    def shear(image: np.ndarray, degrees: float, rng: RngStream) -> np.ndarray:
        """以中心行为轴的水平错切"""
        height, width = image.shape[:2]
        xs, ys = primitives.pixel_grid(height, width)
        _, cy = _center(height, width)
        src_x = xs - math.tan(math.radians(float(degrees))) * (ys - cy)
        return primitives.remap(image, src_x, ys)

    @staticmethod
    def affine(image: np.ndarray, degrees: float, rng: RngStream) -> np.ndarray:
        """旋转角从 [−degrees, +degrees] 均匀抽取，缩放固定 1.0"""
        angle = rng.uniform(-float(degrees), float(degrees))
        height, width = image.shape[:2]
        return primitives.remap(image, *rotation_source(height, width, angle))

    @staticmethod
    def perspective_transform(image: np.ndarray, magnitude: float, rng: RngStream) -> np.ndarray:
        """
        四个角各沿 x、y 方向移动 magnitude·min(W, H)，方向向内或向外
        抽取顺序：左上、右上、右下、左下，每个角先 x 后 y，u < 0.5 向内
        """
        height, width = image.shape[:2]
        offset = float(magnitude) * min(width, height)
        corners = np.array([[0, 0], [width - 1, 0], [width - 1, height - 1], [0, height - 1]], dtype=np.float64)
        inward = np.array([[1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=np.float64)
        signs = np.where(rng.uniform_array((4, 2)) < 0.5, 1.0, -1.0)
        moved = corners + inward * signs * offset
        # 输出坐标 → 输入坐标
        matrix = homography(moved, corners)
        xs, ys = primitives.pixel_grid(height, width)
        denom = matrix[2, 0] * xs + matrix[2, 1] * ys + matrix[2, 2]
        denom = np.where(np.abs(denom) < 1e-12, 1e-12, denom)
        src_x = (matrix[0, 0] * xs + matrix[0, 1] * ys + matrix[0, 2]) / denom
        src_y = (matrix[1, 0] * xs + matrix[1, 1] * ys + matrix[1, 2]) / denom
        return primitives.remap(image, src_x, src_y)

    @staticmethod
    def elastic_transform(image: np.ndarray, alpha: float, rng: RngStream) -> np.ndarray:
        """位移 = α × σ=8 高斯平滑后的 [−1, 1] 均匀噪声场，先 dx 后 dy"""
        height, width = image.shape[:2]
        dx = float(alpha) * primitives.gaussian_blur(rng.uniform_array((height, width), -1.0, 1.0), ELASTIC_SIGMA)
        dy = float(alpha) * primitives.gaussian_blur(rng.uniform_array((height, width), -1.0, 1.0), ELASTIC_SIGMA)
        return primitives.warp(image, dx, dy)


__all__ = ["GeometricHandler", "rotation_source", "homography"]
