"""
天气类腐蚀：fog / frost / snow / rain / spatter
frost 没有纹理素材，用程序化的值噪声晶体纹理代替
"""
import math

import numpy as np

from application.common.utils.ImageUtils import from_float, to_float
from application.core.determinism import RngStream
from application.service.corruption import primitives
from application.service.corruption.corruption_handler import CorruptionHandler

FROST_TINT = np.array([0.85, 0.90, 1.00])
RAIN_TINT = np.array([0.80, 0.80, 0.85])
MUD_TINT = np.array([0.25, 0.18, 0.10])
RAIN_LENGTH = 15
FROST_OCTAVES = 4


def plasma_fractal(size: int, rng: RngStream, decay: float = 3.0) -> np.ndarray:
    """
    diamond-square 等离子场，边长为 ≥ size 的 2 的幂，归一化到 [0, 1]
    每一层先填 square 再填 diamond，随机数按此顺序成块抽取
    """
    mapsize = 1 << max(1, int(math.ceil(math.log2(max(size, 2)))))
    field = np.zeros((mapsize, mapsize), dtype=np.float64)
    step = mapsize
    wibble = 100.0

    def wibbled_mean(total: np.ndarray) -> np.ndarray:
        return total / 4.0 + rng.uniform_array(total.shape, -wibble, wibble)

    while step >= 2:
        half = step // 2
        corners = field[0:mapsize:step, 0:mapsize:step]
        squares = corners + np.roll(corners, -1, axis=0)
        squares = squares + np.roll(squares, -1, axis=1)
        field[half:mapsize:step, half:mapsize:step] = wibbled_mean(squares)

        centers = field[half:mapsize:step, half:mapsize:step]
        corners = field[0:mapsize:step, 0:mapsize:step]
        left = centers + np.roll(centers, 1, axis=0) + corners + np.roll(corners, -1, axis=1)
        field[0:mapsize:step, half:mapsize:step] = wibbled_mean(left)
        top = centers + np.roll(centers, 1, axis=1) + corners + np.roll(corners, -1, axis=0)
        field[half:mapsize:step, 0:mapsize:step] = wibbled_mean(top)

        wibble /= decay
        step = half

    field -= field.min()
    peak = field.max()
    return field / peak if peak > 0 else field


def value_noise(height: int, width: int, cell: float, rng: RngStream) -> np.ndarray:
    """网格随机值双线性插值得到的平滑噪声"""
    grid_h = int(math.ceil(height / cell)) + 2
    grid_w = int(math.ceil(width / cell)) + 2
    grid = rng.uniform_array((grid_h, grid_w, 1))
    xs, ys = primitives.pixel_grid(height, width)
    return primitives.bilinear_sample(grid, xs / cell, ys / cell)[..., 0]


class WeatherHandler(CorruptionHandler):

    def operations(self):
        return {
            "fog": self.fog,
            "frost": self.frost,
            "snow": self.snow,
            "rain": self.rain,
            "spatter": self.spatter,
        }

    @staticmethod
    def fog(image: np.ndarray, intensity: float, rng: RngStream) -> np.ndarray:
        height, width = image.shape[:2]
        plasma = plasma_fractal(max(height, width), rng)[:height, :width]
        return from_float(primitives.blend(to_float(image), 1.0, float(intensity) * plasma))

    @staticmethod
    def frost(image: np.ndarray, intensity: float, rng: RngStream) -> np.ndarray:
        """多倍频值噪声取脊线形成晶体纹理，按 intensity 做 screen 混合"""
        height, width = image.shape[:2]
        base_cell = max(2.0, min(height, width) / 4.0)
        texture = np.zeros((height, width), dtype=np.float64)
        total_weight = 0.0
        for octave in range(FROST_OCTAVES):
            weight = 0.5 ** octave
            cell = max(2.0, base_cell / (2 ** octave))
            texture += weight * value_noise(height, width, cell, rng)
            total_weight += weight
        texture /= total_weight
        ridged = (1.0 - np.abs(2.0 * texture - 1.0)) ** 3
        overlay = ridged[..., None] * FROST_TINT * float(intensity)
        values = to_float(image)
        return from_float(1.0 - (1.0 - values) * (1.0 - overlay))

    @staticmethod
    def snow(image: np.ndarray, intensity: float, rng: RngStream) -> np.ndarray:
        """
        雪花数 max(1, round(intensity·H·W/100))，半径 1-3 的白色圆点再轻微模糊
        抽取顺序：全部 x，全部 y，全部半径
        """
        height, width = image.shape[:2]
        count = max(1, int(math.floor(float(intensity) * height * width / 100.0 + 0.5)))
        xs = rng.uniform_array(count) * width
        ys = rng.uniform_array(count) * height
        radii = rng.integer_array(count, 1, 4)
        mask = np.zeros((height, width), dtype=np.float64)
        for cx, cy, r in zip(xs, ys, radii):
            y0, y1 = max(0, int(cy - r)), min(height, int(cy + r) + 1)
            x0, x1 = max(0, int(cx - r)), min(width, int(cx + r) + 1)
            if y0 >= y1 or x0 >= x1:
                continue
            yy, xx = np.mgrid[y0:y1, x0:x1]
            inside = (xx + 0.5 - cx) ** 2 + (yy + 0.5 - cy) ** 2 <= r * r
            mask[y0:y1, x0:x1] = np.maximum(mask[y0:y1, x0:x1], inside)
        mask = np.clip(primitives.gaussian_blur(mask, 0.5), 0.0, 1.0)
        return from_float(primitives.blend(to_float(image), 1.0, mask))

    @staticmethod
    def rain(image: np.ndarray, intensity: float, rng: RngStream) -> np.ndarray:
        """
        雨丝数 max(1, round(intensity·H·W/150))，每条 15 px，整图共用一个倾角
        抽取顺序：倾角 [−20°, 20°]，全部 x，全部 y
        """
        height, width = image.shape[:2]
        count = max(1, int(math.floor(float(intensity) * height * width / 150.0 + 0.5)))
        angle = math.radians(rng.uniform(-20.0, 20.0))
        xs = rng.uniform_array(count) * width
        ys = rng.uniform_array(count) * height
        steps = np.arange(RAIN_LENGTH, dtype=np.float64)
        px = np.floor(xs[:, None] + steps[None, :] * math.sin(angle)).astype(np.int64)
        py = np.floor(ys[:, None] + steps[None, :] * math.cos(angle)).astype(np.int64)
        inside = (px >= 0) & (px < width) & (py >= 0) & (py < height)
        mask = np.zeros((height, width), dtype=np.float64)
        mask[py[inside], px[inside]] = 1.0
        mask = np.clip(primitives.gaussian_blur(mask, 0.5), 0.0, 1.0) * 0.6
        return from_float(primitives.blend(to_float(image), RAIN_TINT, mask))

    @staticmethod
    def spatter(image: np.ndarray, intensity: float, rng: RngStream) -> np.ndarray:
        """模糊噪声取 (1 − intensity) 分位数为阈值，超过阈值的区域覆盖深色泥点"""
        height, width = image.shape[:2]
        sigma = 2.0 + min(height, width) / 100.0
        noise = primitives.gaussian_blur(rng.uniform_array((height, width)), sigma)
        threshold = np.quantile(noise, 1.0 - float(intensity))
        mask = (noise > threshold).astype(np.float64)
        mask = np.clip(primitives.gaussian_blur(mask, 1.0), 0.0, 1.0) * 0.85
        return from_float(primitives.blend(to_float(image), MUD_TINT, mask))
