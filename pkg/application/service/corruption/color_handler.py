import numpy as np
from matplotlib.colors import hsv_to_rgb, rgb_to_hsv
from PIL import Image as PILImage
from PIL import ImageEnhance

from application.common.utils.ImageUtils import from_float, from_pil, to_float, to_pil
from application.core.determinism import RngStream
from application.service.corruption.corruption_handler import CorruptionHandler


def adjust_brightness(img: PILImage.Image, factor: float) -> PILImage.Image:
    """与全黑图混合"""
    return ImageEnhance.Brightness(img).enhance(factor)


def adjust_contrast(img: PILImage.Image, factor: float) -> PILImage.Image:
    """围绕整图平均亮度缩放"""
    return ImageEnhance.Contrast(img).enhance(factor)


def adjust_saturation(img: PILImage.Image, factor: float) -> PILImage.Image:
    """与逐像素灰度混合，factor = 0 即灰度图"""
    return ImageEnhance.Color(img).enhance(factor)


class ColorHandler(CorruptionHandler):

    def operations(self):
        return {
            "brightness": self.brightness,
            "brightness_up": self.brightness,
            "contrast": self.contrast,
            "contrast_up": self.contrast,
            "saturation": self.saturation,
            "saturation_up": self.saturation,
            "gamma": self.gamma,
            "gamma_up": self.gamma,
            "hue_shift": self.hue_shift,
            "color_jitter": self.color_jitter,
        }

    @staticmethod
    def brightness(image: np.ndarray, factor: float, rng: RngStream) -> np.ndarray:
        return from_pil(adjust_brightness(to_pil(image), float(factor)))

    @staticmethod
    def contrast(image: np.ndarray, factor: float, rng: RngStream) -> np.ndarray:
        return from_pil(adjust_contrast(to_pil(image), float(factor)))

    @staticmethod
    def saturation(image: np.ndarray, factor: float, rng: RngStream) -> np.ndarray:
        return from_pil(adjust_saturation(to_pil(image), float(factor)))

    @staticmethod
    def gamma(image: np.ndarray, factor: float, rng: RngStream) -> np.ndarray:
        # γ < 1 变亮，γ > 1 变暗
        return from_float(np.power(to_float(image), float(factor)))

    @staticmethod
    def hue_shift(image: np.ndarray, degrees: float, rng: RngStream) -> np.ndarray:
        hsv = rgb_to_hsv(to_float(image))
        hsv[..., 0] = (hsv[..., 0] + float(degrees) / 360.0) % 1.0
        return from_float(hsv_to_rgb(hsv))

    @staticmethod
    def color_jitter(image: np.ndarray, jitter_range: float, rng: RngStream) -> np.ndarray:
        """亮度、对比度、饱和度依次乘以 (1 + u)，u ~ U[−range, range]，抽取顺序 B, C, S"""
        r = float(jitter_range)
        u_b = rng.uniform(-r, r)
        u_c = rng.uniform(-r, r)
        u_s = rng.uniform(-r, r)
        img = adjust_brightness(to_pil(image), 1.0 + u_b)
        img = adjust_contrast(img, 1.0 + u_c)
        return from_pil(adjust_saturation(img, 1.0 + u_s))
