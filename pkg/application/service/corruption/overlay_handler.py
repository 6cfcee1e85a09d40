"""
VLM 场景特有的叠加类腐蚀：text_overlay / watermark / add_border
文字用 Pillow 内置点阵字体绘制，不依赖系统字体
"""
import math

import numpy as np
from PIL import Image as PILImage
from PIL import ImageDraw, ImageFont, ImageOps
from scipy import ndimage

from application.common.utils.ImageUtils import from_pil, to_pil
from application.core.determinism import RngStream
from application.service.corruption import primitives
from application.service.corruption.corruption_handler import CorruptionHandler

OVERLAY_TEXT = "SAMPLE TEXT"
WATERMARK_TEXT = "WATERMARK"
WATERMARK_OPACITY = 0.4

# 固定点阵字体，与 FreeType 是否可用无关
BITMAP_FONT = ImageFont.load_default_imagefont()
GLYPH_ROWS = BITMAP_FONT.getbbox("SAMPLE TEXT WATERMARK")[3]


def glyph_scale(fontsize: int) -> int:
    """字形放大倍数 max(1, round(fontsize / 字高))"""
    return max(1, int(math.floor(float(fontsize) / GLYPH_ROWS + 0.5)))


def text_mask(text: str, fontsize: int) -> np.ndarray:
    """渲染文字掩码，按 glyph_scale 最近邻放大"""
    left, top, right, bottom = BITMAP_FONT.getbbox(text)
    canvas = PILImage.new("L", (right - left, bottom - top), 0)
    ImageDraw.Draw(canvas).text((-left, -top), text, fill=255, font=BITMAP_FONT)
    scale = glyph_scale(fontsize)
    if scale > 1:
        canvas = canvas.resize((canvas.width * scale, canvas.height * scale), PILImage.Resampling.NEAREST)
    return np.asarray(canvas) > 127


def _paste(canvas: np.ndarray, mask: np.ndarray, top: int, left: int) -> None:
    """把 mask 按 (top, left) 贴到 canvas 上，超出部分裁掉"""
    height, width = canvas.shape
    mh, mw = mask.shape
    y0, x0 = max(0, top), max(0, left)
    y1, x1 = min(height, top + mh), min(width, left + mw)
    if y0 >= y1 or x0 >= x1:
        return
    canvas[y0:y1, x0:x1] |= mask[y0 - top:y1 - top, x0 - left:x1 - left]


class OverlayHandler(CorruptionHandler):

    def operations(self):
        return {
            "text_overlay": self.text_overlay,
            "watermark": self.watermark,
            "add_border": self.add_border,
        }

    @staticmethod
    def text_overlay(image: np.ndarray, fontsize: int, rng: RngStream) -> np.ndarray:
        """居中白字黑描边"""
        height, width = image.shape[:2]
        glyphs = text_mask(OVERLAY_TEXT, int(fontsize))
        outline_px = max(1, glyph_scale(int(fontsize)) // 4)
        padded = np.pad(glyphs, outline_px)
        outline = ndimage.binary_dilation(padded, iterations=outline_px)
        top = (height - padded.shape[0]) // 2
        left = (width - padded.shape[1]) // 2

        text_layer = np.zeros((height, width), dtype=bool)
        outline_layer = np.zeros((height, width), dtype=bool)
        _paste(text_layer, padded, top, left)
        _paste(outline_layer, outline, top, left)

        out = image.copy()
        out[outline_layer] = 0
        out[text_layer] = 255
        return out

    @staticmethod
    def watermark(image: np.ndarray, fontsize: int, rng: RngStream) -> np.ndarray:
        """
        文字沿 45° 对角线平铺，不透明度 40%
        以图像中心为原点旋转 −45° 后对平铺单元取模，按最近邻查表；中心落在文字中央
        """
        height, width = image.shape[:2]
        glyphs = text_mask(WATERMARK_TEXT, int(fontsize))
        gh, gw = glyphs.shape
        tile = np.zeros((gh * 3, gw + gh * 2), dtype=bool)
        tile[gh:2 * gh, gh:gh + gw] = glyphs
        th, tw = tile.shape

        xs, ys = primitives.pixel_grid(height, width)
        xs -= (width - 1) / 2.0
        ys -= (height - 1) / 2.0
        cos_t = sin_t = math.sqrt(0.5)
        u = np.floor(xs * cos_t - ys * sin_t + tw / 2.0).astype(np.int64) % tw
        v = np.floor(xs * sin_t + ys * cos_t + th / 2.0).astype(np.int64) % th
        alpha = PILImage.fromarray(np.where(tile[v, u], round(255 * WATERMARK_OPACITY), 0).astype(np.uint8))
        base = to_pil(image)
        white = PILImage.new("RGB", base.size, (255, 255, 255))
        return from_pil(PILImage.composite(white, base, alpha))

    @staticmethod
    def add_border(image: np.ndarray, width: int, rng: RngStream) -> np.ndarray:
        """四边各加 width 像素黑框，尺寸增大 2·width"""
        w = int(width)
        return from_pil(ImageOps.expand(to_pil(image), border=w, fill=(0, 0, 0)))
