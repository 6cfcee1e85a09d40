"""
图像读写工具
PNG 编码固定参数，保证同一像素数组得到同样的字节
"""
import base64
import io
import os

import numpy as np
from PIL import Image as PILImage

from application.common.utils.ValidationUtils import ValidationUtils

PNG_COMPRESS_LEVEL = 6


def load_image(path: str) -> np.ndarray:
    """读取 PNG/JPEG，统一转为 H×W×3 uint8（丢弃 alpha）"""
    with PILImage.open(path) as img:
        img.load()
        rgb = img.convert("RGB")
        return np.asarray(rgb, dtype=np.uint8).copy()


def png_bytes(image: np.ndarray) -> bytes:
    image = ValidationUtils.validate_image(image)
    buffer = io.BytesIO()
    PILImage.fromarray(image).save(buffer, format="PNG", compress_level=PNG_COMPRESS_LEVEL)
    return buffer.getvalue()


def save_png(image: np.ndarray, path: str) -> str:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    data = png_bytes(image)
    tmp_path = f"{path}.tmp"
    with open(tmp_path, "wb") as f:
        f.write(data)
    os.replace(tmp_path, path)
    return path


def png_data_url(image: np.ndarray) -> str:
    """发送给推理端点的 base64 内联图片，始终是 PNG"""
    encoded = base64.b64encode(png_bytes(image)).decode("ascii")
    return f"data:image/png;base64,{encoded}"


def to_pil(image: np.ndarray) -> PILImage.Image:
    return PILImage.fromarray(ValidationUtils.validate_image(image))


def from_pil(img: PILImage.Image) -> np.ndarray:
    return np.asarray(img.convert("RGB"), dtype=np.uint8).copy()


def to_float(image: np.ndarray) -> np.ndarray:
    return image.astype(np.float64) / 255.0


def from_float(values: np.ndarray) -> np.ndarray:
    """裁剪到 [0, 1] 后按 floor(v·255 + 0.5) 回到 8 位（非负数上即四舍五入远离零）"""
    clipped = np.clip(values, 0.0, 1.0)
    return np.floor(clipped * 255.0 + 0.5).astype(np.uint8)


def from_levels(values: np.ndarray) -> np.ndarray:
    """0-255 浮点值直接裁剪取整回 8 位"""
    return np.floor(np.clip(values, 0.0, 255.0) + 0.5).astype(np.uint8)


__all__ = [
    "load_image", "png_bytes", "save_png", "png_data_url", "to_pil", "from_pil", "to_float", "from_float", "from_levels",
]
