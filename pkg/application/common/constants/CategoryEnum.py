from enum import Enum


class CategoryEnum(str, Enum):
    """
    增强分类（与分类表一致，Binary 为无严重程度的开关型变换）
    """
    BLUR = "blur"
    NOISE = "noise"
    WEATHER = "weather"
    DIGITAL = "digital"
    GEOMETRIC = "geometric"
    COLOR_TONE = "color_tone"
    OCCLUSION = "occlusion"
    RESOLUTION = "resolution"
    VLM_SPECIFIC = "vlm_specific"
    BINARY = "binary"


class CategoryNameEnum(str, Enum):
    """
    分类展示名（报表列头）
    """
    BLUR = "Blur"
    NOISE = "Noise"
    WEATHER = "Weather"
    DIGITAL = "Digital"
    GEOMETRIC = "Geometric"
    COLOR_TONE = "Color/Tone"
    OCCLUSION = "Occlusion"
    RESOLUTION = "Resolution"
    VLM_SPECIFIC = "VLM-specific"
    BINARY = "Binary"
