"""
增强目录：42 个带严重程度的腐蚀 + 7 个二值变换
顺序即参数表顺序，二值变换排在最后；扫描计划与报表都依赖这个顺序
"""
from typing import Dict, List, Optional

from application.common.constants import CategoryEnum
from application.common.exception import UnknownAugmentation
from application.common.schema import AugmentationSpec

_UP = "increasing"
_DOWN = "decreasing"


def _spec(aug_id, category, param, low, mid, high, note, direction, preserves_shape=True) -> AugmentationSpec:
    return AugmentationSpec(
        id=aug_id,
        category=category,
        param_name=param,
        schedule=(low, mid, high),
        direction=direction,
        note=note,
        preserves_shape=preserves_shape,
    )


def _binary(aug_id, note) -> AugmentationSpec:
    return AugmentationSpec(id=aug_id, category=CategoryEnum.BINARY, note=note)


_B = CategoryEnum.BLUR
_N = CategoryEnum.NOISE
_W = CategoryEnum.WEATHER
_D = CategoryEnum.DIGITAL
_G = CategoryEnum.GEOMETRIC
_C = CategoryEnum.COLOR_TONE
_O = CategoryEnum.OCCLUSION
_R = CategoryEnum.RESOLUTION
_V = CategoryEnum.VLM_SPECIFIC

_CATALOG: List[AugmentationSpec] = [
    # Blur
    _spec("gaussian_blur", _B, "radius", 0.5, 1.5, 2.5, "pixels", _UP),
    _spec("motion_blur", _B, "ksize", 5, 9, 15, "kernel size", _UP),
    _spec("defocus_blur", _B, "radius", 1.0, 3.0, 5.0, "pixels", _UP),
    _spec("zoom_blur", _B, "factor", 0.02, 0.06, 0.10, "zoom amount", _UP),
    _spec("glass_blur", _B, "sigma", 0.5, 0.9, 1.3, "blur sigma", _UP),
    # Noise
    _spec("gaussian_noise", _N, "std", 0.02, 0.06, 0.10, "normalized", _UP),
    _spec("shot_noise", _N, "scale", 25, 10, 5, "lower=more", _DOWN),
    _spec("speckle_noise", _N, "std", 0.05, 0.15, 0.25, "normalized", _UP),
    _spec("salt_pepper", _N, "amount", 0.01, 0.04, 0.08, "pixel fraction", _UP),
    # Weather
    _spec("fog", _W, "intensity", 0.2, 0.6, 1.0, "opacity", _UP),
    _spec("frost", _W, "intensity", 0.2, 0.6, 1.0, "opacity", _UP),
    _spec("snow", _W, "intensity", 0.1, 0.3, 0.5, "density", _UP),
    _spec("rain", _W, "intensity", 0.1, 0.3, 0.5, "density", _UP),
    _spec("spatter", _W, "intensity", 0.1, 0.3, 0.5, "coverage", _UP),
    # Digital
    _spec("jpeg_compression", _D, "quality", 80, 50, 20, "lower=worse", _DOWN),
    _spec("pixelate", _D, "scale", 0.9, 0.5, 0.2, "lower=coarser", _DOWN),
    # Geometric
    _spec("rotate", _G, "degrees", 5, 15, 30, "rotation", _UP),
    _spec("shear", _G, "degrees", 5, 15, 25, "shear angle", _UP),
    _spec("affine", _G, "degrees", 5, 15, 30, "rotation+scale", _UP),
    _spec("perspective_transform", _G, "magnitude", 0.05, 0.15, 0.25, "distortion", _UP),
    _spec("elastic_transform", _G, "alpha", 30, 80, 180, "deformation", _UP),
    # Color/Tone
    _spec("brightness", _C, "factor", 0.7, 0.3, 0.1, "lower=darker", _DOWN),
    _spec("brightness_up", _C, "factor", 1.3, 1.7, 2.5, "higher=brighter", _UP),
    _spec("contrast", _C, "factor", 0.7, 0.3, 0.1, "lower=flatter", _DOWN),
    _spec("contrast_up", _C, "factor", 1.3, 1.8, 3.0, "higher=sharper", _UP),
    _spec("saturation", _C, "factor", 0.5, 0.1, 0.0, "lower=grayer", _DOWN),
    _spec("saturation_up", _C, "factor", 1.5, 2.5, 4.0, "higher=vivid", _UP),
    _spec("gamma", _C, "factor", 0.7, 0.4, 0.2, "lower=brighter", _DOWN),
    _spec("gamma_up", _C, "factor", 1.3, 2.0, 3.0, "higher=darker", _UP),
    _spec("hue_shift", _C, "degrees", 10, 40, 90, "color rotation", _UP),
    _spec("color_jitter", _C, "range", 0.1, 0.3, 0.5, "random B/C/S", _UP),
    # Occlusion
    _spec("random_occlusion", _O, "ratio", 0.05, 0.15, 0.25, "area blocked", _UP),
    _spec("grid_mask", _O, "ratio", 0.1, 0.2, 0.3, "grid density", _UP),
    _spec("center_occlusion", _O, "ratio", 0.1, 0.3, 0.5, "center blocked", _UP),
    # Resolution
    _spec("downsample", _R, "scale", 0.75, 0.35, 0.15, "lower=smaller", _DOWN, preserves_shape=False),
    _spec("upsample", _R, "scale", 1.5, 3.0, 6.0, "interpolation", _UP, preserves_shape=False),
    _spec("sharpen", _R, "factor", 1.5, 3.0, 6.0, "edge enhance", _UP),
    _spec("posterize", _R, "bits", 6, 4, 2, "lower=fewer", _DOWN),
    _spec("solarize", _R, "threshold", 200, 128, 64, "lower=more", _DOWN),
    # VLM-specific
    _spec("text_overlay", _V, "fontsize", 24, 48, 72, "pixels", _UP),
    _spec("watermark", _V, "fontsize", 24, 48, 72, "pixels", _UP),
    _spec("add_border", _V, "width", 10, 30, 60, "pixels", _UP, preserves_shape=False),
    # Binary
    _binary("flip_h", "horizontal mirror"),
    _binary("flip_v", "vertical mirror"),
    _binary("grayscale", "luma 0.299/0.587/0.114"),
    _binary("invert", "255 - x"),
    _binary("channel_swap", "cyclic R->G->B->R"),
    _binary("equalize", "per-channel histogram equalization"),
    _binary("autocontrast", "per-channel min/max stretch"),
]


class AugmentationRegistry:
    """
    只读增强目录
    """

    def __init__(self, specs: List[AugmentationSpec]):
        self._specs = list(specs)
        self._index: Dict[str, AugmentationSpec] = {s.id: s for s in self._specs}
        if len(self._index) != len(self._specs):
            raise ValueError("增强标识重复")

    def __len__(self) -> int:
        return len(self._specs)

    def __iter__(self):
        return iter(self._specs)

    def __getitem__(self, aug_id: str) -> AugmentationSpec:
        return self.get(aug_id)

    def all(self) -> List[AugmentationSpec]:
        return list(self._specs)

    def ids(self) -> List[str]:
        return [s.id for s in self._specs]

    def contains(self, aug_id: str) -> bool:
        return aug_id in self._index

    def get(self, aug_id: str) -> AugmentationSpec:
        spec = self._index.get(aug_id)
        if spec is None:
            raise UnknownAugmentation(aug_id)
        return spec

    def find(self, aug_id: str) -> Optional[AugmentationSpec]:
        return self._index.get(aug_id)

    def severity_based(self) -> List[AugmentationSpec]:
        return [s for s in self._specs if not s.is_binary]

    def binary(self) -> List[AugmentationSpec]:
        return [s for s in self._specs if s.is_binary]

    def by_category(self, category: CategoryEnum) -> List[AugmentationSpec]:
        return [s for s in self._specs if s.category == category]

    def categories(self) -> List[CategoryEnum]:
        return list(dict.fromkeys(s.category for s in self._specs))


augmentation_registry = AugmentationRegistry(_CATALOG)


def registry() -> List[AugmentationSpec]:
    """完整的 49 项目录，顺序固定"""
    return augmentation_registry.all()


__all__ = ["AugmentationRegistry", "augmentation_registry", "registry"]
