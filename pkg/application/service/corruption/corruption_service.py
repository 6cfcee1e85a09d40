from typing import Dict, List, Optional, Sequence

import numpy as np

from application.common.config import SeedScheme
from application.common.constants import SeverityEnum
from application.common.exception import SeverityMissing, SeverityNotApplicable, UnknownAugmentation
from application.common.schema import AugmentationSpec, CorruptionConfig, Number
from application.common.utils.ValidationUtils import ValidationUtils
from application.core.determinism import RngStream, make_rng, sample_seed
from application.core.logger_util import logger
from application.service.corruption.binary_handler import BinaryHandler
from application.service.corruption.blur_handler import BlurHandler
from application.service.corruption.color_handler import ColorHandler
from application.service.corruption.corruption_handler import CorruptionHandler
from application.service.corruption.digital_handler import DigitalHandler
from application.service.corruption.geometric_handler import GeometricHandler
from application.service.corruption.noise_handler import NoiseHandler
from application.service.corruption.occlusion_handler import OcclusionHandler
from application.service.corruption.overlay_handler import OverlayHandler
from application.service.corruption.registry import AugmentationRegistry, augmentation_registry
from application.service.corruption.resolution_handler import ResolutionHandler
from application.service.corruption.weather_handler import WeatherHandler


class CorruptionService:
    """
    腐蚀引擎入口
    按 aug_id 分发到各分类处理器；同一样本的所有图片共用一条从 sample_seed 派生的随机流
    """

    def __init__(self, registry: AugmentationRegistry = augmentation_registry):
        self._registry = registry
        handlers: List[CorruptionHandler] = [
            BlurHandler(),
            NoiseHandler(),
            WeatherHandler(),
            DigitalHandler(),
            GeometricHandler(),
            ColorHandler(),
            OcclusionHandler(),
            ResolutionHandler(),
            OverlayHandler(),
            BinaryHandler(),
        ]
        self._handlers: Dict[str, CorruptionHandler] = {}
        for handler in handlers:
            for aug_id in handler.operations():
                self._handlers[aug_id] = handler
        missing = [s.id for s in registry if s.id not in self._handlers]
        if missing:
            raise RuntimeError(f"以下增强没有对应的处理器: {missing}")

    def validate(self, cfg: CorruptionConfig) -> AugmentationSpec:
        """
        :raises UnknownAugmentation: 未注册
        :raises SeverityMissing: 带严重程度的增强未给严重程度
        :raises SeverityNotApplicable: 二值增强给了严重程度
        """
        spec = self._registry.get(cfg.aug_id)
        if spec.is_binary and cfg.severity is not None:
            raise SeverityNotApplicable(cfg.aug_id)
        if not spec.is_binary and cfg.severity is None:
            raise SeverityMissing(cfg.aug_id)
        return spec

    def rng_for(self, cfg: CorruptionConfig, seeds: SeedScheme) -> RngStream:
        return make_rng(sample_seed(seeds.augmentation_base_seed, cfg.sample_index))

    def apply(self, image: np.ndarray, cfg: CorruptionConfig, seeds: Optional[SeedScheme] = None) -> np.ndarray:
        """单张图片"""
        return self.apply_many([image], cfg, seeds)[0]

    def apply_many(
            self,
            images: Sequence[np.ndarray],
            cfg: CorruptionConfig,
            seeds: Optional[SeedScheme] = None
    ) -> List[np.ndarray]:
        """
        样本内的全部图片依次处理，随机流在图片之间连续消耗
        """
        spec = self.validate(cfg)
        seeds = seeds or SeedScheme()
        value = None if spec.is_binary else spec.value_for(cfg.severity)
        rng = self.rng_for(cfg, seeds)
        return [self._run(spec.id, ValidationUtils.validate_image(img), value, rng) for img in images]

    def apply_raw(self, image: np.ndarray, aug_id: str, value: Optional[Number], seed: int) -> np.ndarray:
        """直接给定参数值与种子，绕过三档参数表"""
        if not self._registry.contains(aug_id):
            raise UnknownAugmentation(aug_id)
        logger.debug(f"使用原始参数 {aug_id}={value}, seed={seed}")
        return self._run(aug_id, ValidationUtils.validate_image(image), value, make_rng(seed))

    def _run(self, aug_id: str, image: np.ndarray, value: Optional[Number], rng: RngStream) -> np.ndarray:
        out = self._handlers[aug_id].handle(aug_id, image, value, rng)
        return ValidationUtils.validate_image(out)

    @staticmethod
    def config_for(aug_id: str, severity=None, sample_index: int = 0) -> CorruptionConfig:
        return CorruptionConfig(
            aug_id=aug_id,
            severity=SeverityEnum.from_value(severity) if severity is not None else None,
            sample_index=sample_index,
        )


# 创建服务实例
corruption_service = CorruptionService()

__all__ = ["CorruptionService", "corruption_service"]
