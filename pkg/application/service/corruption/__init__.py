from .corruption_service import CorruptionService, corruption_service
from .registry import AugmentationRegistry, augmentation_registry, registry

__all__ = [
    "CorruptionService",
    "corruption_service",
    "AugmentationRegistry",
    "augmentation_registry",
    "registry",
]
