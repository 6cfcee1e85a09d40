"""
增强目录测试
"""
import pytest

from application.common.constants import CategoryEnum, SeverityEnum
from application.common.exception import UnknownAugmentation
from application.service.corruption import augmentation_registry, registry

# 参数表逐项核对
EXPECTED_SCHEDULES = {
    "gaussian_blur": (0.5, 1.5, 2.5), "motion_blur": (5, 9, 15), "defocus_blur": (1.0, 3.0, 5.0),
    "zoom_blur": (0.02, 0.06, 0.10), "glass_blur": (0.5, 0.9, 1.3),
    "gaussian_noise": (0.02, 0.06, 0.10), "shot_noise": (25, 10, 5), "speckle_noise": (0.05, 0.15, 0.25),
    "salt_pepper": (0.01, 0.04, 0.08),
    "fog": (0.2, 0.6, 1.0), "frost": (0.2, 0.6, 1.0), "snow": (0.1, 0.3, 0.5), "rain": (0.1, 0.3, 0.5),
    "spatter": (0.1, 0.3, 0.5),
    "jpeg_compression": (80, 50, 20), "pixelate": (0.9, 0.5, 0.2),
    "rotate": (5, 15, 30), "shear": (5, 15, 25), "affine": (5, 15, 30),
    "perspective_transform": (0.05, 0.15, 0.25), "elastic_transform": (30, 80, 180),
    "brightness": (0.7, 0.3, 0.1), "brightness_up": (1.3, 1.7, 2.5), "contrast": (0.7, 0.3, 0.1),
    "contrast_up": (1.3, 1.8, 3.0), "saturation": (0.5, 0.1, 0.0), "saturation_up": (1.5, 2.5, 4.0),
    "gamma": (0.7, 0.4, 0.2), "gamma_up": (1.3, 2.0, 3.0), "hue_shift": (10, 40, 90),
    "color_jitter": (0.1, 0.3, 0.5),
    "random_occlusion": (0.05, 0.15, 0.25), "grid_mask": (0.1, 0.2, 0.3), "center_occlusion": (0.1, 0.3, 0.5),
    "downsample": (0.75, 0.35, 0.15), "upsample": (1.5, 3.0, 6.0), "sharpen": (1.5, 3.0, 6.0),
    "posterize": (6, 4, 2), "solarize": (200, 128, 64),
    "text_overlay": (24, 48, 72), "watermark": (24, 48, 72), "add_border": (10, 30, 60),
}
BINARY = ["flip_h", "flip_v", "grayscale", "invert", "channel_swap", "equalize", "autocontrast"]


def test_registry_size_and_order():
    specs = registry()
    assert len(specs) == 49
    assert [s.id for s in specs] == list(EXPECTED_SCHEDULES) + BINARY


def test_schedules_match_table():
    for aug_id, schedule in EXPECTED_SCHEDULES.items():
        assert augmentation_registry.get(aug_id).schedule == schedule, aug_id


def test_solarize_and_binary_rows():
    assert augmentation_registry.get("solarize").schedule == (200, 128, 64)
    assert augmentation_registry.get("flip_v").schedule is None
    assert augmentation_registry.get("solarize").value_for(SeverityEnum.MID) == 128


def test_category_counts():
    assert len(augmentation_registry.severity_based()) == 42
    assert [s.id for s in augmentation_registry.binary()] == BINARY
    counts = {c: len(augmentation_registry.by_category(c)) for c in CategoryEnum}
    assert counts[CategoryEnum.BLUR] == 5
    assert counts[CategoryEnum.COLOR_TONE] == 10
    assert counts[CategoryEnum.BINARY] == 7
    assert sum(counts.values()) == 49


def test_unknown_augmentation():
    with pytest.raises(UnknownAugmentation):
        augmentation_registry.get("not_a_corruption")
    assert augmentation_registry.find("not_a_corruption") is None
