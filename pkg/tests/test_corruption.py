"""
腐蚀引擎测试：性质、确定性、尺寸约定与已知例子
"""
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from application.common.config import SeedScheme
from application.common.constants import SeverityEnum
from application.common.exception import InvalidImage, SeverityMissing, SeverityNotApplicable, UnknownAugmentation
from application.common.schema import CorruptionConfig
from application.common.utils.ImageUtils import from_float, to_float
from application.core.determinism import make_rng
from application.service.corruption import augmentation_registry, corruption_service, primitives
from tests.conftest import random_image

SHAPE_CHANGING = {"downsample", "upsample", "add_border"}


def all_configs(sample_index: int = 0):
    for spec in augmentation_registry:
        if spec.is_binary:
            yield CorruptionConfig(aug_id=spec.id, sample_index=sample_index)
        else:
            for severity in SeverityEnum.ordered():
                yield CorruptionConfig(aug_id=spec.id, severity=severity, sample_index=sample_index)


def test_all_configs_count():
    assert len(list(all_configs())) == 133


def test_every_config_is_valid_and_deterministic():
    """133 个配置：输出为 uint8 RGB，两次运行逐字节一致"""
    image = random_image(1, 40, 56)
    for cfg in all_configs(sample_index=3):
        first = corruption_service.apply(image, cfg)
        second = corruption_service.apply(image, cfg)
        assert first.dtype == np.uint8 and first.ndim == 3 and first.shape[2] == 3, cfg
        assert np.array_equal(first, second), cfg
        if cfg.aug_id not in SHAPE_CHANGING:
            assert first.shape == image.shape, cfg


def test_worker_count_does_not_change_output():
    images = [random_image(i, 32, 32) for i in range(3)]
    configs = [c for c in all_configs() if c.aug_id in ("glass_blur", "gaussian_noise", "elastic_transform", "snow")]

    def work(pair):
        index, cfg = pair
        return corruption_service.apply(images[index], cfg.model_copy(update={"sample_index": index}))

    pairs = [(i, c) for i in range(len(images)) for c in configs]
    serial = [work(p) for p in pairs]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(work, pairs))
    assert all(np.array_equal(a, b) for a, b in zip(serial, parallel))


def test_sample_index_changes_random_corruptions():
    image = random_image(2, 32, 32)
    a = corruption_service.apply(image, corruption_service.config_for("gaussian_noise", "high", sample_index=0))
    b = corruption_service.apply(image, corruption_service.config_for("gaussian_noise", "high", sample_index=1))
    assert not np.array_equal(a, b)


def test_base_seed_changes_random_corruptions():
    image = random_image(2, 32, 32)
    cfg = corruption_service.config_for("salt_pepper", "mid")
    a = corruption_service.apply(image, cfg, SeedScheme(augmentation_base_seed=1234))
    b = corruption_service.apply(image, cfg, SeedScheme(augmentation_base_seed=4321))
    assert not np.array_equal(a, b)


def test_shape_changing_corruptions():
    image = random_image(3, 40, 60)
    down = corruption_service.apply(image, corruption_service.config_for("downsample", "low"))
    assert down.shape == (30, 45, 3)
    up = corruption_service.apply(image, corruption_service.config_for("upsample", "mid"))
    assert up.shape == (120, 180, 3)
    border = corruption_service.apply(image, corruption_service.config_for("add_border", "low"))
    assert border.shape == (60, 80, 3)
    assert np.all(border[:10] == 0) and np.array_equal(border[10:50, 10:70], image)


def test_downsample_clamps_degenerate_size():
    image = random_image(4, 3, 3)
    out = corruption_service.apply(image, corruption_service.config_for("downsample", "high"))
    assert out.shape == (1, 1, 3)


@pytest.mark.parametrize("seed", range(50))
def test_involutions_and_idempotence(seed):
    image = random_image(seed, 17, 23)

    def run(aug_id, img):
        return corruption_service.apply(img, corruption_service.config_for(aug_id))

    assert np.array_equal(run("flip_h", run("flip_h", image)), image)
    assert np.array_equal(run("flip_v", run("flip_v", image)), image)
    assert np.array_equal(run("invert", run("invert", image)), image)
    assert np.array_equal(run("channel_swap", run("channel_swap", run("channel_swap", image))), image)
    gray = run("grayscale", image)
    assert np.array_equal(run("grayscale", gray), gray)
    stretched = run("autocontrast", image)
    assert np.array_equal(run("autocontrast", stretched), stretched)


def test_channel_swap_cycle_direction():
    image = np.zeros((1, 1, 3), dtype=np.uint8)
    image[0, 0] = [10, 20, 30]
    out = corruption_service.apply(image, corruption_service.config_for("channel_swap"))
    assert out[0, 0].tolist() == [30, 10, 20]


def test_pointwise_examples():
    image = np.array([[[0, 100, 200], [64, 128, 255]]], dtype=np.uint8)
    solarized = corruption_service.apply(image, corruption_service.config_for("solarize", "mid"))
    assert solarized.tolist() == [[[0, 100, 55], [64, 127, 0]]]
    posterized = corruption_service.apply(image, corruption_service.config_for("posterize", "high"))
    assert posterized.tolist() == [[[0, 64, 192], [64, 128, 192]]]
    inverted = corruption_service.apply(image, corruption_service.config_for("invert"))
    assert inverted.tolist() == [[[255, 155, 55], [191, 127, 0]]]


def test_saturation_zero_is_gray():
    image = random_image(5, 8, 8)
    out = corruption_service.apply(image, corruption_service.config_for("saturation", "high"))
    assert np.all(out[..., 0] == out[..., 1]) and np.all(out[..., 1] == out[..., 2])


def test_center_occlusion_blocks_center():
    image = np.full((40, 40, 3), 200, dtype=np.uint8)
    out = corruption_service.apply(image, corruption_service.config_for("center_occlusion", "high"))
    assert np.all(out[20, 20] == 0)
    assert np.all(out[0, 0] == 200)


def test_rotation_keeps_constant_center():
    image = np.full((31, 31, 3), 90, dtype=np.uint8)
    out = corruption_service.apply(image, corruption_service.config_for("rotate", "high"))
    assert out[15, 15].tolist() == [90, 90, 90]


def test_multi_image_sample_continues_stream():
    """同一样本的多张图片共用一条随机流，第二张与单独处理时不同"""
    image = random_image(6, 24, 24)
    cfg = corruption_service.config_for("gaussian_noise", "mid", sample_index=2)
    first, second = corruption_service.apply_many([image, image], cfg)
    alone = corruption_service.apply(image, cfg)
    assert np.array_equal(first, alone)
    assert not np.array_equal(second, alone)


def test_config_errors():
    image = random_image(0, 8, 8)
    with pytest.raises(UnknownAugmentation):
        corruption_service.apply(image, CorruptionConfig(aug_id="nope"))
    with pytest.raises(SeverityMissing):
        corruption_service.apply(image, CorruptionConfig(aug_id="glass_blur"))
    with pytest.raises(SeverityNotApplicable):
        corruption_service.apply(image, CorruptionConfig(aug_id="flip_v", severity=SeverityEnum.LOW))
    with pytest.raises(InvalidImage):
        corruption_service.apply(np.zeros((4, 4), dtype=np.uint8), corruption_service.config_for("flip_v"))


def test_apply_raw_bypasses_schedule():
    image = random_image(9, 16, 16)
    out = corruption_service.apply_raw(image, "solarize", 0, seed=1)
    assert np.array_equal(out, 255 - image)


def _apply(image, aug_id, severity=None):
    return corruption_service.apply(image, corruption_service.config_for(aug_id, severity))


def test_brightness_high_scales_down():
    image = np.full((2, 3, 3), 200, dtype=np.uint8)
    assert np.all(_apply(image, "brightness", "high") == 20)


def test_solarize_high_threshold():
    image = np.array([[[70, 60, 64]]], dtype=np.uint8)
    assert _apply(image, "solarize", "high").tolist() == [[[185, 60, 191]]]


def test_flip_h_swaps_row():
    image = np.array([[[1, 2, 3], [4, 5, 6]]], dtype=np.uint8)
    assert _apply(image, "flip_h").tolist() == [[[4, 5, 6], [1, 2, 3]]]


def test_jpeg_quality_100_on_uniform_gray():
    image = np.full((16, 16, 3), 128, dtype=np.uint8)
    out = primitives.jpeg_recompress(image, 100)
    assert np.abs(out.astype(np.int16) - 128).max() <= 1


def test_saturation_high_matches_grayscale():
    image = random_image(11, 20, 24)
    desaturated = _apply(image, "saturation", "high").astype(np.int16)
    gray = _apply(image, "grayscale").astype(np.int16)
    assert np.abs(desaturated - gray).max() <= 1


def test_equalize_spreads_levels_and_keeps_constant_channel():
    # 16 个灰阶各 17 个像素
    image = np.zeros((16, 17, 3), dtype=np.uint8)
    image[..., 0] = (np.arange(16, dtype=np.uint8) + 100)[:, None]
    image[..., 1] = 77
    out = _apply(image, "equalize")
    assert out[..., 0].min() == 0 and out[..., 0].max() == 255
    assert np.all(np.diff(out[:, 0, 0].astype(np.int16)) > 0)
    assert np.all(out[..., 1] == 77)


def test_text_overlay_and_watermark_change_pixels():
    image = np.full((64, 96, 3), 120, dtype=np.uint8)
    text = _apply(image, "text_overlay", "low")
    assert set(np.unique(text).tolist()) <= {0, 120, 255}
    assert np.any(text == 255) and np.any(text == 0)
    marked = _apply(np.full((128, 128, 3), 120, dtype=np.uint8), "watermark", "low")
    # 40% 白色叠加：120 + 0.4 × 135 = 174
    assert set(np.unique(marked).tolist()) == {120, 174}


def test_glass_blur_matches_sequential_swaps():
    image = random_image(12, 9, 11)
    out = corruption_service.apply_raw(image, "glass_blur", 0.9, seed=5)

    rng = make_rng(5)
    expected = from_float(primitives.gaussian_blur(to_float(image), 0.9))
    height, width = expected.shape[:2]
    for _ in range(2):
        offsets = rng.integer_array((height, width, 2), -1, 2)
        for y in range(height):
            for x in range(width):
                ny, nx = y + offsets[y, x, 0], x + offsets[y, x, 1]
                if 0 <= ny < height and 0 <= nx < width:
                    expected[y, x], expected[ny, nx] = expected[ny, nx].copy(), expected[y, x].copy()
    assert np.array_equal(out, expected)
