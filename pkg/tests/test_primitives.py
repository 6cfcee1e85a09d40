"""
图像原语测试
"""
import numpy as np
import pytest

from application.common.exception import EncodeFailure
from application.service.corruption import primitives
from tests.conftest import random_image


def test_gaussian_kernel_normalized():
    kernel = primitives.gaussian_kernel1d(1.5)
    assert kernel.shape == (11,)
    assert kernel.sum() == pytest.approx(1.0)
    assert np.allclose(kernel, kernel[::-1])


def test_gaussian_blur_preserves_constant():
    values = np.full((9, 7, 3), 0.4)
    assert np.allclose(primitives.gaussian_blur(values, 2.0), 0.4)


def test_zero_warp_is_identity():
    image = random_image(1, 12, 15)
    zeros = np.zeros((12, 15))
    assert np.array_equal(primitives.warp(image, zeros, zeros), image)


def test_integer_warp_shifts_and_fills_black():
    image = random_image(2, 6, 6)
    out = primitives.warp(image, np.full((6, 6), 2.0), np.zeros((6, 6)))
    assert np.array_equal(out[:, 2:], image[:, :4])
    assert np.all(out[:, :2] == 0)


def test_resample_sizes_and_clamp():
    image = random_image(3, 10, 20)
    assert primitives.resample(image, 0.5).shape == (5, 10, 3)
    assert primitives.resample(image, 0.25).shape == (3, 5, 3)  # 2.5 → 3, 5
    assert primitives.resample(image, 0.01).shape == (1, 1, 3)
    with pytest.raises(ValueError):
        primitives.resample(image, 0)


def test_resize_same_size_is_copy():
    image = random_image(4, 8, 8)
    out = primitives.resize(image, 8, 8)
    assert np.array_equal(out, image) and out is not image


def test_nearest_upscale_repeats_pixels():
    image = random_image(5, 2, 2)
    out = primitives.resize(image, 4, 4, "nearest")
    assert np.array_equal(out, np.repeat(np.repeat(image, 2, axis=0), 2, axis=1))


def test_jpeg_recompress_is_deterministic():
    image = random_image(6, 16, 16)
    a = primitives.jpeg_recompress(image, 50)
    b = primitives.jpeg_recompress(image, 50)
    assert np.array_equal(a, b)
    assert a.shape == image.shape
    with pytest.raises(EncodeFailure):
        primitives.jpeg_recompress(image, 0)


def test_bilinear_sample_interpolates_and_fills_black():
    values = np.array([[0.0, 10.0], [20.0, 30.0]])
    src_x = np.array([[0.5, 1.5, -1.0, 0.0]])
    src_y = np.array([[0.5, 0.0, 0.0, 1.0]])
    assert np.allclose(primitives.bilinear_sample(values, src_x, src_y), [[15.0, 5.0, 0.0, 20.0]])
    stacked = np.stack([values, values * 2], axis=-1)
    assert primitives.bilinear_sample(stacked, src_x, src_y).shape == (1, 4, 2)


def test_luma_weights():
    values = np.array([[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]])
    assert np.allclose(primitives.luma(values), [[0.299, 0.587, 0.114]])
