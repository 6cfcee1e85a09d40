"""
验证工具类
提供图像、答案字母、种子等常用校验方法
"""
import re

import numpy as np

from application.common.exception import InvalidImage


class ValidationUtils:
    """验证工具类"""

    # 增强标识：小写字母、数字、下划线
    AUG_ID_PATTERN = r'^[a-z][a-z0-9_]*$'

    # 答案字母 A-J
    LETTER_PATTERN = r'^[A-J]$'

    @staticmethod
    def is_valid_aug_id(aug_id: str) -> bool:
        if not aug_id or not isinstance(aug_id, str):
            return False
        return bool(re.match(ValidationUtils.AUG_ID_PATTERN, aug_id))

    @staticmethod
    def is_valid_letter(letter: str) -> bool:
        if not letter or not isinstance(letter, str):
            return False
        return bool(re.match(ValidationUtils.LETTER_PATTERN, letter.strip().upper()))

    @staticmethod
    def validate_letters(letters) -> list:
        """
        校验并规范化候选字母集合

        :param letters: 可迭代的字母
        :return: 大写、去重、保持顺序的字母列表
        :raises ValueError: 为空或含非法字母
        """
        normalized = list(dict.fromkeys(str(x).strip().upper() for x in letters))
        if not normalized:
            raise ValueError('候选字母不能为空')
        bad = [x for x in normalized if not ValidationUtils.is_valid_letter(x)]
        if bad:
            raise ValueError(f'候选字母必须是 A-J: {bad}')
        return normalized

    @staticmethod
    def validate_image(image: np.ndarray) -> np.ndarray:
        """
        校验图像为 H×W×3 的 uint8 数组

        :param image: 图像数组
        :return: C 连续的图像数组
        :raises InvalidImage: 形状、类型或尺寸不合法
        """
        if not isinstance(image, np.ndarray):
            raise InvalidImage(message=f'图像必须是 numpy 数组，当前为 {type(image).__name__}')
        if image.dtype != np.uint8:
            raise InvalidImage(message=f'图像必须是 uint8，当前为 {image.dtype}')
        if image.ndim != 3 or image.shape[2] != 3:
            raise InvalidImage(message=f'图像必须是 H×W×3 RGB，当前形状 {image.shape}')
        if image.shape[0] < 1 or image.shape[1] < 1:
            raise InvalidImage(message=f'图像宽高必须 ≥ 1，当前形状 {image.shape}')
        return np.ascontiguousarray(image)

    @staticmethod
    def validate_seed(seed: int) -> int:
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ValueError(f'种子必须是整数: {seed!r}')
        if not 0 <= seed < 2 ** 32:
            raise ValueError(f'种子必须在 [0, 2^32) 内: {seed}')
        return seed
