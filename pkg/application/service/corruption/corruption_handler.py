from abc import ABC
from typing import Callable, Dict, Optional

import numpy as np

from application.common.exception import UnknownAugmentation
from application.common.schema import Number
from application.core.determinism import RngStream

Operation = Callable[[np.ndarray, Optional[Number], RngStream], np.ndarray]


class CorruptionHandler(ABC):
    """
    腐蚀处理接口：一个处理器负责一个分类下的若干增强
    子类在 operations() 中登记 aug_id → 算法
    """

    def operations(self) -> Dict[str, Operation]:
        raise NotImplementedError

    def handles(self, aug_id: str) -> bool:
        return aug_id in self.operations()

    def handle(self, aug_id: str, image: np.ndarray, value: Optional[Number], rng: RngStream) -> np.ndarray:
        """
        :param aug_id: 增强标识
        :param image: H×W×3 uint8
        :param value: 该严重程度对应的参数，二值增强为 None
        :param rng: 本次调用专用的随机流
        :return: H'×W'×3 uint8
        """
        operation = self.operations().get(aug_id)
        if operation is None:
            raise UnknownAugmentation(aug_id)
        return operation(image, value, rng)
