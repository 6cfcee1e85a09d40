import json
import math
import os
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from application.common.exception import ManifestParseError, ManifestValidationError
from application.common.schema import Dataset, Sample
from application.common.utils import ImageUtils
from application.core.determinism import make_rng
from application.core.logger_util import logger


class DatasetService:
    """
    评测 manifest 读写与分层采样
    manifest 为 UTF-8 JSONL，每行一个样本：
    {id, images: [path], question, options: [{letter, text}], answer, stratum}
    图片相对路径以 manifest 所在目录为基准
    """

    def load_manifest(self, path: str, name: Optional[str] = None, check_images: bool = True) -> Dataset:
        """
        :raises ManifestParseError: 某行不是合法 JSON
        :raises ManifestValidationError: 字段缺失、答案不在选项中、ID 重复、图片不存在
        """
        base_dir = os.path.dirname(os.path.abspath(path))
        samples: List[Sample] = []
        seen: Dict[str, int] = {}
        with open(path, "r", encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    raw = json.loads(line)
                except json.JSONDecodeError as e:
                    raise ManifestParseError(line_no, str(e)) from e
                if not isinstance(raw, dict):
                    raise ManifestParseError(line_no, "每行必须是 JSON 对象")

                raw["images"] = [self._resolve(base_dir, p) for p in raw.get("images") or []]
                try:
                    sample = Sample(**raw)
                except ValidationError as e:
                    raise ManifestValidationError(self._first_error(e), line=line_no) from e

                if sample.id in seen:
                    raise ManifestValidationError(f"样本ID {sample.id} 与第 {seen[sample.id]} 行重复", line=line_no)
                seen[sample.id] = line_no
                if check_images:
                    for image_path in sample.images:
                        if not os.path.isfile(image_path):
                            raise ManifestValidationError(f"图片不存在: {image_path}", line=line_no)
                samples.append(sample)

        dataset_name = name or os.path.splitext(os.path.basename(path))[0]
        logger.info(f"✅ 读取 manifest {path}: {len(samples)} 个样本")
        return Dataset(name=dataset_name, samples=samples)

    def write_manifest(self, dataset: Dataset, path: str) -> str:
        """按样本顺序写出 manifest，图片写绝对路径"""
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            for sample in dataset.samples:
                f.write(json.dumps(sample.model_dump(mode="json"), ensure_ascii=False) + "\n")
        return path

    @staticmethod
    def selection_size(stratum_size: int, fraction: float) -> int:
        """ceil(n_s × fraction)，用有理数精确计算避免 0.2 的二进制误差"""
        return math.ceil(Fraction(stratum_size) * Fraction(str(fraction)))

    def stratified_sample(self, dataset: Dataset, fraction: float, seed: int) -> Dataset:
        """
        每个分层按首次出现顺序处理，用同一条 make_rng(seed) 流做 Fisher–Yates 洗牌，
        取前 ceil(n_s × fraction) 个；输出保持原始相对顺序
        """
        if not 0 < fraction <= 1:
            raise ValueError(f"采样比例必须在 (0, 1] 内: {fraction}")

        members: Dict[str, List[int]] = {}
        for index, sample in enumerate(dataset.samples):
            members.setdefault(sample.stratum, []).append(index)

        rng = make_rng(seed)
        selected: List[int] = []
        for stratum, indices in members.items():
            shuffled = list(indices)
            for i in range(len(shuffled) - 1, 0, -1):
                j = int(rng.next_f64() * (i + 1))
                shuffled[i], shuffled[j] = shuffled[j], shuffled[i]
            take = self.selection_size(len(indices), fraction)
            selected.extend(shuffled[:take])
            logger.debug(f"分层 {stratum}: {take}/{len(indices)}")

        selected.sort()
        return Dataset(name=dataset.name, samples=[dataset.samples[i] for i in selected])

    @staticmethod
    def strip_image(sample: Sample) -> Sample:
        """no-image 基线：去掉全部图片，其余不变"""
        return sample.model_copy(update={"images": []})

    @staticmethod
    def stratum_counts(dataset: Dataset) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for sample in dataset.samples:
            counts[sample.stratum] = counts.get(sample.stratum, 0) + 1
        return counts

    @staticmethod
    def load_images(sample: Sample) -> List[np.ndarray]:
        return [ImageUtils.load_image(p) for p in sample.images]

    @staticmethod
    def _resolve(base_dir: str, image_path) -> str:
        if not isinstance(image_path, str):
            return image_path
        return image_path if os.path.isabs(image_path) else os.path.normpath(os.path.join(base_dir, image_path))

    @staticmethod
    def _first_error(error: ValidationError) -> str:
        first = error.errors()[0]
        location = ".".join(str(x) for x in first.get("loc", ()))
        return f"{location}: {first.get('msg')}" if location else str(first.get("msg"))


# 创建服务实例
dataset_service = DatasetService()

__all__ = ["DatasetService", "dataset_service"]
