"""
公共夹具：合成图片、合成 manifest、模拟推理端点
"""
import base64
import json
import os
import sys

import httpx
import numpy as np
import pytest

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from application.common.utils import ImageUtils  # noqa: E402


def random_image(seed: int, height: int = 48, width: int = 64, low: int = 0, high: int = 256) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(low, high, size=(height, width, 3), dtype=np.uint8)


@pytest.fixture
def image() -> np.ndarray:
    return random_image(7)


@pytest.fixture
def image_factory():
    return random_image


def write_manifest(directory, rows, images=None) -> str:
    """
    rows: [(id, stratum, answer, letters)]；每个样本写一张 PNG
    images: 可选 id → 图片
    """
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, "manifest.jsonl")
    with open(path, "w", encoding="utf-8") as f:
        for index, (sample_id, stratum, answer, letters) in enumerate(rows):
            image = (images or {}).get(sample_id)
            if image is None:
                # 取值避开 0 与 255，autocontrast / solarize 等都会改变像素
                image = random_image(100 + index, 64, 64, 30, 231)
            image_name = f"{sample_id}.png"
            ImageUtils.save_png(image, os.path.join(directory, image_name))
            f.write(json.dumps({
                "id": sample_id,
                "images": [image_name],
                "question": f"Question {sample_id}?",
                "options": [{"letter": x, "text": f"option {x}"} for x in letters],
                "answer": answer,
                "stratum": stratum,
            }) + "\n")
    return path


@pytest.fixture
def manifest_factory(tmp_path):
    def factory(rows, images=None, name="data"):
        return write_manifest(str(tmp_path / name), rows, images)

    return factory


@pytest.fixture
def ten_sample_manifest(manifest_factory):
    """10 个样本，其中 4 个正确答案为 A"""
    answers = ["A", "B", "C", "A", "D", "B", "A", "C", "A", "D"]
    rows = [(f"s{i}", f"cat{i % 3}", answer, "ABCD") for i, answer in enumerate(answers)]
    return manifest_factory(rows)


def chat_response(text: str) -> httpx.Response:
    return httpx.Response(200, json={
        "choices": [{"message": {"role": "assistant", "content": text}}],
        "usage": {"prompt_tokens": 10, "completion_tokens": 1},
    })


class GroundTruthModel:
    """
    模拟模型：请求中的图片与样本原图一致时回答正确答案，其余（腐蚀、无图）一律回答 A
    """

    def __init__(self, manifest_path: str):
        self.answers = {}
        base = os.path.dirname(manifest_path)
        with open(manifest_path, "r", encoding="utf-8") as f:
            for line in f:
                row = json.loads(line)
                data = ImageUtils.png_bytes(ImageUtils.load_image(os.path.join(base, row["images"][0])))
                self.answers[base64.b64encode(data).decode("ascii")] = row["answer"]
        self.requests = 0

    def __call__(self, request: httpx.Request) -> httpx.Response:
        self.requests += 1
        body = json.loads(request.content)
        for part in body["messages"][0]["content"]:
            if part["type"] == "image_url":
                encoded = part["image_url"]["url"].split(",", 1)[1]
                if encoded in self.answers:
                    return chat_response(self.answers[encoded])
        return chat_response("A")


@pytest.fixture
def ground_truth_model():
    return GroundTruthModel


def run_config_data(manifest: str, out_dir: str, **overrides) -> dict:
    data = {
        "manifest": manifest,
        "dataset_name": "synthetic",
        "model_name": "mock/model",
        "fraction": 1.0,
        "output_dir": out_dir,
        "corruption_workers": 2,
        "endpoint": {"base_url": "http://mock.local/v1", "max_retries": 0, "backoff_base": 0, "max_concurrent": 4},
    }
    data.update(overrides)
    return data
