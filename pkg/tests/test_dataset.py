"""
manifest 读取与分层采样测试
"""
import json
import os

import pytest

from application.common.exception import ManifestParseError, ManifestValidationError
from application.service.dataset_service import dataset_service

STRATUM_SIZES = [37, 63, 150, 50, 100, 120, 80, 200, 90, 110]


def _row(sample_id, stratum="general", answer="A", images=None):
    return {
        "id": sample_id,
        "images": images if images is not None else [],
        "question": "What is shown?",
        "options": [{"letter": "A", "text": "cat"}, {"letter": "B", "text": "dog"}],
        "answer": answer,
        "stratum": stratum,
    }


def _write_lines(path, lines):
    with open(path, "w", encoding="utf-8") as f:
        for line in lines:
            f.write((line if isinstance(line, str) else json.dumps(line)) + "\n")
    return str(path)


@pytest.fixture
def large_manifest(tmp_path):
    """1000 条样本、10 个分层，交错排列"""
    rows = []
    remaining = list(STRATUM_SIZES)
    index = 0
    while any(remaining):
        for k, left in enumerate(remaining):
            if left:
                rows.append(_row(f"q{index:04d}", stratum=f"stratum_{k}"))
                remaining[k] -= 1
                index += 1
    return _write_lines(tmp_path / "large.jsonl", rows)


def test_load_resolves_relative_images(ten_sample_manifest):
    dataset = dataset_service.load_manifest(ten_sample_manifest)
    assert dataset.name == "manifest"
    assert len(dataset) == 10
    first = dataset.samples[0]
    assert os.path.isabs(first.images[0])
    assert first.images[0] == os.path.join(os.path.dirname(ten_sample_manifest), "s0.png")
    assert first.valid_letters == ["A", "B", "C", "D"]


def test_blank_lines_are_skipped(tmp_path):
    path = _write_lines(tmp_path / "m.jsonl", [_row("a"), "", "   ", _row("b")])
    dataset = dataset_service.load_manifest(path, name="blank", check_images=False)
    assert [s.id for s in dataset.samples] == ["a", "b"]
    assert dataset.name == "blank"


def test_parse_error_reports_line(tmp_path):
    path = _write_lines(tmp_path / "m.jsonl", [_row("a"), "{not json"])
    with pytest.raises(ManifestParseError) as exc_info:
        dataset_service.load_manifest(path, check_images=False)
    assert exc_info.value.line == 2
    assert exc_info.value.exit_code == 1


def test_answer_outside_options(tmp_path):
    path = _write_lines(tmp_path / "m.jsonl", [_row("a", answer="C")])
    with pytest.raises(ManifestValidationError) as exc_info:
        dataset_service.load_manifest(path, check_images=False)
    assert exc_info.value.line == 1


def test_duplicate_id(tmp_path):
    path = _write_lines(tmp_path / "m.jsonl", [_row("a"), _row("b"), _row("a")])
    with pytest.raises(ManifestValidationError) as exc_info:
        dataset_service.load_manifest(path, check_images=False)
    assert exc_info.value.line == 3
    assert "第 1 行" in exc_info.value.message


def test_missing_image(tmp_path):
    path = _write_lines(tmp_path / "m.jsonl", [_row("a", images=["nowhere.png"])])
    with pytest.raises(ManifestValidationError):
        dataset_service.load_manifest(path)
    # 关闭图片检查时可以读取
    assert len(dataset_service.load_manifest(path, check_images=False)) == 1


@pytest.mark.parametrize("size, fraction, expected", [
    (37, 0.2, 8),
    (50, 0.2, 10),
    (1, 0.2, 1),
    (7, 1.0, 7),
    (10, 0.3, 3),
])
def test_selection_size(size, fraction, expected):
    assert dataset_service.selection_size(size, fraction) == expected


def test_stratified_sample_counts(large_manifest):
    dataset = dataset_service.load_manifest(large_manifest, check_images=False)
    subset = dataset_service.stratified_sample(dataset, 0.2, seed=42)
    counts = dataset_service.stratum_counts(subset)
    for k, size in enumerate(STRATUM_SIZES):
        assert counts[f"stratum_{k}"] == dataset_service.selection_size(size, 0.2)
    assert len(subset) == 201


def test_stratified_sample_is_deterministic_and_ordered(large_manifest):
    dataset = dataset_service.load_manifest(large_manifest, check_images=False)
    a = dataset_service.stratified_sample(dataset, 0.2, seed=42)
    b = dataset_service.stratified_sample(dataset, 0.2, seed=42)
    assert [s.id for s in a.samples] == [s.id for s in b.samples]

    order = {s.id: i for i, s in enumerate(dataset.samples)}
    positions = [order[s.id] for s in a.samples]
    assert positions == sorted(positions)

    other = dataset_service.stratified_sample(dataset, 0.2, seed=43)
    assert [s.id for s in other.samples] != [s.id for s in a.samples]


def test_full_fraction_keeps_everything(large_manifest):
    dataset = dataset_service.load_manifest(large_manifest, check_images=False)
    subset = dataset_service.stratified_sample(dataset, 1.0, seed=42)
    assert [s.id for s in subset.samples] == [s.id for s in dataset.samples]


@pytest.mark.parametrize("fraction", [0, -0.1, 1.5])
def test_bad_fraction(large_manifest, fraction):
    dataset = dataset_service.load_manifest(large_manifest, check_images=False)
    with pytest.raises(ValueError):
        dataset_service.stratified_sample(dataset, fraction, seed=42)


def test_strip_image(ten_sample_manifest):
    sample = dataset_service.load_manifest(ten_sample_manifest).samples[0]
    stripped = dataset_service.strip_image(sample)
    assert stripped.images == []
    assert stripped.question == sample.question
    assert stripped.answer == sample.answer
    assert sample.images


def test_write_manifest_reloads(tmp_path, ten_sample_manifest):
    dataset = dataset_service.load_manifest(ten_sample_manifest)
    subset = dataset_service.stratified_sample(dataset, 0.5, seed=1)
    out = dataset_service.write_manifest(subset, str(tmp_path / "out" / "subset.jsonl"))
    reloaded = dataset_service.load_manifest(out, name=subset.name)
    assert reloaded.samples == subset.samples
