"""
结果目录测试
"""
import json

import pytest

from application.common.exception import ConfigMismatch, MetricsInputError
from application.common.schema import EvalRecord, StoreMeta
from application.service.result_store_service import ResultStore, safe_name


def _meta(config_hash="abc123"):
    return StoreMeta(
        config_hash=config_hash,
        model_name="org/model-7b",
        dataset_name="synthetic",
        prompt_mode="direct",
        sample_count=2,
        plan=["clean", "no_image", "invert"],
    )


def _record(sample_id, config, correct=True, status="ok"):
    return EvalRecord(
        sample_id=sample_id, config=config, answer="A",
        extracted="A" if correct else "B", correct=correct, status=status,
    )


@pytest.fixture
def store(tmp_path):
    store = ResultStore.for_run(str(tmp_path), "org/model-7b", "synthetic")
    store.bind(_meta())
    return store


def test_safe_name():
    assert safe_name("org/model-7b") == "org__model-7b"
    assert safe_name("Qwen3-VL 8B") == "Qwen3-VL__8B"
    assert safe_name("///") == "unnamed"


def test_bind_rejects_other_hash(store):
    with pytest.raises(ConfigMismatch) as exc_info:
        ResultStore(store.directory).bind(_meta("different"))
    assert exc_info.value.exit_code == 1


def test_bind_keeps_created_at(store):
    created = store.meta.created_at
    again = ResultStore(store.directory)
    again.bind(_meta())
    assert again.meta.created_at == created


def test_last_record_wins(store):
    store.append(_record("s0", "clean", correct=False, status="failed"))
    store.append(_record("s0", "clean", correct=True))
    store.close()
    reloaded = ResultStore.open_existing(store.directory)
    assert len(reloaded) == 1
    assert reloaded.has_ok("s0", "clean")
    assert reloaded.failed_count() == 0


def test_truncated_tail_is_ignored_and_repaired(store):
    store.append(_record("s0", "clean"))
    store.close()
    with open(store.records_path, "a", encoding="utf-8") as f:
        f.write('{"sample_id": "s1", "conf')

    reloaded = ResultStore.open_existing(store.directory)
    assert len(reloaded) == 1

    reloaded.append(_record("s1", "clean"))
    reloaded.close()
    with open(store.records_path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    assert [json.loads(line)["sample_id"] for line in lines] == ["s0", "s1"]


def test_corrupt_middle_line_raises(store):
    store.append(_record("s0", "clean"))
    store.close()
    with open(store.records_path, "a", encoding="utf-8") as f:
        f.write("garbage\n")
        f.write(json.dumps(_record("s1", "clean").model_dump(mode="json")) + "\n")
    with pytest.raises(MetricsInputError):
        ResultStore.open_existing(store.directory)


def test_compact_orders_by_plan(store):
    store.append(_record("s1", "invert"))
    store.append(_record("s0", "clean"))
    store.append(_record("s1", "clean"))
    store.append(_record("s0", "invert"))
    store.compact(["s0", "s1"], store.meta.plan)
    with open(store.records_path, "r", encoding="utf-8") as f:
        keys = [(row["config"], row["sample_id"]) for row in map(json.loads, f)]
    assert keys == [("clean", "s0"), ("clean", "s1"), ("invert", "s0"), ("invert", "s1")]
    assert store.configs() == ["clean", "invert"]


def test_open_without_meta(tmp_path):
    with pytest.raises(MetricsInputError):
        ResultStore.open_existing(str(tmp_path))
