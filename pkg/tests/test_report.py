"""
报表生成测试：外部准确率表、字节一致的重复生成、已发表数值核对
"""
import filecmp
import os

import pytest
import yaml

from application.common.exception import MetricsInputError
from application.common.schema import AccuracyTable
from application.common.utils.FormatUtils import fmt_key_drop, fmt_number
from application.service.metrics_service import default_corrupted_slugs, metrics_service
from application.service.report_service import report_service


def _table_row(model, acc_clean, acc_noimage, value, params, overrides=None):
    acc = {slug: value for slug in default_corrupted_slugs()}
    acc.update(overrides or {})
    return {
        "model": model,
        "dataset": "synthetic",
        "acc_clean": acc_clean,
        "acc_noimage": acc_noimage,
        "acc": acc,
        "params": params,
        "family": "demo",
    }


@pytest.fixture
def tables_doc(tmp_path):
    path = tmp_path / "tables.yaml"
    rows = [
        _table_row("small", 60.0, 30.0, 55.0, 2e9, {"rotate:high": 40.0, "invert": 61.0}),
        _table_row("large", 80.0, 35.0, 78.0, 8e9),
    ]
    path.write_text(yaml.safe_dump({"tables": rows}), encoding="utf-8")
    return str(path)


def _bundle(tables_doc, **kwargs):
    tables, stores = report_service.load_inputs(table_docs=[tables_doc])
    return report_service.build(tables, stores, **kwargs)


@pytest.mark.parametrize("value, digits, expected", [
    (9.775, 2, "9.78"),
    (1300 / 133, 1, "9.8"),
    (0.05, 1, "0.1"),
    (-0.04, 1, "0.0"),
    (-2.25, 1, "-2.3"),
    (None, 1, "-"),
])
def test_fmt_number(value, digits, expected):
    assert fmt_number(value, digits) == expected


def test_fmt_key_drop():
    assert fmt_key_drop("upsample:high", 26.25) == "upsample (high, 26.3)"
    assert fmt_key_drop("invert", 3.0) == "invert (3.0)"
    assert fmt_key_drop(None, None) == "-"


def test_report_from_tables(tables_doc):
    bundle = _bundle(tables_doc)
    assert bundle.references == {"synthetic": "small"}

    mce_rows = {row[1]: row for row in bundle.table("mce").rows}
    assert mce_rows["small"][2:] == ["100.0", "ref"]
    assert float(mce_rows["large"][2]) < 100

    summary = bundle.table("summary")
    assert [row[1] for row in summary.rows] == ["small", "large", "Mean"]
    assert summary.rows[0][5] == "30.0"  # VG
    assert summary.rows[0][6] == "rotate (high, 20.0)"

    tiers = {row[1]: row for row in bundle.table("tiers").rows}
    assert {name: row[-1] for name, row in tiers.items()} == {"Low": "84", "Mid": "84", "High": "84", "Binary": "14"}
    assert tiers["High"][5] == "1"

    tail = {row[1]: row for row in bundle.table("tail_risk").rows}
    assert tail["small"][2:] == ["1", "1", "100.0"]
    assert tail["large"][4] == "-"

    binary = {row[1]: row for row in bundle.table("binary").rows}
    # small 在 invert 上 Δ = −1，与 large 的 2 平均为 0.5
    assert binary["invert"][2:4] == ["0.5", "benign"]

    (scaling,) = bundle.table("scaling").rows
    assert scaling[1] == "demo" and scaling[3] == "1.00" and scaling[4] == "2"


def test_reference_override_per_dataset(tables_doc):
    assert _bundle(tables_doc, reference="large").references == {"synthetic": "large"}
    # 不在该数据集中的参考模型退回默认
    assert _bundle(tables_doc, reference="elsewhere").references == {"synthetic": "small"}


def test_duplicate_inputs(tables_doc):
    with pytest.raises(MetricsInputError):
        report_service.load_inputs(table_docs=[tables_doc, tables_doc])


def test_model_params_override(tmp_path, tables_doc):
    params_path = tmp_path / "params.yaml"
    params_path.write_text("small: 1.0e9\n", encoding="utf-8")
    params = report_service.load_model_params(str(params_path))
    tables, _ = report_service.load_inputs(table_docs=[tables_doc], model_params=params)
    assert {t.model: t.params for t in tables} == {"small": 1e9, "large": 8e9}


def test_regeneration_is_byte_identical(tmp_path, tables_doc):
    first, second = tmp_path / "first", tmp_path / "second"
    report_service.write(_bundle(tables_doc), str(first), ["csv", "md", "svg"])
    report_service.write(_bundle(tables_doc), str(second), ["csv", "md", "svg"])
    names = sorted(os.listdir(first))
    assert names == sorted(os.listdir(second))
    assert {"summary.csv", "summary.md", "configs.csv", "configs.md", "top_k.svg", "metrics.json"} <= set(names)
    match, mismatch, errors = filecmp.cmpfiles(first, second, names, shallow=False)
    assert mismatch == [] and errors == []


def test_published_checks_pass():
    (checks, noimage), ok = report_service.published_checks()
    assert ok
    rows = {row[0]: row for row in checks.rows}
    assert rows["mmbench mean VG"][1:] == ["46.7", "46.7", "OK"]
    assert rows["mmmu_pro mean VG"][1:] == ["11.9", "11.9", "OK"]
    assert rows["severe-failure 13/133"][2] == "9.8"
    assert rows["glass_blur monotonicity violation"][3] == "OK"
    assert rows["glass_blur spearman rho"][2] == "-1.00"
    assert rows["mmbench Qwen3-VL scaling n"][3] == "OK"
    assert rows["mmbench Qwen3-VL scaling slope"][1:] == ["-0.38", "-0.40", "OK (rounding)"]
    assert rows["mmbench Qwen3-VL scaling R2"][1:] == ["0.17", "0.17", "OK"]
    assert rows["mmmu_pro Qwen3-VL scaling R2"][2] == "1.00"
    assert all(row[3].startswith("OK") for row in checks.rows)
    assert len(noimage) == 18


def test_published_checks_detect_mismatch(tmp_path):
    data = report_service.load_published_tables()
    data["published"]["mean_vg"]["mmbench"] = 50.0
    path = tmp_path / "tables.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    (checks, _), ok = report_service.published_checks(str(path))
    assert not ok
    assert {row[0]: row[3] for row in checks.rows}["mmbench mean VG"] == "MISMATCH"


def test_published_scaling_is_refit_from_summary_rows(tmp_path):
    data = report_service.load_published_tables()
    for row in data["summary"]["mmbench"]:
        if row["model"] == "Molmo2-8B":
            row["mrce"] = 9.0
    path = tmp_path / "tables.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    (checks, _), ok = report_service.published_checks(str(path))
    status = {row[0]: row[3] for row in checks.rows}
    assert not ok
    assert status["mmbench Molmo2 scaling slope"] == "MISMATCH"
    assert status["mmbench Molmo2 scaling R2"] == "OK"
    assert status["mmmu_pro Molmo2 scaling slope"].startswith("OK")


def test_config_table_lists_unparsable_counts(tmp_path):
    table = AccuracyTable(
        model="m", dataset="d", acc_clean=80.0, acc_noimage=40.0, acc={"glass_blur:low": 70.0},
        unparsable={"clean": 1, "no_image": 3, "glass_blur:low": 2},
    )
    report = metrics_service.compute_report(table, allow_partial=True)
    configs = report_service.config_table([report])
    assert configs.rows == [
        ["d", "m", "clean", "-", "1"],
        ["d", "m", "no_image", "-", "3"],
        ["d", "m", "glass_blur:low", "10.0", "2"],
    ]
    configs.write(str(tmp_path), ["csv", "md"])
    assert (tmp_path / "configs.csv").read_text(encoding="utf-8").splitlines()[0] == "Dataset,Model,Config,Drop,Unparsable"
    assert "| d | m | glass_blur:low | 10.0 | 2 |" in (tmp_path / "configs.md").read_text(encoding="utf-8")
