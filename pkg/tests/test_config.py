"""
配置加载测试
"""
import json
import os

import pytest
import yaml

from application.common.config import RunConfig, Setting, replace_env_variables
from application.common.constants import PromptModeEnum
from application.common.exception import ConfigError
from tests.conftest import run_config_data


def test_env_substitution(monkeypatch):
    monkeypatch.setenv("VLM_TEST_URL", "http://gpu-01:9000/v1")
    monkeypatch.delenv("VLM_TEST_MISSING", raising=False)
    data = replace_env_variables({
        "url": "${VLM_TEST_URL}",
        "out": "${VLM_TEST_MISSING:runs}",
        "items": ["${VLM_TEST_MISSING}", 3],
    })
    assert data == {"url": "http://gpu-01:9000/v1", "out": "runs", "items": ["", 3]}


def test_setting_from_yaml(tmp_path, monkeypatch):
    monkeypatch.setenv("VLM_TEST_WORKERS", "6")
    path = tmp_path / "config.yaml"
    path.write_text("log:\n  level: DEBUG\ncorruption_workers: ${VLM_TEST_WORKERS:4}\n", encoding="utf-8")
    setting = Setting.from_yaml(str(path))
    assert setting.corruption_workers == 6
    assert setting.log.level == "DEBUG"
    assert setting.endpoint is None


def test_run_config_from_yaml_and_json(tmp_path, ten_sample_manifest):
    data = run_config_data("../data/manifest.jsonl", "out", prompt_mode="cot")
    yaml_path = tmp_path / "configs" / "run.yaml"
    yaml_path.parent.mkdir()
    yaml_path.write_text(yaml.safe_dump(data), encoding="utf-8")
    json_path = tmp_path / "configs" / "run.json"
    json_path.write_text(json.dumps(data), encoding="utf-8")

    defaults = Setting()
    from_yaml = RunConfig.from_file(str(yaml_path), defaults)
    from_json = RunConfig.from_file(str(json_path), defaults)
    assert from_yaml == from_json
    assert os.path.samefile(from_yaml.manifest, ten_sample_manifest)
    assert from_yaml.prompt_mode == PromptModeEnum.COT
    assert from_yaml.config_hash() == from_json.config_hash()


def test_endpoint_defaults_are_merged(tmp_path, ten_sample_manifest):
    data = run_config_data(ten_sample_manifest, "out")
    data["endpoint"] = {"max_retries": 1}
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    defaults = Setting(endpoint={"base_url": "http://default/v1", "timeout": 30})
    cfg = RunConfig.from_file(str(path), defaults)
    assert cfg.endpoint.base_url == "http://default/v1"
    assert cfg.endpoint.timeout == 30
    assert cfg.endpoint.max_retries == 1


@pytest.mark.parametrize("override", [
    {"fraction": 0},
    {"fraction": 1.5},
    {"augmentations": ["not_registered"]},
    {"generation_preset": "creative"},
    {"seeds": {"sampling_seed": -1}},
])
def test_invalid_run_config(ten_sample_manifest, override):
    with pytest.raises(ConfigError) as exc_info:
        RunConfig.from_mapping(run_config_data(ten_sample_manifest, "out", **override))
    assert exc_info.value.exit_code == 1


def test_missing_run_config(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig.from_file(str(tmp_path / "absent.yaml"))


def test_config_hash_tracks_outputs(ten_sample_manifest):
    base = RunConfig.from_mapping(run_config_data(ten_sample_manifest, "out"))
    assert base.config_hash() == RunConfig.from_mapping(run_config_data(ten_sample_manifest, "out")).config_hash()
    # 输出目录、并发与参数量不影响结果
    same = RunConfig.from_mapping(run_config_data(ten_sample_manifest, "elsewhere", corruption_workers=8, model_params=7e9))
    assert same.config_hash() == base.config_hash()
    for override in ({"fraction": 0.5}, {"prompt_mode": "cot"}, {"augmentations": ["invert"]},
                     {"seeds": {"augmentation_base_seed": 7}}, {"generation_preset": "thinking"}):
        changed = RunConfig.from_mapping(run_config_data(ten_sample_manifest, "out", **override))
        assert changed.config_hash() != base.config_hash(), override


def test_generation_presets(ten_sample_manifest):
    cfg = RunConfig.from_mapping(run_config_data(
        ten_sample_manifest, "out", generation_preset="thinking", seeds={"generation_seed": 5},
    ))
    params = cfg.resolved_generation()
    assert params.max_new_tokens == 8192
    assert params.seed == 5
    assert not params.deterministic
