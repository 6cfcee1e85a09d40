import hashlib
import json
import os
import re
from pathlib import Path
from typing import List, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from application.common.constants import PromptModeEnum

# ============================
# 🔥 自动替换 ${ENV_VAR} 的函数
# ============================

env_pattern = re.compile(r"\$\{([^}]+)\}")


def replace_env_variables(obj):
    """
    递归替换 YAML 中的 ${VAR} 或 ${VAR:default}
    """
    if isinstance(obj, dict):
        return {k: replace_env_variables(v) for k, v in obj.items()}

    elif isinstance(obj, list):
        return [replace_env_variables(item) for item in obj]

    elif isinstance(obj, str):
        matches = env_pattern.findall(obj)
        if not matches:
            return obj

        new_value = obj
        for match in matches:
            if ":" in match:
                env_name, default = match.split(":", 1)
                env_value = os.getenv(env_name, default)
            else:
                env_value = os.getenv(match, "")

            new_value = new_value.replace("${" + match + "}", env_value)

        return new_value

    return obj


def _read_yaml(path: str) -> dict:
    # YAML 是 JSON 的超集，JSON 格式的 run 配置同样可以直接读取
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        from application.common.exception import ConfigError
        raise ConfigError(message=f"配置文件 {path} 顶层必须是对象")
    return replace_env_variables(data)


# ============================
#        配置模型
# ============================

class LogConfig(BaseModel):
    level: str = "INFO"
    file: str = ""


class EndpointConfig(BaseModel):
    """OpenAI 兼容推理端点"""
    base_url: str
    model_name: str = ""
    api_key_env: str = "VLM_API_KEY"  # 存放 bearer token 的环境变量名
    timeout: float = Field(default=120.0, gt=0)
    max_retries: int = Field(default=3, ge=0)
    max_concurrent: int = Field(default=8, ge=1)
    backoff_base: float = Field(default=1.0, ge=0)

    def api_key(self) -> str:
        return os.getenv(self.api_key_env, "")


class SeedScheme(BaseModel):
    """随机种子方案"""
    sampling_seed: int = Field(default=42, ge=0, lt=2 ** 32)
    augmentation_base_seed: int = Field(default=1234, ge=0, lt=2 ** 32)
    generation_seed: int = Field(default=42, ge=0, lt=2 ** 32)


class GenerationParams(BaseModel):
    max_new_tokens: int = Field(default=2048, ge=1)
    temperature: Optional[float] = None
    top_p: Optional[float] = None
    top_k: Optional[int] = None
    seed: Optional[int] = None
    deterministic: bool = True

    @classmethod
    def default(cls) -> "GenerationParams":
        return cls()

    @classmethod
    def thinking(cls, generation_seed: int = 42) -> "GenerationParams":
        return cls(
            max_new_tokens=8192,
            temperature=0.6,
            top_p=0.95,
            top_k=20,
            seed=generation_seed,
            deterministic=False,
        )


class Setting(BaseModel):
    """全局应用配置（config.yaml / config-{ENV}.yaml）"""
    project_name: str = "vlm-robustness-harness"
    log: LogConfig = LogConfig()
    output_dir: str = "runs"
    corruption_workers: int = Field(default=4, ge=1)
    endpoint: Optional[EndpointConfig] = None

    @field_validator("corruption_workers", mode="before")
    @classmethod
    def workers_to_int(cls, v):
        return int(v)

    @classmethod
    def from_yaml(cls, path: str) -> "Setting":
        return cls(**_read_yaml(path))


class RunConfig(BaseModel):
    """单次 sweep 的运行配置"""
    manifest: str
    dataset_name: str
    model_name: str
    fraction: float = Field(default=0.2, gt=0, le=1)
    seeds: SeedScheme = SeedScheme()
    endpoint: EndpointConfig
    prompt_mode: PromptModeEnum = PromptModeEnum.DIRECT
    generation_preset: str = "default"
    generation: Optional[GenerationParams] = None
    augmentations: Optional[List[str]] = None  # None 表示全部 49 种
    output_dir: str = "runs"
    cache_images: bool = False
    corruption_workers: int = Field(default=4, ge=1)
    check_images: bool = True
    model_params: Optional[float] = Field(default=None, gt=0)  # 参数量，只用于缩放报表
    model_family: Optional[str] = None

    @field_validator("generation_preset")
    @classmethod
    def preset_known(cls, v: str) -> str:
        if v not in ("default", "thinking"):
            raise ValueError(f"未知的生成参数预设: {v}")
        return v

    @field_validator("augmentations")
    @classmethod
    def filter_in_registry(cls, v: Optional[List[str]]) -> Optional[List[str]]:
        if v is None:
            return v
        from application.service.corruption.registry import augmentation_registry
        unknown = [aug_id for aug_id in v if not augmentation_registry.contains(aug_id)]
        if unknown:
            raise ValueError(f"过滤条件包含未注册的增强: {', '.join(unknown)}")
        return v

    def resolved_generation(self) -> GenerationParams:
        if self.generation is not None:
            return self.generation
        if self.generation_preset == "thinking":
            return GenerationParams.thinking(self.seeds.generation_seed)
        return GenerationParams.default()

    def manifest_digest(self) -> str:
        digest = hashlib.sha256()
        with open(self.manifest, "rb") as f:
            for chunk in iter(lambda: f.read(1 << 20), b""):
                digest.update(chunk)
        return digest.hexdigest()

    def config_hash(self) -> str:
        """
        覆盖所有影响输出的字段：manifest 摘要、种子、采样比例、过滤条件、
        提示模式、生成参数、模型名
        """
        payload = {
            "manifest_sha256": self.manifest_digest(),
            "dataset_name": self.dataset_name,
            "model_name": self.model_name,
            "endpoint_model": self.endpoint.model_name or self.model_name,
            "fraction": self.fraction,
            "seeds": self.seeds.model_dump(),
            "prompt_mode": self.prompt_mode.value,
            "generation": self.resolved_generation().model_dump(),
            "augmentations": sorted(self.augmentations) if self.augmentations is not None else None,
        }
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @classmethod
    def from_file(cls, path: str, defaults: Optional[Setting] = None) -> "RunConfig":
        from application.common.exception import ConfigError

        if not os.path.exists(path):
            raise ConfigError(message=f"运行配置 {path} 未找到")
        data = _read_yaml(path)
        defaults = defaults or config
        data.setdefault("output_dir", defaults.output_dir)
        data.setdefault("corruption_workers", defaults.corruption_workers)
        if defaults.endpoint is not None:
            endpoint = defaults.endpoint.model_dump()
            endpoint.update(data.get("endpoint") or {})
            data["endpoint"] = endpoint

        # manifest 相对路径以配置文件所在目录为基准
        manifest = data.get("manifest")
        if isinstance(manifest, str) and not os.path.isabs(manifest):
            data["manifest"] = str(Path(path).resolve().parent / manifest)
        return cls.from_mapping(data)

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        from application.common.exception import ConfigError

        try:
            return cls(**data)
        except ValidationError as e:
            raise ConfigError(message=f"运行配置校验失败: {e}") from e


# ============================
#        加载配置文件
# ============================

def _load_config() -> Setting:
    env = os.getenv("ENV")  # dev, prod, etc
    base_filename = "config.yaml"
    root_dir = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    filename = f"config-{env}.yaml" if env else base_filename

    if not os.path.isabs(filename):
        filename = os.path.join(root_dir, filename)

    if not os.path.exists(filename):
        fallback_path = os.path.join(root_dir, base_filename)
        if env and os.path.exists(fallback_path):
            filename = fallback_path
        else:
            # 以库方式安装时没有配置文件，使用默认值
            return Setting()

    return Setting.from_yaml(filename)


# ============================
#        全局 config 实例
# ============================

config: Setting = _load_config()

__all__ = ["config", "Setting", "RunConfig", "EndpointConfig", "SeedScheme", "GenerationParams", "LogConfig"]
