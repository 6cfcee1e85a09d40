"""
结果目录：{out}/{model}/{dataset}/records.jsonl + meta.json
records.jsonl 只追加；同一 (sample_id, config) 以最后一条为准；
进程被杀时最后一行可能不完整，读取时跳过
"""
import json
import os
import re
import threading
from datetime import datetime, timezone
from typing import Dict, Iterable, List, Optional, Tuple

from pydantic import ValidationError

from application.common.exception import ConfigMismatch, MetricsInputError
from application.common.schema import EvalRecord, StoreMeta
from application.core.logger_util import logger

RECORDS_FILE = "records.jsonl"
META_FILE = "meta.json"


def safe_name(name: str) -> str:
    """模型名中的 / 等字符替换掉，作为目录名"""
    return re.sub(r"[^A-Za-z0-9._-]+", "__", name).strip("_") or "unnamed"


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class ResultStore:

    def __init__(self, directory: str):
        self.directory = directory
        self.records_path = os.path.join(directory, RECORDS_FILE)
        self.meta_path = os.path.join(directory, META_FILE)
        self._records: Dict[Tuple[str, str], EvalRecord] = {}
        self._lock = threading.Lock()
        self._handle = None
        self.meta: Optional[StoreMeta] = None

    @classmethod
    def for_run(cls, output_dir: str, model_name: str, dataset_name: str) -> "ResultStore":
        return cls(os.path.join(output_dir, safe_name(model_name), safe_name(dataset_name)))

    @classmethod
    def open_existing(cls, directory: str) -> "ResultStore":
        """报表用：读取已有目录（必须有 meta.json）"""
        store = cls(directory)
        if not os.path.isfile(store.meta_path):
            raise MetricsInputError(message=f"{directory} 不是结果目录（缺少 {META_FILE}）")
        store.meta = store._read_meta()
        store.load()
        return store

    # ---------------- meta ----------------

    def _read_meta(self) -> StoreMeta:
        with open(self.meta_path, "r", encoding="utf-8") as f:
            return StoreMeta(**json.load(f))

    def _write_meta(self, meta: StoreMeta) -> None:
        os.makedirs(self.directory, exist_ok=True)
        tmp_path = f"{self.meta_path}.tmp"
        with open(tmp_path, "w", encoding="utf-8") as f:
            json.dump(meta.model_dump(mode="json"), f, ensure_ascii=False, indent=2, sort_keys=True)
        os.replace(tmp_path, self.meta_path)

    def bind(self, meta: StoreMeta) -> None:
        """
        绑定运行配置：已有 meta 的哈希必须一致
        :raises ConfigMismatch: 与已有结果的配置哈希不同
        """
        if os.path.isfile(self.meta_path):
            existing = self._read_meta()
            if existing.config_hash != meta.config_hash:
                raise ConfigMismatch(
                    message=f"{self.directory} 已有配置哈希 {existing.config_hash[:12]}，"
                            f"当前为 {meta.config_hash[:12]}；请换输出目录或删除旧结果"
                )
            meta = meta.model_copy(update={"created_at": existing.created_at or meta.created_at})
        meta = meta.model_copy(update={"created_at": meta.created_at or now_iso(), "updated_at": now_iso()})
        self._write_meta(meta)
        self.meta = meta

    # ---------------- records ----------------

    def load(self) -> "ResultStore":
        self._records.clear()
        if not os.path.isfile(self.records_path):
            return self
        with open(self.records_path, "r", encoding="utf-8") as f:
            lines = f.read().split("\n")
        # 文件以换行结尾时最后一个元素为空串
        if lines and lines[-1] == "":
            lines.pop()
        for line_no, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                record = EvalRecord(**json.loads(line))
            except (json.JSONDecodeError, ValidationError, TypeError) as e:
                if line_no == len(lines):
                    logger.warning(f"⚠️ {self.records_path} 最后一行不完整，已忽略")
                    continue
                raise MetricsInputError(message=f"{self.records_path} 第 {line_no} 行损坏: {e}") from e
            self._records[record.key] = record
        return self

    def append(self, record: EvalRecord) -> None:
        """追加并落盘；线程安全"""
        line = json.dumps(record.model_dump(mode="json"), ensure_ascii=False, sort_keys=True)
        with self._lock:
            if self._handle is None:
                os.makedirs(self.directory, exist_ok=True)
                self._repair_tail()
                self._handle = open(self.records_path, "a", encoding="utf-8")
            self._handle.write(line + "\n")
            self._handle.flush()
            self._records[record.key] = record

    def _repair_tail(self) -> None:
        """上次中断留下的半行先截掉，避免新记录接在后面"""
        if not os.path.isfile(self.records_path):
            return
        with open(self.records_path, "rb+") as f:
            data = f.read()
            if data and not data.endswith(b"\n"):
                cut = data.rfind(b"\n") + 1
                f.seek(cut)
                f.truncate()

    def close(self) -> None:
        with self._lock:
            if self._handle is not None:
                self._handle.close()
                self._handle = None

    def compact(self, sample_ids: Iterable[str], plan: Iterable[str]) -> None:
        """按 计划顺序 × 样本顺序 重写，只保留每个键的最后一条"""
        self.close()
        sample_ids = list(sample_ids)
        ordered: List[EvalRecord] = []
        for slug in plan:
            for sample_id in sample_ids:
                record = self._records.get((sample_id, slug))
                if record is not None:
                    ordered.append(record)
        known = {r.key for r in ordered}
        ordered.extend(r for k, r in sorted(self._records.items()) if k not in known)

        tmp_path = f"{self.records_path}.tmp"
        with open(tmp_path, "w", encoding="utf-8") as f:
            for record in ordered:
                f.write(json.dumps(record.model_dump(mode="json"), ensure_ascii=False, sort_keys=True) + "\n")
        os.replace(tmp_path, self.records_path)

    # ---------------- 查询 ----------------

    def __len__(self) -> int:
        return len(self._records)

    def get(self, sample_id: str, slug: str) -> Optional[EvalRecord]:
        return self._records.get((sample_id, slug))

    def has_ok(self, sample_id: str, slug: str) -> bool:
        record = self._records.get((sample_id, slug))
        return record is not None and not record.failed

    def records(self) -> List[EvalRecord]:
        return list(self._records.values())

    def records_for(self, slug: str) -> List[EvalRecord]:
        return [r for (_, s), r in self._records.items() if s == slug]

    def configs(self) -> List[str]:
        """按 meta.plan 的顺序返回已有配置，计划外的排在后面"""
        present = list(dict.fromkeys(s for _, s in self._records))
        plan = list(self.meta.plan) if self.meta else []
        ordered = [s for s in plan if s in present]
        return ordered + [s for s in present if s not in ordered]

    def failed_count(self) -> int:
        return sum(1 for r in self._records.values() if r.failed)


__all__ = ["ResultStore", "safe_name", "now_iso", "RECORDS_FILE", "META_FILE"]
