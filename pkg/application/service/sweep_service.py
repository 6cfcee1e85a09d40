"""
扫描编排：Clean + NoImage + 126 个带严重程度的配置 + 7 个二值配置
任务粒度为 (样本, 配置)；HTTP 由 asyncio worker 池并发，腐蚀计算放到线程池
"""
import asyncio
import os
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import httpx
import numpy as np

from application.common.config import RunConfig
from application.common.constants import ConfigKindEnum, RecordStatusEnum, SeverityEnum
from application.common.exception import EvalBusinessException
from application.common.schema import Dataset, EvalConfigKey, EvalRecord, Sample, StoreMeta
from application.common.utils import ImageUtils
from application.core.logger_util import logger
from application.service.corruption import augmentation_registry, corruption_service
from application.service.dataset_service import dataset_service
from application.service.model_client_service import ModelClient, build_prompt, extract_answer
from application.service.result_store_service import ResultStore, now_iso, safe_name

Task = Tuple[int, Sample, EvalConfigKey]


def plan_sweep(augmentations: Optional[List[str]] = None) -> List[EvalConfigKey]:
    """
    Clean、NoImage，然后按目录顺序 × 严重程度顺序
    默认（不过滤）共 135 个
    """
    selected = None if augmentations is None else set(augmentations)
    keys = [EvalConfigKey.clean(), EvalConfigKey.no_image()]
    for spec in augmentation_registry:
        if selected is not None and spec.id not in selected:
            continue
        if spec.is_binary:
            keys.append(EvalConfigKey.corrupted(spec.id))
        else:
            keys.extend(EvalConfigKey.corrupted(spec.id, severity) for severity in SeverityEnum.ordered())
    return keys


def cache_path(output_dir: str, key: EvalConfigKey, sample_id: str, image_index: int) -> str:
    """{out}/cache/{aug}/{severity|binary}/{sample_id}[_j].png"""
    level = key.severity.value if key.severity is not None else "binary"
    suffix = f"_{image_index}" if image_index > 0 else ""
    return os.path.join(output_dir, "cache", key.aug_id, level, f"{safe_name(sample_id)}{suffix}.png")


class SweepService:

    def __init__(self, transport: Optional[httpx.AsyncBaseTransport] = None):
        # 测试时注入 httpx.MockTransport
        self._transport = transport

    def prepare(self, cfg: RunConfig) -> Tuple[Dataset, List[EvalConfigKey], ResultStore]:
        dataset = dataset_service.load_manifest(cfg.manifest, name=cfg.dataset_name, check_images=cfg.check_images)
        sampled = dataset_service.stratified_sample(dataset, cfg.fraction, cfg.seeds.sampling_seed)
        logger.info(f"分层采样 {len(sampled)}/{len(dataset)} (fraction={cfg.fraction}, seed={cfg.seeds.sampling_seed})")
        plan = plan_sweep(cfg.augmentations)

        store = ResultStore.for_run(cfg.output_dir, cfg.model_name, cfg.dataset_name)
        store.bind(StoreMeta(
            config_hash=cfg.config_hash(),
            model_name=cfg.model_name,
            dataset_name=cfg.dataset_name,
            prompt_mode=cfg.prompt_mode.value,
            sample_count=len(sampled),
            plan=[k.slug for k in plan],
            params=cfg.model_params,
            family=cfg.model_family,
        ))
        store.load()
        return sampled, plan, store

    async def run(self, cfg: RunConfig) -> ResultStore:
        """
        完整扫描，可重复调用：已有成功记录的键跳过，失败记录重跑
        :raises ConfigMismatch: 输出目录里是另一份配置的结果
        """
        dataset, plan, store = self.prepare(cfg)
        tasks: List[Task] = [
            (index, sample, key)
            for key in plan
            for index, sample in enumerate(dataset.samples)
            if not store.has_ok(sample.id, key.slug)
        ]
        total = len(dataset) * len(plan)
        logger.info(f"🔥 计划 {len(plan)} 个配置 × {len(dataset)} 个样本 = {total}，待执行 {len(tasks)}")

        if tasks:
            await self._execute(cfg, tasks, store)

        store.compact([s.id for s in dataset.samples], [k.slug for k in plan])
        failed = store.failed_count()
        if failed:
            logger.warning(f"⚠️ 扫描结束，仍有 {failed} 条失败记录，重新执行 run 即可续跑")
        else:
            logger.info(f"✅ 扫描完成: {len(store)}/{total} 条记录 → {store.directory}")
        return store

    async def resume(self, cfg: RunConfig) -> ResultStore:
        """只补齐缺失或失败的键"""
        store = ResultStore.for_run(cfg.output_dir, cfg.model_name, cfg.dataset_name)
        if not os.path.isfile(store.meta_path):
            logger.warning(f"⚠️ {store.directory} 没有已有结果，按全新扫描执行")
        return await self.run(cfg)

    async def _execute(self, cfg: RunConfig, tasks: List[Task], store: ResultStore) -> None:
        queue: asyncio.Queue = asyncio.Queue()
        for task in tasks:
            queue.put_nowait(task)
        remaining = {}
        for _, _, key in tasks:
            remaining[key.slug] = remaining.get(key.slug, 0) + 1
        params = cfg.resolved_generation()

        async with ModelClient(cfg.endpoint, cfg.model_name, transport=self._transport) as client:
            with ThreadPoolExecutor(max_workers=cfg.corruption_workers) as pool:

                async def worker():
                    while True:
                        try:
                            index, sample, key = queue.get_nowait()
                        except asyncio.QueueEmpty:
                            return
                        record = await self._evaluate(cfg, client, pool, params, index, sample, key)
                        store.append(record)
                        remaining[key.slug] -= 1
                        if remaining[key.slug] == 0:
                            logger.info(f"配置 {key.slug} 完成")

                workers = [asyncio.create_task(worker()) for _ in range(cfg.endpoint.max_concurrent)]
                try:
                    await asyncio.gather(*workers)
                finally:
                    for w in workers:
                        w.cancel()
                    store.close()

    async def _evaluate(self, cfg, client, pool, params, index, sample, key) -> EvalRecord:
        base = dict(sample_id=sample.id, config=key.slug, answer=sample.answer, stratum=sample.stratum)
        try:
            loop = asyncio.get_running_loop()
            prompt = await loop.run_in_executor(pool, self._prompt_for, cfg, index, sample, key)
            result = await client.query(prompt, params)
        except EvalBusinessException as e:
            logger.warning(f"⚠️ {sample.id} @ {key.slug} 失败: {e.message}")
            return EvalRecord(**base, status=RecordStatusEnum.FAILED, error=e.message, timestamp=now_iso())
        except Exception as e:
            # 坏图、异常响应等单条错误只记失败，不中断整个扫描
            error = f"{type(e).__name__}: {e}"
            logger.exception(f"❌ {sample.id} @ {key.slug} 失败: {error}")
            return EvalRecord(**base, status=RecordStatusEnum.FAILED, error=error, timestamp=now_iso())

        extracted = extract_answer(result.raw_text, cfg.prompt_mode, sample.valid_letters)
        return EvalRecord(
            **base,
            raw_response=result.raw_text,
            extracted=extracted,
            correct=extracted is not None and extracted == sample.answer,
            unparsable=extracted is None,
            latency=result.latency,
            token_usage=result.token_usage,
            timestamp=now_iso(),
        )

    def _prompt_for(self, cfg: RunConfig, index: int, sample: Sample, key: EvalConfigKey) -> dict:
        """在线程池中运行：读图、腐蚀、可选写缓存、编码成请求体"""
        if key.kind == ConfigKindEnum.NO_IMAGE:
            return build_prompt(dataset_service.strip_image(sample), cfg.prompt_mode, include_image=False)

        images: List[np.ndarray] = dataset_service.load_images(sample)
        if key.kind == ConfigKindEnum.CORRUPTED:
            corruption = corruption_service.config_for(key.aug_id, key.severity, sample_index=index)
            images = corruption_service.apply_many(images, corruption, cfg.seeds)
            if cfg.cache_images:
                for j, image in enumerate(images):
                    ImageUtils.save_png(image, cache_path(cfg.output_dir, key, sample.id, j))
        return build_prompt(sample, cfg.prompt_mode, include_image=True, images=images)


# 创建服务实例
sweep_service = SweepService()

__all__ = ["SweepService", "sweep_service", "plan_sweep", "cache_path"]
