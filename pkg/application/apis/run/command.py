import argparse
from typing import Optional

import httpx

from application.common.config import RunConfig, config
from application.common.decorators import run_async
from application.common.exception.handlers import EXIT_OK, EXIT_RUNTIME, handle_command_errors
from application.common.schema import StoreMeta
from application.core.logger_util import logger
from application.service.sweep_service import SweepService


def register(sub) -> None:
    parser = sub.add_parser("run", help="执行（或续跑）一次完整扫描")
    parser.add_argument("--config", required=True, help="运行配置文件（YAML 或 JSON）")
    parser.add_argument("--out", help="覆盖配置中的 output_dir")
    parser.add_argument("--filter", nargs="+", metavar="AUG", help="只评测这些增强（覆盖配置中的 augmentations）")
    parser.set_defaults(func=cmd_run)


def load_run_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.from_file(args.config, config)
    updates = {}
    if getattr(args, "out", None):
        updates["output_dir"] = args.out
    if getattr(args, "filter", None):
        updates["augmentations"] = list(args.filter)
    if updates:
        # 走一遍校验，--filter 里的未知增强在这里报错
        cfg = RunConfig.from_mapping({**cfg.model_dump(), **updates})
    return cfg


@run_async
async def _sweep(cfg: RunConfig, transport: Optional[httpx.AsyncBaseTransport] = None):
    return await SweepService(transport).run(cfg)


@handle_command_errors
def cmd_run(args: argparse.Namespace, transport: Optional[httpx.AsyncBaseTransport] = None) -> int:
    """重复执行即续跑：已有成功记录的 (样本, 配置) 跳过"""
    cfg = load_run_config(args)
    logger.info(f"🔥 {cfg.model_name} @ {cfg.dataset_name}，配置哈希 {cfg.config_hash()[:12]}")
    store = _sweep(cfg, transport)
    meta: StoreMeta = store.meta
    failed = store.failed_count()
    logger.info(f"结果目录: {store.directory}（{len(store)} 条记录，计划 {len(meta.plan)} 个配置）")
    return EXIT_RUNTIME if failed else EXIT_OK
