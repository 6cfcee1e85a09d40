import time
from contextlib import contextmanager
from typing import Optional

from application.common.config import config
from .logger_util import Log, logger


@contextmanager
def lifespan(command: str, log_level: Optional[str] = None):
    """命令生命周期：按配置初始化日志，结束时输出耗时"""
    _start(log_level)
    started = time.perf_counter()
    logger.debug(f"命令 {command} 开始")
    try:
        yield
    finally:
        _shutdown(command, time.perf_counter() - started)


def _start(log_level: Optional[str]) -> None:
    """初始化"""
    Log.configure(log_level or config.log.level, config.log.file)


def _shutdown(command: str, elapsed: float) -> None:
    """关闭"""
    logger.debug(f"命令 {command} 结束，耗时 {elapsed:.2f}s")


__all__ = ["lifespan"]
