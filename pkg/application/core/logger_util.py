# logger_util.py
import logging
import os
import sys
from logging import Logger

from colorama import Fore, Style, init as colorama_init

colorama_init(autoreset=True)


class ColorFormatter(logging.Formatter):
    """
    彩色日志格式化器：
    时间 - [级别缩写] - 模块名:行号 : 日志内容
    DEBUG 级别额外在上一行输出完整文件路径
    """
    COLORS = {
        logging.DEBUG: Fore.BLUE,
        logging.INFO: Fore.GREEN,
        logging.WARNING: Fore.YELLOW,
        logging.ERROR: Fore.RED,
        logging.CRITICAL: Fore.MAGENTA,
    }

    LEVEL_ABBR = {
        logging.DEBUG: "D",
        logging.INFO: "I",
        logging.WARNING: "W",
        logging.ERROR: "E",
        logging.CRITICAL: "C",
    }

    def __init__(self, fmt=None, datefmt=None, use_color: bool = True):
        fmt = fmt or "%(asctime)s - [%(level_abbr)s] - %(module)s:%(lineno)d : %(message)s"
        datefmt = datefmt or "%Y-%m-%d %H:%M:%S"
        self.use_color = use_color
        super().__init__(fmt=fmt, datefmt=datefmt)

    def format(self, record):
        record.level_abbr = self.LEVEL_ABBR.get(record.levelno, "I")
        record.module = os.path.splitext(os.path.basename(record.pathname))[0]

        line = super().format(record)
        if not self.use_color:
            return line

        color = self.COLORS.get(record.levelno, "")
        line = f"{color}{line}{Style.RESET_ALL}"
        if record.levelno == logging.DEBUG:
            return f"{Fore.CYAN}{record.pathname}{Style.RESET_ALL}\n{line}"
        return line


def str_to_log_level(level_str: str) -> int:
    return {
        "CRITICAL": logging.CRITICAL,
        "ERROR": logging.ERROR,
        "WARNING": logging.WARNING,
        "INFO": logging.INFO,
        "DEBUG": logging.DEBUG,
        "NOTSET": logging.NOTSET,
    }.get(level_str.upper(), logging.INFO)


class Log:
    logger: Logger = None

    @classmethod
    def init_logger(cls, level_str: str = "INFO") -> Logger:
        if cls.logger:
            return cls.logger

        level = str_to_log_level(level_str)
        cls.logger = logging.getLogger("vlm_robust")
        cls.logger.setLevel(level)

        # 日志走 stderr，stdout 留给 catalog 等命令的输出
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(ColorFormatter(use_color=sys.stderr.isatty()))
        cls.logger.addHandler(handler)

        cls.logger.propagate = False
        return cls.logger

    @classmethod
    def configure(cls, level_str: str = "INFO", log_file: str = "") -> Logger:
        """
        按配置调整级别，并可选地追加文件日志（无颜色）
        """
        logger_ = cls.init_logger(level_str)
        logger_.setLevel(str_to_log_level(level_str))
        if log_file and not any(isinstance(h, logging.FileHandler) for h in logger_.handlers):
            os.makedirs(os.path.dirname(os.path.abspath(log_file)), exist_ok=True)
            file_handler = logging.FileHandler(log_file, encoding="utf-8")
            file_handler.setFormatter(ColorFormatter(use_color=False))
            logger_.addHandler(file_handler)
        return logger_


# 单例
logger = Log.init_logger()
