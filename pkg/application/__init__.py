import argparse
import sys
from typing import List, Optional

from application.apis import register_commands
from application.common.config import config
from application.common.exception.handlers import EXIT_USAGE
from application.core.lifespan import lifespan


class _ArgumentParser(argparse.ArgumentParser):
    """参数错误统一按退出码 1 处理"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Application:
    """
    项目统一容器，负责创建命令行解析器并分发子命令
    """

    def __init__(self):
        self.parser = self._init_parser()

    def _init_parser(self) -> argparse.ArgumentParser:
        parser = _ArgumentParser(prog="vlm-robust", description=config.project_name)
        parser.add_argument("--log-level", help="覆盖配置中的日志级别")
        sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
        # 注册所有子命令
        register_commands(sub)
        return parser

    def run(self, argv: Optional[List[str]] = None) -> int:
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else EXIT_USAGE
        with lifespan(args.command, args.log_level):
            return args.func(args)


application = _Application()


def main(argv: Optional[List[str]] = None) -> int:
    return application.run(argv)


__all__ = ["application", "main"]
