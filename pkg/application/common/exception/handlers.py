import traceback
from functools import wraps

from application.common.exception.error_code_enum import EvalErrorCodeEnum
from application.common.exception.exception import EvalBusinessException
from application.core.logger_util import logger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_PARTIAL = 3


def handle_command_errors(func):
    """
    命令异常处理：把异常映射为进程退出码并记录日志
    """

    @wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            result = func(*args, **kwargs)
            return EXIT_OK if result is None else int(result)
        except EvalBusinessException as exc:
            logger.error(f"❌ [{exc.code}] {exc.message}")
            logger.debug(f"堆栈信息:\n{traceback.format_exc()}")
            return exc.exit_code
        except FileNotFoundError as exc:
            logger.error(f"❌ 文件不存在: {exc}")
            return EXIT_USAGE
        except KeyboardInterrupt:
            logger.warning("⚠️ 已中断，已写入的记录可通过重新执行 run 续跑")
            return EvalErrorCodeEnum.ERROR.exit_code
        except Exception as exc:
            logger.error(f"❌ 系统错误 ==> {exc}\n异常类型: {type(exc).__name__}\n堆栈信息:\n{traceback.format_exc()}")
            return EXIT_RUNTIME

    return wrapper
