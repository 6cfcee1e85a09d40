import asyncio
from functools import wraps


def run_async(func):
    """
    命令行同步入口运行协程的装饰器
    已有运行中的事件循环时（例如在 notebook 中调用）改为在独立线程里跑新循环
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            loop = asyncio.get_running_loop()
        except RuntimeError:
            loop = None

        if loop and loop.is_running():
            import concurrent.futures
            with concurrent.futures.ThreadPoolExecutor(max_workers=1) as pool:
                return pool.submit(asyncio.run, func(*args, **kwargs)).result()

        return asyncio.run(func(*args, **kwargs))

    return wrapper
