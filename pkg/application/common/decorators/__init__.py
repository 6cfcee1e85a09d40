from .run_async import run_async

__all__ = [
    'run_async',
]