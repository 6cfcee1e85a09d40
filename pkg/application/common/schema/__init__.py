"""
通用 Schema 模块

自动导出所有 schema 模块中的公开类，方便其他模块导入使用
"""

from .sample_schema import *
from .augmentation_schema import *
from .record_schema import *
from .metrics_schema import *
