from . import FormatUtils
from . import ImageUtils
from .ValidationUtils import ValidationUtils

__all__ = [
    "FormatUtils",
    "ImageUtils",
    "ValidationUtils",
]
