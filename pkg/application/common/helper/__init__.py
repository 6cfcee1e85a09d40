from .table_helper import ReportTable, bar_chart_svg, format_special_types, write_json

__all__ = [
    'ReportTable',
    'bar_chart_svg',
    'format_special_types',
    'write_json',
]
