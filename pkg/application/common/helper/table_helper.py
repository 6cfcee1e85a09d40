"""
报表表格输出：CSV（机器可读）、Markdown（人读）、SVG 条形图
CSV 与 Markdown 使用同一份已格式化的单元格，两者数值一致
"""
import csv
import io
import json
import os
from decimal import Decimal
from enum import Enum
from typing import Any, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# 固定 SVG 中的随机 id 与时间戳，同一输入得到同样的字节
matplotlib.rcParams["svg.hashsalt"] = "vlm-robust"
matplotlib.rcParams["svg.fonttype"] = "none"


class ReportTable:

    def __init__(self, name: str, title: str, columns: Sequence[str], rows: Optional[List[List[Any]]] = None):
        self.name = name
        self.title = title
        self.columns = list(columns)
        self.rows: List[List[str]] = []
        for row in rows or []:
            self.add_row(row)

    def add_row(self, row: Sequence[Any]) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"{self.name}: 行宽 {len(row)} 与列数 {len(self.columns)} 不一致")
        self.rows.append(["-" if cell is None else str(cell) for cell in row])

    def __len__(self) -> int:
        return len(self.rows)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buffer.getvalue()

    def to_markdown(self) -> str:
        def esc(cell: str) -> str:
            return cell.replace("|", "\\|")

        lines = [f"## {self.title}", ""]
        lines.append("| " + " | ".join(esc(c) for c in self.columns) + " |")
        lines.append("|" + "|".join("---" for _ in self.columns) + "|")
        for row in self.rows:
            lines.append("| " + " | ".join(esc(c) for c in row) + " |")
        return "\n".join(lines) + "\n"

    def write(self, out_dir: str, formats: Sequence[str]) -> List[str]:
        os.makedirs(out_dir, exist_ok=True)
        written = []
        for fmt in formats:
            if fmt == "csv":
                content = self.to_csv()
            elif fmt == "md":
                content = self.to_markdown()
            else:
                continue
            path = os.path.join(out_dir, f"{self.name}.{fmt}")
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(content)
            written.append(path)
        return written


def bar_chart_svg(path: str, title: str, bars: Sequence[Tuple[str, float]], xlabel: str = "Δ (pp)") -> str:
    """水平条形图，条目自上而下按给定顺序排列"""
    labels = [label for label, _ in bars]
    values = [value for _, value in bars]
    fig, ax = plt.subplots(figsize=(7, 0.4 * max(len(bars), 1) + 1.2))
    positions = list(range(len(bars)))
    ax.barh(positions, values, color="#c0392b")
    ax.set_yticks(positions)
    ax.set_yticklabels(labels)
    ax.invert_yaxis()
    ax.set_xlabel(xlabel)
    ax.set_title(title)
    fig.tight_layout()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def format_special_types(data: Any) -> Any:
    """Decimal/Enum/tuple 等转为 JSON 可序列化的值"""
    if isinstance(data, dict):
        return {str(k): format_special_types(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [format_special_types(item) for item in data]
    if isinstance(data, Decimal):
        return float(data)
    if isinstance(data, Enum):
        return data.value
    return data


def write_json(path: str, data: Any) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(format_special_types(data), f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")
    return path


__all__ = ["ReportTable", "bar_chart_svg", "format_special_types", "write_json"]
