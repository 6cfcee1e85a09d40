import argparse
import os
from typing import List, Optional

import numpy as np

from application.common.config import SeedScheme
from application.common.constants import SeverityEnum
from application.common.exception.handlers import handle_command_errors
from application.common.helper import ReportTable
from application.common.utils import ImageUtils
from application.core.logger_util import logger
from application.service.corruption import augmentation_registry, corruption_service
from application.service.corruption.primitives import resize

THUMB = 160
GAP = 4


def register(sub) -> None:
    parser = sub.add_parser("visualize", help="对一张图片生成全部增强 × 严重程度的图集")
    parser.add_argument("image", help="输入图片")
    parser.add_argument("--out", required=True, help="输出目录")
    parser.add_argument("--filter", nargs="+", metavar="AUG", help="只生成这些增强")
    parser.add_argument("--sample-index", type=int, default=0)
    parser.add_argument("--base-seed", type=int, default=SeedScheme().augmentation_base_seed)
    parser.set_defaults(func=cmd_visualize)


def image_name(position: int, aug_id: str, severity: Optional[SeverityEnum]) -> str:
    """{序号:03d}_{aug}[_{severity}].png，序号为计划顺序"""
    suffix = f"_{severity.value}" if severity is not None else ""
    return f"{position:03d}_{aug_id}{suffix}.png"


def _thumbnail(image: np.ndarray) -> np.ndarray:
    """等比缩放到 THUMB 以内并居中放到白底方块上"""
    h, w = image.shape[:2]
    scale = THUMB / max(h, w)
    out_w, out_h = max(1, round(w * scale)), max(1, round(h * scale))
    small = resize(image, out_w, out_h, "bilinear")
    tile = np.full((THUMB, THUMB, 3), 255, dtype=np.uint8)
    top, left = (THUMB - out_h) // 2, (THUMB - out_w) // 2
    tile[top:top + out_h, left:left + out_w] = small
    return tile


def _grid(rows: List[List[np.ndarray]]) -> np.ndarray:
    cols = max(len(r) for r in rows)
    height = len(rows) * THUMB + (len(rows) + 1) * GAP
    width = cols * THUMB + (cols + 1) * GAP
    canvas = np.full((height, width, 3), 255, dtype=np.uint8)
    for i, row in enumerate(rows):
        for j, tile in enumerate(row):
            y, x = GAP + i * (THUMB + GAP), GAP + j * (THUMB + GAP)
            canvas[y:y + THUMB, x:x + THUMB] = tile
    return canvas


@handle_command_errors
def cmd_visualize(args: argparse.Namespace) -> int:
    """
    images/ 下每个配置一张 PNG（默认 42×3 + 7 = 133 张），
    gallery_{category}.png 为各分类的网格（首列为原图，之后按 low/mid/high）
    """
    source = ImageUtils.load_image(args.image)
    seeds = SeedScheme(augmentation_base_seed=args.base_seed)
    selected = None if not args.filter else set(args.filter)
    for aug_id in selected or ():
        augmentation_registry.get(aug_id)

    image_dir = os.path.join(args.out, "images")
    index = ReportTable("index", "Gallery index", ["File", "Augmentation", "Severity", "Category", "Width", "Height"])
    original = _thumbnail(source)
    galleries = {}
    position = 0
    for spec in augmentation_registry:
        if selected is not None and spec.id not in selected:
            continue
        severities = [None] if spec.is_binary else SeverityEnum.ordered()
        row = [original]
        for severity in severities:
            position += 1
            cfg = corruption_service.config_for(spec.id, severity, sample_index=args.sample_index)
            out = corruption_service.apply(source, cfg, seeds)
            name = image_name(position, spec.id, severity)
            ImageUtils.save_png(out, os.path.join(image_dir, name))
            index.add_row([name, spec.id, severity.value if severity else "binary", spec.category.value, out.shape[1], out.shape[0]])
            row.append(_thumbnail(out))
        galleries.setdefault(spec.category.value, []).append(row)

    for category, rows in galleries.items():
        ImageUtils.save_png(_grid(rows), os.path.join(args.out, f"gallery_{category}.png"))
    index.write(args.out, ["csv"])
    logger.info(f"✅ 已生成 {position} 张图片与 {len(galleries)} 张分类网格 → {args.out}")
    return 0
