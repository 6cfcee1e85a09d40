import argparse

from application.common.config import SeedScheme
from application.common.constants import SeverityEnum
from application.common.exception.handlers import handle_command_errors
from application.common.utils import ImageUtils
from application.core.logger_util import logger
from application.service.corruption import corruption_service


def register(sub) -> None:
    parser = sub.add_parser("corrupt", help="对单张图片施加一个腐蚀配置")
    parser.add_argument("in_image", help="输入图片")
    parser.add_argument("out_image", help="输出 PNG 路径")
    parser.add_argument("--aug", required=True, help="增强 id，例如 glass_blur")
    parser.add_argument("--severity", choices=[s.value for s in SeverityEnum.ordered()], help="二值增强不需要")
    parser.add_argument("--sample-index", type=int, default=0, help="样本序号，参与种子派生")
    parser.add_argument("--base-seed", type=int, default=SeedScheme().augmentation_base_seed)
    parser.add_argument("--value", type=float, help="直接指定参数值（与 --seed 一起使用，绕过三档参数表）")
    parser.add_argument("--seed", type=int, help="与 --value 一起使用的随机种子")
    parser.set_defaults(func=cmd_corrupt)


@handle_command_errors
def cmd_corrupt(args: argparse.Namespace) -> int:
    """
    读图 → 腐蚀 → 写 PNG
    同一 (图片, 配置, 种子) 输出字节一致
    """
    image = ImageUtils.load_image(args.in_image)
    if args.value is not None:
        out = corruption_service.apply_raw(image, args.aug, args.value, args.seed if args.seed is not None else args.base_seed)
    else:
        cfg = corruption_service.config_for(args.aug, args.severity, sample_index=args.sample_index)
        seeds = SeedScheme(augmentation_base_seed=args.base_seed)
        out = corruption_service.apply(image, cfg, seeds)
    ImageUtils.save_png(out, args.out_image)
    logger.info(f"✅ {args.aug}{':' + args.severity if args.severity else ''} → {args.out_image} ({out.shape[1]}x{out.shape[0]})")
    return 0
