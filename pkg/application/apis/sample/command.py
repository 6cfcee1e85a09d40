import argparse
import sys

from application.common.config import SeedScheme
from application.common.exception.handlers import EXIT_USAGE, handle_command_errors
from application.common.helper import ReportTable
from application.core.logger_util import logger
from application.service.dataset_service import dataset_service


def register(sub) -> None:
    parser = sub.add_parser("sample", help="分层采样试运行：打印各分层数量并可写出子集 manifest")
    parser.add_argument("manifest", help="JSONL manifest")
    parser.add_argument("--fraction", type=float, default=0.2)
    parser.add_argument("--seed", type=int, default=SeedScheme().sampling_seed)
    parser.add_argument("--name", help="数据集名，默认取文件名")
    parser.add_argument("--out", help="写出采样后的 manifest")
    parser.add_argument("--no-check-images", action="store_true", help="不检查图片文件是否存在")
    parser.set_defaults(func=cmd_sample)


@handle_command_errors
def cmd_sample(args: argparse.Namespace) -> int:
    if not 0 < args.fraction <= 1:
        logger.error(f"❌ --fraction 必须在 (0, 1] 内: {args.fraction}")
        return EXIT_USAGE
    dataset = dataset_service.load_manifest(args.manifest, name=args.name, check_images=not args.no_check_images)
    sampled = dataset_service.stratified_sample(dataset, args.fraction, args.seed)

    totals = dataset_service.stratum_counts(dataset)
    chosen = dataset_service.stratum_counts(sampled)
    table = ReportTable("sample", f"Stratified sample of {dataset.name} (fraction={args.fraction}, seed={args.seed})",
                        ["Stratum", "Total", "Selected"])
    for stratum, total in totals.items():
        table.add_row([stratum, total, chosen.get(stratum, 0)])
    table.add_row(["ALL", len(dataset), len(sampled)])
    sys.stdout.write(table.to_markdown())

    if args.out:
        dataset_service.write_manifest(sampled, args.out)
        logger.info(f"✅ 采样结果已写入 {args.out}")
    return 0
