import argparse
import os
import sys

from application.common.config import config
from application.common.exception.handlers import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, handle_command_errors
from application.core.logger_util import logger
from application.service.report_service import PUBLISHED_TABLES_PATH, report_service

FORMATS = ["csv", "md", "svg"]


def register(sub) -> None:
    parser = sub.add_parser("report", help="由结果目录或准确率表生成报表")
    parser.add_argument("stores", nargs="*", help="结果目录（每个模型 × 数据集一个）")
    parser.add_argument("--tables", action="append", default=[], metavar="FILE",
                        help="外部准确率表（YAML/JSON），可重复")
    parser.add_argument("--out", help="报表输出目录，默认 {output_dir}/report")
    parser.add_argument("--format", action="append", choices=FORMATS, dest="formats",
                        help="输出格式，可重复；默认 csv + md")
    parser.add_argument("--allow-partial", action="store_true", help="允许存在失败或缺失的配置")
    parser.add_argument("--reference-model", help="mCE 参考模型，默认取 clean 准确率最低者")
    parser.add_argument("--model-params", metavar="FILE", help="模型名 → 参数量（YAML/JSON），用于缩放表")
    parser.add_argument("--top-k", type=int, default=5)
    parser.add_argument("--paper-tables", "--published-tables", dest="paper_tables", nargs="?",
                        const=PUBLISHED_TABLES_PATH, metavar="FILE",
                        help="核对已发表汇总值的派生算术（默认使用内置数据）")
    parser.set_defaults(func=cmd_report)


@handle_command_errors
def cmd_report(args: argparse.Namespace) -> int:
    """
    同一输入重复生成的报表字节一致
    """
    out_dir = args.out or os.path.join(config.output_dir, "report")
    formats = args.formats or ["csv", "md"]
    status = EXIT_OK

    if args.paper_tables:
        tables, ok = report_service.published_checks(args.paper_tables)
        for table in tables:
            table.write(out_dir, [f for f in formats if f in ("csv", "md")] or ["md"])
        sys.stdout.write(tables[0].to_markdown())
        if not ok:
            status = EXIT_RUNTIME

    if not args.stores and not args.tables:
        if args.paper_tables:
            return status
        logger.error("❌ 需要至少一个结果目录或 --tables 文件")
        return EXIT_USAGE

    model_params = report_service.load_model_params(args.model_params) if args.model_params else None
    tables, stores = report_service.load_inputs(args.stores, args.tables, args.allow_partial, model_params)
    bundle = report_service.build(tables, stores, args.reference_model, args.allow_partial, args.top_k)
    report_service.write(bundle, out_dir, formats)
    sys.stdout.write(bundle.table("summary").to_markdown())
    return status
