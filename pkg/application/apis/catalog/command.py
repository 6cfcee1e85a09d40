import argparse
import json
import sys

from application.common.exception.handlers import handle_command_errors
from application.common.helper import ReportTable
from application.service.corruption import registry


def register(sub) -> None:
    parser = sub.add_parser("catalog", help="列出 49 个增强及其三档参数")
    parser.add_argument("--format", choices=["md", "csv", "json"], default="md")
    parser.set_defaults(func=cmd_catalog)


def catalog_table() -> ReportTable:
    table = ReportTable("catalog", "Augmentation catalog",
                        ["ID", "Category", "Parameter", "Low", "Mid", "High", "Direction", "Note"])
    for spec in registry():
        schedule = [str(v) for v in spec.schedule] if spec.schedule is not None else [None, None, None]
        table.add_row([spec.id, spec.category.value, spec.param_name] + schedule + [spec.direction, spec.note])
    return table


@handle_command_errors
def cmd_catalog(args: argparse.Namespace) -> int:
    if args.format == "json":
        sys.stdout.write(json.dumps([spec.catalog_row() for spec in registry()], ensure_ascii=False, indent=2) + "\n")
    elif args.format == "csv":
        sys.stdout.write(catalog_table().to_csv())
    else:
        sys.stdout.write(catalog_table().to_markdown())
    return 0
