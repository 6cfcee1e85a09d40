"""
报表：MetricsReport → 各张表（CSV / Markdown / SVG）+ metrics.json
同一输入重复生成，输出字节一致
"""
import os
from collections import OrderedDict
from typing import Dict, List, Optional, Sequence, Tuple

import yaml
from pydantic import BaseModel, Field

from application.common.constants import TierEnum
from application.common.exception import MetricsInputError
from application.common.helper import ReportTable, bar_chart_svg, write_json
from application.common.schema import AccuracyTable, EvalConfigKey, FlipStats, MetricsReport
from application.common.utils.FormatUtils import fmt_key_drop, fmt_number
from application.core.logger_util import logger
from application.service import metrics_service as metrics
from application.service.corruption import augmentation_registry
from application.service.metrics_service import metrics_service
from application.service.result_store_service import ResultStore

PUBLISHED_TABLES_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "resources", "published_tables.yaml")

SLICE_TITLES = OrderedDict([("low", "Low"), ("mid", "Mid"), ("high", "High"), ("binary", "Binary")])
FOUR_TIERS = [TierEnum.BENIGN, TierEnum.MILD, TierEnum.MODERATE, TierEnum.CATASTROPHIC]
# 两个已舍入到 1 位小数的数相减，误差最多 0.1
_ROUNDING_TOLERANCE = 0.1 + 1e-9
# 平均 Δ 由一位小数的 mRCE 与 VG 相乘还原，拟合结果只能近似对上
_SLOPE_TOLERANCE = 0.15
_R2_TOLERANCE = 0.1


class ReportBundle(BaseModel):
    """一次 report 的全部产物"""
    reports: List[MetricsReport] = Field(default_factory=list)
    references: Dict[str, str] = Field(default_factory=dict, description="数据集 → mCE 参考模型")
    tables: List[ReportTable] = Field(default_factory=list)
    chart_bars: List[Tuple[str, float]] = Field(default_factory=list)

    model_config = {"arbitrary_types_allowed": True}

    def table(self, name: str) -> ReportTable:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)


def _pct(value: Optional[float]) -> str:
    return fmt_number(value)


def _group_by_dataset(reports: Sequence[MetricsReport]) -> "OrderedDict[str, List[MetricsReport]]":
    groups: "OrderedDict[str, List[MetricsReport]]" = OrderedDict()
    for report in reports:
        groups.setdefault(report.dataset, []).append(report)
    return groups


class ReportService:

    # ============================
    #        输入
    # ============================

    @staticmethod
    def load_inputs(
            store_dirs: Sequence[str] = (),
            table_docs: Sequence[str] = (),
            allow_partial: bool = False,
            model_params: Optional[Dict[str, float]] = None
    ) -> Tuple[List[AccuracyTable], Dict[str, ResultStore]]:
        """
        结果目录与外部准确率表统一成 AccuracyTable
        :param model_params: 模型名 → 参数量，覆盖 meta.json 中的值
        """
        tables: List[AccuracyTable] = []
        stores: Dict[str, ResultStore] = {}
        for directory in store_dirs:
            store = ResultStore.open_existing(directory)
            table = metrics_service.table_from_store(store, allow_partial)
            tables.append(table)
            stores[f"{table.dataset}/{table.model}"] = store
        for path in table_docs:
            tables.extend(metrics_service.tables_from_document(path))
        if not tables:
            raise MetricsInputError(message="没有任何结果目录或准确率表")

        seen = set()
        for table in tables:
            key = (table.dataset, table.model)
            if key in seen:
                raise MetricsInputError(message=f"重复的输入: {table.model}/{table.dataset}")
            seen.add(key)
            if model_params and table.model in model_params:
                table.params = float(model_params[table.model])
        return tables, stores

    @staticmethod
    def load_model_params(path: str) -> Dict[str, float]:
        """{模型名: 参数量} 的 YAML/JSON 文件"""
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise MetricsInputError(message=f"{path} 顶层必须是 模型名 → 参数量 的映射")
        try:
            return {str(k): float(v) for k, v in data.items()}
        except (TypeError, ValueError) as e:
            raise MetricsInputError(message=f"{path} 中的参数量不是数字: {e}") from e

    # ============================
    #        计算
    # ============================

    def build(
            self,
            tables: List[AccuracyTable],
            stores: Optional[Dict[str, ResultStore]] = None,
            reference: Optional[str] = None,
            allow_partial: bool = False,
            top_k: int = 5
    ) -> ReportBundle:
        stores = stores or {}
        bundle = ReportBundle()
        by_dataset: "OrderedDict[str, List[AccuracyTable]]" = OrderedDict()
        for table in tables:
            by_dataset.setdefault(table.dataset, []).append(table)

        for dataset, group in by_dataset.items():
            reports = [
                metrics_service.compute_report(t, stores.get(f"{t.dataset}/{t.model}"), allow_partial, top_k)
                for t in group
            ]
            ref = self._attach_mce(dataset, reports, group, reference, allow_partial)
            if ref is not None:
                bundle.references[dataset] = ref
            bundle.reports.extend(reports)

        tables_by_key = {(t.dataset, t.model): t for t in tables}
        bundle.tables = [
            self.summary_table(bundle.reports),
            self.binary_table(bundle.reports),
            self.tier_table(bundle.reports),
            self.tier_share_table(bundle.reports),
            self.top_k_table(bundle.reports),
            self.rce_severity_table(bundle.reports),
            self.mce_table(bundle.reports, bundle.references),
            self.mce_category_table(bundle.reports, bundle.references, tables_by_key),
            self.config_table(bundle.reports),
            self.flip_table(bundle.reports),
            self.flip_severity_table(bundle.reports),
            self.severity_mismatch_table(bundle.reports),
            self.category_table(bundle.reports),
            self.scaling_table(bundle.reports, tables_by_key),
            self.tail_risk_table(bundle.reports),
        ]
        bundle.chart_bars = self.chart_bars(bundle.reports, top_k)
        return bundle

    @staticmethod
    def _attach_mce(dataset, reports, group, reference, allow_partial) -> Optional[str]:
        override = reference if reference is not None and any(t.model == reference for t in group) else None
        if reference is not None and override is None:
            logger.warning(f"⚠️ 参考模型 {reference} 不在数据集 {dataset} 中，改用 clean 准确率最低的模型")
        try:
            return metrics_service.attach_mce(reports, group, override)
        except MetricsInputError as e:
            if not allow_partial:
                raise
            logger.warning(f"⚠️ {dataset} 跳过 mCE: {e.message}")
            return None

    # ============================
    #        表格
    # ============================

    @staticmethod
    def summary_table(reports: Sequence[MetricsReport]) -> ReportTable:
        table = ReportTable(
            "summary", "Main robustness summary",
            ["Dataset", "Model", "N", "Baseline", "No-Image", "VG", "Worst-Case", "Severe-Fail",
             "Worst@Low", "Benign@Low", "Mean Drop", "mRCE", "mCE", "Partial"],
        )
        for dataset, group in _group_by_dataset(reports).items():
            for r in group:
                table.add_row([
                    dataset, r.model, r.n,
                    _pct(r.acc_clean), _pct(r.acc_noimage), _pct(r.visual_gain),
                    fmt_key_drop(*(r.worst_case or (None, None))),
                    _pct(r.severe_failure_rate),
                    fmt_key_drop(*(r.worst_at_low or (None, None))),
                    _pct(r.benign_at_low), _pct(r.mean_drop), _pct(r.mrce), _pct(r.mce),
                    "yes" if r.partial else "no",
                ])
            if len(group) > 1:
                table.add_row([
                    dataset, "Mean", None,
                    _pct(metrics.macro_average(r.acc_clean for r in group)),
                    _pct(metrics.macro_average(r.acc_noimage for r in group)),
                    _pct(metrics.macro_average(r.visual_gain for r in group)),
                    _pct(metrics.macro_average(r.worst_case[1] if r.worst_case else None for r in group)),
                    _pct(metrics.macro_average(r.severe_failure_rate for r in group)),
                    _pct(metrics.macro_average(r.worst_at_low[1] if r.worst_at_low else None for r in group)),
                    _pct(metrics.macro_average(r.benign_at_low for r in group)),
                    _pct(metrics.macro_average(r.mean_drop for r in group)),
                    _pct(metrics.macro_average(r.mrce for r in group)),
                    _pct(metrics.macro_average(r.mce for r in group)),
                    None,
                ])
        return table

    @staticmethod
    def _mean_drops(group: Sequence[MetricsReport]) -> Dict[str, float]:
        """跨模型的宏平均 Δ，按计划顺序"""
        keys: List[str] = []
        for r in group:
            keys.extend(k for k in r.drops if k not in keys)
        result = {}
        for key in keys:
            value = metrics.macro_average(r.drops.get(key) for r in group)
            if value is not None:
                result[key] = value
        return result

    def binary_table(self, reports: Sequence[MetricsReport]) -> ReportTable:
        table = ReportTable("binary", "Binary augmentation drops (mean over models)",
                            ["Dataset", "Augmentation", "Drop", "Tier", "Models"])
        for dataset, group in _group_by_dataset(reports).items():
            drops = {k: v for k, v in self._mean_drops(group).items() if metrics.slice_of(k) == metrics.SLICE_BINARY}
            for aug_id, value in sorted(drops.items(), key=lambda item: item[1]):
                count = sum(1 for r in group if aug_id in r.drops)
                table.add_row([dataset, aug_id, _pct(value), metrics.tier(value).value, count])
        return table

    @staticmethod
    def tier_table(reports: Sequence[MetricsReport]) -> ReportTable:
        """
        分片 × 四档计数（Positive 并入 Benign），按模型求和
        行和必须等于 模型数 × 分片配置数
        """
        table = ReportTable("tiers", "Tier distribution by severity",
                            ["Dataset", "Severity"] + [t.value.capitalize() for t in FOUR_TIERS] + ["Total"])
        for dataset, group in _group_by_dataset(reports).items():
            for slice_name, title in SLICE_TITLES.items():
                counts = {t.value: 0 for t in FOUR_TIERS}
                expected = 0
                for r in group:
                    part = metrics.slice_drops(r.drops)[slice_name]
                    expected += len(part)
                    for name, value in metrics.tier_counts(part, fold_positive=True).items():
                        counts[name] += value
                if expected == 0:
                    continue
                total = sum(counts.values())
                if total != expected:
                    raise MetricsInputError(message=f"{dataset}/{slice_name} 分档计数 {total} ≠ 配置数 {expected}")
                table.add_row([dataset, title] + [counts[t.value] for t in FOUR_TIERS] + [total])
        return table

    @staticmethod
    def tier_share_table(reports: Sequence[MetricsReport]) -> ReportTable:
        table = ReportTable("tier_shares", "Per-model tier shares (%)",
                            ["Dataset", "Model"] + [f"{t.value.capitalize()} %" for t in TierEnum.ordered()])
        for r in reports:
            if r.tier_shares:
                table.add_row([r.dataset, r.model] + [_pct(r.tier_shares.get(t.value)) for t in TierEnum.ordered()])
        return table

    @staticmethod
    def top_k_table(reports: Sequence[MetricsReport]) -> ReportTable:
        table = ReportTable("top_k", "Most harmful corruptions per severity",
                            ["Dataset", "Model", "Severity", "Rank", "Augmentation", "Drop"])
        for r in reports:
            for slice_name, ranked in r.top_k.items():
                for rank, (key, value) in enumerate(ranked, start=1):
                    table.add_row([r.dataset, r.model, slice_name, rank, key.partition(":")[0], _pct(value)])
        return table

    @staticmethod
    def rce_severity_table(reports: Sequence[MetricsReport]) -> ReportTable:
        table = ReportTable("rce_severity", "Mean RCE (%) by severity",
                            ["Dataset", "Model"] + list(SLICE_TITLES.values()) + ["mRCE"])
        for r in reports:
            if r.rce_by_severity:
                table.add_row([r.dataset, r.model] + [_pct(r.rce_by_severity.get(s)) for s in SLICE_TITLES] + [_pct(r.mrce)])
        return table

    @staticmethod
    def mce_table(reports: Sequence[MetricsReport], references: Dict[str, str]) -> ReportTable:
        table = ReportTable("mce", "Mean Corruption Error (%)", ["Dataset", "Model", "mCE", "Reference"])
        for r in reports:
            if r.mce is not None:
                table.add_row([r.dataset, r.model, _pct(r.mce), "ref" if references.get(r.dataset) == r.model else ""])
        return table

    @staticmethod
    def mce_category_table(
            reports: Sequence[MetricsReport],
            references: Dict[str, str],
            tables_by_key: Dict[Tuple[str, str], AccuracyTable]
    ) -> ReportTable:
        categories = [c.value for c in augmentation_registry.categories()]
        table = ReportTable("mce_category", "mCE (%) by corruption category", ["Dataset", "Model"] + categories + ["all"])
        for r in reports:
            ref = references.get(r.dataset)
            if ref is None or r.mce is None:
                continue
            by_category = metrics.mce_by_category(
                metrics.mce_inputs(tables_by_key[(r.dataset, r.model)]),
                metrics.mce_inputs(tables_by_key[(r.dataset, ref)]),
            )
            table.add_row([r.dataset, r.model] + [_pct(by_category.get(c)) for c in categories] + [_pct(by_category["all"])])
        return table

    @staticmethod
    def config_table(reports: Sequence[MetricsReport]) -> ReportTable:
        """每个配置的 Δ 与无法解析的回答数；外部准确率表没有计数时为 -"""
        table = ReportTable("configs", "Per-configuration drop and unparsable responses",
                            ["Dataset", "Model", "Config", "Drop", "Unparsable"])
        fixed = [EvalConfigKey.clean().slug, EvalConfigKey.no_image().slug]
        for r in reports:
            for slug in fixed:
                if slug in r.unparsable:
                    table.add_row([r.dataset, r.model, slug, None, r.unparsable[slug]])
            for slug, drop in r.drops.items():
                table.add_row([r.dataset, r.model, slug, _pct(drop), r.unparsable.get(slug)])
        return table

    @staticmethod
    def flip_table(reports: Sequence[MetricsReport]) -> ReportTable:
        table = ReportTable("flips", "Answer flips per configuration (%)",
                            ["Dataset", "Model", "Config", "Flip+", "Flip-", "Net", "Drop", "Ratio"])
        for r in reports:
            for slug, stats in r.flips.items():
                table.add_row([
                    r.dataset, r.model, slug,
                    _pct(stats.flip_plus), _pct(stats.flip_minus), _pct(stats.net),
                    _pct(r.drops.get(slug)), fmt_number(metrics.flip_ratio(stats), 2),
                ])
        return table

    @staticmethod
    def flip_severity_table(reports: Sequence[MetricsReport]) -> ReportTable:
        """每个分片上 Flip⁺ / Flip⁻ 的平均值；all 行即模型级翻转率"""
        table = ReportTable("flip_severity", "Flip rates by severity (%)",
                            ["Dataset", "Model", "Severity", "Flip+", "Flip-", "Ratio"])
        for r in reports:
            if not r.flips:
                continue
            slices = [(name, [s for k, s in r.flips.items() if metrics.slice_of(k) == name]) for name in SLICE_TITLES]
            slices.append(("all", list(r.flips.values())))
            for name, members in slices:
                if not members:
                    continue
                plus = metrics.macro_average(s.flip_plus for s in members)
                minus = metrics.macro_average(s.flip_minus for s in members)
                ratio = plus / minus if minus else None
                table.add_row([r.dataset, r.model, name, _pct(plus), _pct(minus), fmt_number(ratio, 2)])
        return table

    @staticmethod
    def severity_mismatch_table(reports: Sequence[MetricsReport]) -> ReportTable:
        table = ReportTable("severity_mismatch", "Severity mismatch",
                            ["Dataset", "Model", "Augmentation", "Low", "Mid", "High", "Violation", "Spearman"])
        for r in reports:
            if not r.severity_mismatch:
                continue
            for row in r.severity_mismatch:
                table.add_row([r.dataset, r.model, row.aug_id] + [_pct(d) for d in row.drops]
                              + ["yes" if row.violation else "no", fmt_number(row.rho, 2)])
            summary = metrics.severity_mismatch_summary(r.severity_mismatch)
            table.add_row([
                r.dataset, r.model, "ALL", None, None, None,
                f"{_pct(summary['violation_rate'])}%", fmt_number(summary["mean_rho"], 2),
            ])
        return table

    @staticmethod
    def category_table(reports: Sequence[MetricsReport]) -> ReportTable:
        table = ReportTable("categories", "Mean drop per dataset category", ["Dataset", "Model", "Category", "Drop"])
        for r in reports:
            for stratum, value in r.category_sensitivity.items():
                table.add_row([r.dataset, r.model, stratum, _pct(value)])
        return table

    @staticmethod
    def scaling_table(reports: Sequence[MetricsReport], tables_by_key: Dict[Tuple[str, str], AccuracyTable]) -> ReportTable:
        """家族内平均 Δ 对 log10(参数量) 的斜率；缺参数量或家族的模型跳过"""
        table = ReportTable("scaling", "Robustness scaling within families", ["Dataset", "Family", "Slope", "R2", "n"])
        for dataset, group in _group_by_dataset(reports).items():
            families: "OrderedDict[str, List[Tuple[float, float]]]" = OrderedDict()
            for r in group:
                source = tables_by_key[(r.dataset, r.model)]
                if source.params is None or source.family is None or r.mean_drop is None:
                    logger.debug(f"{r.model} 缺少参数量或家族，不参与缩放分析")
                    continue
                families.setdefault(source.family, []).append((source.params, r.mean_drop))
            for family, points in families.items():
                try:
                    slope, r2 = metrics.scaling_slope(points)
                except MetricsInputError as e:
                    logger.warning(f"⚠️ {dataset}/{family}: {e.message}")
                    continue
                table.add_row([dataset, family, fmt_number(slope, 2), fmt_number(r2, 2), len(points)])
        return table

    @staticmethod
    def tail_risk_table(reports: Sequence[MetricsReport]) -> ReportTable:
        table = ReportTable("tail_risk", "Share of catastrophic cases from spatial corruptions",
                            ["Dataset", "Model", "Catastrophic", "Spatial", "Share %"])
        for dataset, group in _group_by_dataset(reports).items():
            pooled: List[str] = []
            for r in group:
                keys = metrics.catastrophic_keys(r.drops)
                pooled.extend(keys)
                spatial = sum(1 for k in keys if k.partition(":")[0] in metrics.SPATIAL_AUGMENTATIONS)
                table.add_row([dataset, r.model, len(keys), spatial, _pct(metrics.tail_risk_share(keys))])
            if len(group) > 1:
                spatial = sum(1 for k in pooled if k.partition(":")[0] in metrics.SPATIAL_AUGMENTATIONS)
                table.add_row([dataset, "ALL", len(pooled), spatial, _pct(metrics.tail_risk_share(pooled))])
        return table

    def chart_bars(self, reports: Sequence[MetricsReport], top_k: int) -> List[Tuple[str, float]]:
        """每个数据集跨模型平均 Δ 最大的 k 个配置"""
        bars = []
        for dataset, group in _group_by_dataset(reports).items():
            ranked = sorted(self._mean_drops(group).items(), key=lambda item: -item[1])[:top_k]
            bars.extend((f"{dataset} · {key}", value) for key, value in ranked)
        return bars

    # ============================
    #        输出
    # ============================

    @staticmethod
    def write(bundle: ReportBundle, out_dir: str, formats: Sequence[str]) -> List[str]:
        written = []
        table_formats = [f for f in formats if f in ("csv", "md")]
        for table in bundle.tables:
            written.extend(table.write(out_dir, table_formats))
        if "svg" in formats and bundle.chart_bars:
            written.append(bar_chart_svg(os.path.join(out_dir, "top_k.svg"), "Most harmful configurations", bundle.chart_bars))
        written.append(write_json(os.path.join(out_dir, "metrics.json"), {
            "references": bundle.references,
            "reports": [r.model_dump(mode="json") for r in bundle.reports],
        }))
        logger.info(f"✅ 报表已写入 {out_dir}（{len(written)} 个文件）")
        return written

    # ============================
    #        已发表数值核对
    # ============================

    @staticmethod
    def load_published_tables(path: str = PUBLISHED_TABLES_PATH) -> dict:
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f)

    @staticmethod
    def published_summary_tables(data: dict) -> List[AccuracyTable]:
        """汇总行只含 Baseline 与 VG；No-Image 由 Baseline − VG 还原"""
        tables = []
        for dataset, rows in data["summary"].items():
            for row in rows:
                tables.append(AccuracyTable(
                    model=row["model"],
                    dataset=dataset,
                    acc_clean=row["baseline"],
                    acc_noimage=metrics.visual_gain(row["baseline"], row["vg"]),
                    params=row.get("params"),
                    family=row.get("family"),
                ))
        return tables

    def published_checks(self, path: str = PUBLISHED_TABLES_PATH) -> Tuple[List[ReportTable], bool]:
        """
        用已发表的汇总值重新计算派生列
        :return: ([核对表, No-Image 还原表], 是否全部一致)
        """
        data = self.load_published_tables(path)
        published = data["published"]
        checks = ReportTable("published_checks", "Derived arithmetic from published tables",
                             ["Check", "Published", "Derived", "Status"])
        noimage = ReportTable("published_noimage", "No-image accuracy recovered from published tables",
                              ["Dataset", "Model", "Baseline", "VG", "No-Image"])
        failures = []

        def check(name: str, expected, derived, digits: int = 1, tolerance: float = 0.0) -> None:
            if isinstance(expected, (bool, str)):
                expected_text, derived_text = str(expected), str(derived)
                status = "OK" if expected == derived else "MISMATCH"
            else:
                expected_text, derived_text = fmt_number(expected, digits), fmt_number(derived, digits)
                if expected_text == derived_text:
                    status = "OK"
                elif derived is not None and abs(expected - derived) <= tolerance:
                    status = "OK (rounding)"
                else:
                    status = "MISMATCH"
            if status == "MISMATCH":
                failures.append(name)
            checks.add_row([name, expected_text, derived_text, status])

        tables = self.published_summary_tables(data)
        for t in tables:
            noimage.add_row([t.dataset, t.model, _pct(t.acc_clean), _pct(t.acc_clean - t.acc_noimage), _pct(t.acc_noimage)])

        for dataset, expected in published["mean_vg"].items():
            derived = metrics.macro_average(
                metrics.visual_gain(t.acc_clean, t.acc_noimage) for t in tables if t.dataset == dataset
            )
            check(f"{dataset} mean VG", expected, derived)

        severe = published["severe_failure"]
        check(f"severe-failure {severe['count']}/{severe['total']}", severe["rendered"], 100.0 * severe["count"] / severe["total"])

        for dataset, flips in published["binary_flips"].items():
            for aug_id, row in flips.items():
                net = FlipStats(flip_plus=row["flip_plus"], flip_minus=row["flip_minus"]).net
                check(f"{dataset} {aug_id} flip net", row["net"], net, tolerance=_ROUNDING_TOLERANCE)

        for dataset, drops in published["binary_drops"].items():
            for aug_id, row in drops.items():
                derived = metrics.tier(row["drop"])
                if derived == TierEnum.POSITIVE:
                    derived = TierEnum.BENIGN
                check(f"{dataset} {aug_id} tier", row["tier"], derived.value)

        severity_based = len(augmentation_registry.severity_based())
        binary = len(augmentation_registry.binary())
        for dataset, slices in published["tiers"].items():
            model_count = len(data["summary"][dataset])
            for slice_name, counts in slices.items():
                size = binary if slice_name == metrics.SLICE_BINARY else severity_based
                check(f"{dataset} {slice_name} tier row sum", size * model_count, sum(counts.values()), digits=0)

        for dataset, families in published["scaling"].items():
            for family, row in families.items():
                # mRCE = 平均 Δ / VG × 100，由每个模型的两列汇总值还原平均 Δ
                points = [
                    (r["params"], r["mrce"] * r["vg"] / 100.0)
                    for r in data["summary"][dataset]
                    if r.get("family") == family
                ]
                check(f"{dataset} {family} scaling n", row["n"], len(points), digits=0)
                if len(points) < 2:
                    continue
                slope, r2 = metrics.scaling_slope(points)
                check(f"{dataset} {family} scaling slope", row["slope"], slope, digits=2, tolerance=_SLOPE_TOLERANCE)
                check(f"{dataset} {family} scaling R2", row["r2"], r2, digits=2, tolerance=_R2_TOLERANCE)

        for aug_id, row in published["severity_mismatch"].items():
            triple = tuple(row["drops"])
            check(f"{aug_id} monotonicity violation", row["violation"], metrics.monotonicity_violation(*triple))
            check(f"{aug_id} spearman rho", row["rho"], metrics.spearman_rho(*triple), digits=2)

        if failures:
            logger.error(f"❌ 已发表数值的派生核对有 {len(failures)} 项不一致: {', '.join(failures)}")
        else:
            logger.info(f"✅ 已发表数值的派生核对全部通过（{len(checks)} 项）")
        return [checks, noimage], not failures


# 创建服务实例
report_service = ReportService()

__all__ = ["ReportService", "report_service", "ReportBundle", "PUBLISHED_TABLES_PATH"]
