"""
派生指标：全部是结果目录或准确率表的纯函数
准确率与 Δ 单位为百分点；计算保持双精度，仅报表展示时舍入
"""
import json
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import yaml
from scipy.stats import linregress, spearmanr

from application.common.constants import SeverityEnum, TierEnum
from application.common.exception import (
    EmptyConfig,
    MetricsInputError,
    NonPositiveVG,
    PartialResultsRefused,
    ZeroReferenceError,
)
from application.common.schema import (
    AccuracyTable,
    EvalConfigKey,
    EvalRecord,
    FlipStats,
    MceInputs,
    MetricsReport,
    SeverityMismatchRow,
)
from application.core.logger_util import logger
from application.service.corruption import augmentation_registry
from application.service.result_store_service import ResultStore

# 来自表格的两数相减会带出 1e-14 量级的误差，先规整再参与分档
_DIFF_DIGITS = 10

SEVERE_FRACTION = 0.1
BENIGN_THRESHOLD = 1.0
SPATIAL_AUGMENTATIONS = frozenset({
    "upsample", "downsample", "elastic_transform", "zoom_blur", "rotate",
    "shear", "affine", "perspective_transform", "pixelate",
})
SLICE_BINARY = "binary"
SLICES = [SeverityEnum.LOW.value, SeverityEnum.MID.value, SeverityEnum.HIGH.value, SLICE_BINARY]


def _diff(a: float, b: float) -> float:
    return round(a - b, _DIFF_DIGITS)


def _mean(values: Sequence[float]) -> float:
    if not values:
        raise MetricsInputError(message="求平均的集合为空")
    return float(math.fsum(values) / len(values))


def default_corrupted_slugs() -> List[str]:
    """默认计划中的 133 个 corrupted 配置，按计划顺序"""
    slugs = []
    for spec in augmentation_registry:
        if spec.is_binary:
            slugs.append(spec.id)
        else:
            slugs.extend(f"{spec.id}:{s.value}" for s in SeverityEnum.ordered())
    return slugs


def slice_of(slug: str) -> str:
    """low / mid / high / binary"""
    _, _, severity = slug.partition(":")
    return severity or SLICE_BINARY


def order_drops(drops: Dict[str, float]) -> Dict[str, float]:
    """按计划顺序重排，计划外的键保持原顺序排在后面"""
    plan = default_corrupted_slugs()
    ordered = {slug: drops[slug] for slug in plan if slug in drops}
    ordered.update({k: v for k, v in drops.items() if k not in ordered})
    return ordered


# ============================
#        基础指标
# ============================

def accuracy(records: Sequence[EvalRecord], allow_partial: bool = False) -> float:
    """
    100 × correct / total；无法解析的回答计为错误
    :raises EmptyConfig: 没有记录
    :raises PartialResultsRefused: 存在失败记录且未允许部分结果
    """
    if not records:
        raise EmptyConfig()
    failed = sum(1 for r in records if r.failed)
    if failed and not allow_partial:
        raise PartialResultsRefused(message=f"{failed} 条记录尚未成功（使用 --allow-partial 强制输出）")
    usable = [r for r in records if not r.failed]
    if not usable:
        raise EmptyConfig(message="该配置的记录全部失败")
    return 100.0 * sum(1 for r in usable if r.correct) / len(usable)


def visual_gain(acc_clean: float, acc_noimage: float) -> float:
    return _diff(acc_clean, acc_noimage)


def rce(drop: float, vg: float) -> float:
    if vg <= 0:
        raise NonPositiveVG(vg)
    return drop / vg * 100.0


def mrce(rce_values: Sequence[float]) -> float:
    return _mean(list(rce_values))


def mean_drop(drops: Dict[str, float]) -> float:
    return _mean(list(drops.values()))


def tier(drop: float) -> TierEnum:
    return TierEnum.of(drop)


def severe_failure_rate(drops: Dict[str, float], acc_clean: float) -> float:
    """100 × |{Δ > 0.1·acc_clean}| / |drops|，严格大于"""
    if not drops:
        raise MetricsInputError(message="没有 corrupted 配置")
    threshold = SEVERE_FRACTION * acc_clean
    return 100.0 * sum(1 for d in drops.values() if d > threshold) / len(drops)


def worst_case(drops: Dict[str, float]) -> Tuple[str, float]:
    """最大 Δ；并列时取计划顺序中靠前的"""
    if not drops:
        raise MetricsInputError(message="没有 corrupted 配置")
    best_key, best = None, -math.inf
    for key, value in drops.items():
        if value > best:
            best_key, best = key, value
    return best_key, best


def low_slice(drops: Dict[str, float]) -> Dict[str, float]:
    return {k: v for k, v in drops.items() if slice_of(k) == SeverityEnum.LOW.value}


def worst_at_low(drops: Dict[str, float]) -> Tuple[str, float]:
    return worst_case(low_slice(drops))


def benign_at_low(drops: Dict[str, float]) -> float:
    low = low_slice(drops)
    if not low:
        raise MetricsInputError(message="没有 low 严重程度的配置")
    return 100.0 * sum(1 for d in low.values() if d <= BENIGN_THRESHOLD) / len(low)


def positive_configs(drops: Dict[str, float]) -> List[str]:
    return [k for k, d in drops.items() if d < 0]


def macro_average(values: Iterable[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return _mean(present) if present else None


def reference_model(acc_clean: Dict[str, float], override: Optional[str] = None) -> str:
    """默认取 clean 准确率最低的模型，并列取先出现的"""
    if not acc_clean:
        raise MetricsInputError(message="没有可选的参考模型")
    if override is not None:
        if override not in acc_clean:
            raise MetricsInputError(message=f"参考模型 {override} 不在输入中: {list(acc_clean)}")
        return override
    best_model, best = None, math.inf
    for model, value in acc_clean.items():
        if value < best:
            best_model, best = model, value
    return best_model


# ============================
#        翻转
# ============================

def _paired(clean: Sequence[EvalRecord], corrupted: Sequence[EvalRecord]) -> List[Tuple[bool, bool]]:
    clean_by_id = {r.sample_id: r.correct for r in clean if not r.failed}
    corr_by_id = {r.sample_id: r.correct for r in corrupted if not r.failed}
    if set(clean_by_id) != set(corr_by_id):
        raise MetricsInputError(message="clean 与 corrupted 的样本集合不一致")
    if not clean_by_id:
        raise EmptyConfig()
    return [(clean_by_id[i], corr_by_id[i]) for i in clean_by_id]


def flip_stats(clean: Sequence[EvalRecord], corrupted: Sequence[EvalRecord]) -> FlipStats:
    """Flip⁺ = P(clean 对 ∧ corrupted 错)，Flip⁻ = P(clean 错 ∧ corrupted 对)"""
    pairs = _paired(clean, corrupted)
    n = len(pairs)
    plus = sum(1 for c, k in pairs if c and not k)
    minus = sum(1 for c, k in pairs if not c and k)
    return FlipStats(
        flip_plus=100.0 * plus / n,
        flip_minus=100.0 * minus / n,
        n=n,
        n_plus=plus,
        n_minus=minus,
        net_exact=100.0 * (plus - minus) / n,
    )


def flip_rate(clean: Sequence[EvalRecord], corrupted: Sequence[EvalRecord]) -> float:
    """clean 答对的题中被腐蚀后答错的比例；clean 全错时为 0"""
    pairs = _paired(clean, corrupted)
    correct_clean = [k for c, k in pairs if c]
    if not correct_clean:
        return 0.0
    return 100.0 * sum(1 for k in correct_clean if not k) / len(correct_clean)


def flip_ratio(stats: FlipStats) -> Optional[float]:
    if stats.flip_minus == 0:
        return None
    return stats.flip_plus / stats.flip_minus


# ============================
#        严重程度一致性
# ============================

def monotonicity_violation(d_low: float, d_mid: float, d_high: float) -> bool:
    """严格不等式，持平不算违例"""
    return d_low > d_mid or d_mid > d_high


def spearman_rho(d_low: float, d_mid: float, d_high: float) -> Optional[float]:
    """
    严重程度 (1, 2, 3) 与 Δ 的 Spearman 秩相关，持平取平均秩
    三个 Δ 全相等时无定义，返回 None
    """
    if d_low == d_mid == d_high:
        return None
    rho = float(spearmanr([1.0, 2.0, 3.0], [d_low, d_mid, d_high]).statistic)
    if math.isnan(rho):
        return None
    return max(-1.0, min(1.0, rho))


def severity_triples(drops: Dict[str, float]) -> Dict[str, Tuple[float, float, float]]:
    triples = {}
    for spec in augmentation_registry.severity_based():
        keys = [f"{spec.id}:{s.value}" for s in SeverityEnum.ordered()]
        if all(k in drops for k in keys):
            triples[spec.id] = tuple(drops[k] for k in keys)
    return triples


def severity_mismatch_rows(drops: Dict[str, float]) -> List[SeverityMismatchRow]:
    return [
        SeverityMismatchRow(aug_id=aug_id, drops=triple, violation=monotonicity_violation(*triple), rho=spearman_rho(*triple))
        for aug_id, triple in severity_triples(drops).items()
    ]


def severity_mismatch_summary(rows: Sequence[SeverityMismatchRow]) -> Dict[str, Optional[float]]:
    """违例率 (%)、平均 ρ（排除无定义的）、无定义个数"""
    if not rows:
        return {"violation_rate": None, "mean_rho": None, "undefined_rho": 0, "trajectories": 0}
    defined = [r.rho for r in rows if r.rho is not None]
    return {
        "violation_rate": 100.0 * sum(1 for r in rows if r.violation) / len(rows),
        "mean_rho": _mean(defined) if defined else None,
        "undefined_rho": len(rows) - len(defined),
        "trajectories": len(rows),
    }


# ============================
#        分档与排名
# ============================

def slice_drops(drops: Dict[str, float]) -> Dict[str, Dict[str, float]]:
    slices = {name: {} for name in SLICES}
    for key, value in drops.items():
        slices[slice_of(key)][key] = value
    return slices


def tier_counts(drops: Dict[str, float], fold_positive: bool = False) -> Dict[str, int]:
    """五档计数；fold_positive=True 时把 Positive 并入 Benign（四列视图）"""
    counts = {t.value: 0 for t in TierEnum.ordered()}
    for value in drops.values():
        counts[tier(value).value] += 1
    if fold_positive:
        counts[TierEnum.BENIGN.value] += counts.pop(TierEnum.POSITIVE.value)
    return counts


def tier_shares(drops: Dict[str, float]) -> Dict[str, float]:
    if not drops:
        raise MetricsInputError(message="没有 corrupted 配置")
    return {k: 100.0 * v / len(drops) for k, v in tier_counts(drops).items()}


def top_k_by_severity(drops: Dict[str, float], k: int = 5) -> Dict[str, List[Tuple[str, float]]]:
    """每个分片中 Δ 最大的 k 个，并列按计划顺序"""
    result = {}
    for name, part in slice_drops(drops).items():
        ranked = sorted(part.items(), key=lambda item: -item[1])
        result[name] = ranked[:k]
    return result


def rce_by_severity(drops: Dict[str, float], vg: float) -> Dict[str, float]:
    result = {}
    for name, part in slice_drops(drops).items():
        if part:
            result[name] = _mean([rce(d, vg) for d in part.values()])
    return result


def catastrophic_keys(drops: Dict[str, float]) -> List[str]:
    return [k for k, d in drops.items() if tier(d) == TierEnum.CATASTROPHIC]


def tail_risk_share(keys: Sequence[str], spatial: Iterable[str] = SPATIAL_AUGMENTATIONS) -> Optional[float]:
    """灾难性配置中属于空间/重采样类的占比；没有灾难性配置时无定义"""
    if not keys:
        return None
    spatial = set(spatial)
    return 100.0 * sum(1 for k in keys if k.partition(":")[0] in spatial) / len(keys)


# ============================
#        mCE
# ============================

def mce_inputs(table: AccuracyTable) -> MceInputs:
    """每个腐蚀类型的误差和 Σ_s (1 − Acc/100)"""
    sums: Dict[str, float] = {}
    for slug, value in order_drops(table.acc).items():
        aug_id = slug.partition(":")[0]
        sums[aug_id] = sums.get(aug_id, 0.0) + (1.0 - value / 100.0)
    return MceInputs(model=table.model, error_sums=sums)


def _ce_ratios(model: MceInputs, ref: MceInputs) -> Dict[str, float]:
    if set(model.error_sums) != set(ref.error_sums):
        raise MetricsInputError(message=f"{model.model} 与参考模型 {ref.model} 的腐蚀类型集合不一致")
    ratios = {}
    for corruption, ref_sum in ref.error_sums.items():
        if ref_sum <= 0:
            raise ZeroReferenceError(corruption)
        ratios[corruption] = model.error_sums[corruption] / ref_sum * 100.0
    return ratios


def mce(model: MceInputs, ref: MceInputs) -> float:
    return _mean(list(_ce_ratios(model, ref).values()))


def mce_by_category(model: MceInputs, ref: MceInputs) -> Dict[str, float]:
    ratios = _ce_ratios(model, ref)
    result = {}
    for category in augmentation_registry.categories():
        members = [ratios[s.id] for s in augmentation_registry.by_category(category) if s.id in ratios]
        if members:
            result[category.value] = _mean(members)
    result["all"] = _mean(list(ratios.values()))
    return result


# ============================
#        缩放与分层
# ============================

def scaling_slope(points: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """
    (参数量, 平均 Δ) 在 log10 参数量上的最小二乘斜率与 R²
    y 全相等时 R² 记为 1
    """
    if len(points) < 2 or len({p for p, _ in points}) < 2:
        raise MetricsInputError(message="缩放分析至少需要两个不同参数量的点")
    if any(p <= 0 for p, _ in points):
        raise MetricsInputError(message="参数量必须为正")
    x = np.log10(np.array([p for p, _ in points], dtype=np.float64))
    y = np.array([d for _, d in points], dtype=np.float64)
    fit = linregress(x, y)
    r2 = 1.0 if np.all(y == y[0]) else float(fit.rvalue) ** 2
    return float(fit.slope), r2


def category_sensitivity(
        clean: Sequence[EvalRecord],
        corrupted: Dict[str, Sequence[EvalRecord]],
        strata: Optional[Sequence[str]] = None
) -> Dict[str, float]:
    """
    每个分层在所有 corrupted 配置上的平均 Δ，按 Δ 降序（并列保持分层首次出现顺序）
    没有记录的分层剔除并告警
    """
    clean_ok = [r for r in clean if not r.failed]
    names = list(strata) if strata is not None else list(dict.fromkeys(r.stratum for r in clean_ok))
    result: Dict[str, float] = {}
    for stratum in names:
        members = [r for r in clean_ok if r.stratum == stratum]
        if not members:
            logger.warning(f"⚠️ 分层 {stratum} 没有记录，已排除")
            continue
        ids = {r.sample_id for r in members}
        clean_correct = sum(1 for r in members if r.correct)
        drops = []
        for records in corrupted.values():
            part = [r for r in records if r.sample_id in ids and not r.failed]
            if len(part) != len(members):
                continue
            drops.append(100.0 * (clean_correct - sum(1 for r in part if r.correct)) / len(members))
        if drops:
            result[stratum] = _mean(drops)
    return dict(sorted(result.items(), key=lambda item: -item[1]))


# ============================
#        服务
# ============================

class MetricsService:
    """
    结果目录 / 准确率表 → AccuracyTable → MetricsReport
    """

    def table_from_store(self, store: ResultStore, allow_partial: bool = False) -> AccuracyTable:
        meta = store.meta
        clean_records = store.records_for(EvalConfigKey.clean().slug)
        acc_clean = accuracy(clean_records, allow_partial)
        noimage_records = store.records_for(EvalConfigKey.no_image().slug)
        acc_noimage = accuracy(noimage_records, allow_partial) if noimage_records else None

        acc: Dict[str, float] = {}
        correct: Dict[str, int] = {}
        unparsable: Dict[str, int] = {}
        sizes = set()
        partial = False
        for slug in store.configs():
            records = store.records_for(slug)
            usable = [r for r in records if not r.failed]
            partial = partial or len(usable) != len(records)
            sizes.add(len(usable))
            correct[slug] = sum(1 for r in usable if r.correct)
            unparsable[slug] = sum(1 for r in usable if r.unparsable)
            if slug in (EvalConfigKey.clean().slug, EvalConfigKey.no_image().slug):
                continue
            try:
                acc[slug] = accuracy(records, allow_partial)
            except EmptyConfig:
                logger.warning(f"⚠️ {slug} 没有成功的记录，已跳过")

        expected = set(meta.plan) if meta and meta.plan else set()
        missing = expected - set(store.configs())
        if missing:
            partial = True
            if not allow_partial:
                raise PartialResultsRefused(message=f"{len(missing)} 个计划中的配置没有记录")

        return AccuracyTable(
            model=meta.model_name if meta else store.directory,
            dataset=meta.dataset_name if meta else "",
            acc_clean=acc_clean,
            acc_noimage=acc_noimage,
            acc=acc,
            n=sizes.pop() if len(sizes) == 1 else None,
            correct=correct,
            unparsable=unparsable,
            params=meta.params if meta else None,
            family=meta.family if meta else None,
            partial=partial,
        )

    @staticmethod
    def tables_from_document(path: str) -> List[AccuracyTable]:
        """
        外部准确率表（YAML 或 JSON）：
        {tables: [{model, dataset, acc_clean, acc_noimage, acc: {slug: value}, params, family}]}
        """
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) if not path.endswith(".json") else json.load(f)
        rows = data.get("tables") if isinstance(data, dict) else data
        if not isinstance(rows, list):
            raise MetricsInputError(message=f"{path} 中没有 tables 列表")
        return [AccuracyTable(**row) for row in rows]

    @staticmethod
    def drops(table: AccuracyTable) -> Dict[str, float]:
        """
        Δ = acc_clean − acc；有完整计数时用 100·(c_clean − c_k)/n 精确计算，
        与翻转统计的净值逐位一致
        """
        clean_slug = EvalConfigKey.clean().slug
        exact = table.n is not None and clean_slug in table.correct
        result = {}
        for slug, value in table.acc.items():
            if exact and slug in table.correct:
                result[slug] = 100.0 * (table.correct[clean_slug] - table.correct[slug]) / table.n
            else:
                result[slug] = _diff(table.acc_clean, value)
        return order_drops(result)

    def compute_report(
            self,
            table: AccuracyTable,
            store: Optional[ResultStore] = None,
            allow_partial: bool = False,
            top_k: int = 5
    ) -> MetricsReport:
        drops = self.drops(table)
        complete = set(drops) == set(default_corrupted_slugs())
        if not complete:
            logger.warning(f"⚠️ {table.model}/{table.dataset} 只有 {len(drops)} 个 corrupted 配置，汇总指标按现有配置计算")

        report = MetricsReport(
            model=table.model,
            dataset=table.dataset,
            n=table.n,
            acc_clean=table.acc_clean,
            acc_noimage=table.acc_noimage,
            drops=drops,
            unparsable=table.unparsable,
            partial=table.partial or not complete,
        )
        if table.acc_noimage is not None:
            report.visual_gain = visual_gain(table.acc_clean, table.acc_noimage)
        if not drops:
            return report

        report.worst_case = worst_case(drops)
        report.severe_failure_rate = severe_failure_rate(drops, table.acc_clean)
        report.mean_drop = mean_drop(drops)
        report.tiers = {name: tier_counts(part) for name, part in slice_drops(drops).items() if part}
        report.tier_shares = tier_shares(drops)
        report.positive_configs = positive_configs(drops)
        report.top_k = top_k_by_severity(drops, top_k)
        report.severity_mismatch = severity_mismatch_rows(drops)
        report.tail_risk_share = tail_risk_share(catastrophic_keys(drops))
        if low_slice(drops):
            report.worst_at_low = worst_at_low(drops)
            report.benign_at_low = benign_at_low(drops)

        if report.visual_gain is not None:
            if report.visual_gain > 0:
                report.rce = {k: rce(d, report.visual_gain) for k, d in drops.items()}
                report.rce_by_severity = rce_by_severity(drops, report.visual_gain)
                if complete or allow_partial:
                    report.mrce = mrce(report.rce.values())
                else:
                    report.withheld.append("mrce")
                    logger.warning(f"⚠️ {table.model}/{table.dataset} 配置不完整，mRCE 留空（--allow-partial 可按现有配置计算）")
            else:
                logger.warning(f"⚠️ {table.model}/{table.dataset} VG={report.visual_gain}，跳过 RCE")

        if store is not None:
            clean = store.records_for(EvalConfigKey.clean().slug)
            corrupted = {slug: store.records_for(slug) for slug in drops}
            for slug, records in corrupted.items():
                try:
                    report.flips[slug] = flip_stats(clean, records)
                except (MetricsInputError, EmptyConfig) as e:
                    if not allow_partial:
                        raise
                    logger.warning(f"⚠️ {slug} 跳过翻转统计: {e}")
            report.category_sensitivity = category_sensitivity(clean, corrupted)
        return report

    @staticmethod
    def attach_mce(reports: List[MetricsReport], tables: List[AccuracyTable], reference: Optional[str] = None) -> Optional[str]:
        """
        同一数据集内按参考模型计算 mCE，写回各报告
        :return: 参考模型名；不足两个模型时为 None
        """
        if len(tables) < 2:
            return None
        ref_name = reference_model({t.model: t.acc_clean for t in tables}, reference)
        inputs = {t.model: mce_inputs(t) for t in tables}
        for report in reports:
            report.mce = mce(inputs[report.model], inputs[ref_name])
        return ref_name


# 创建服务实例
metrics_service = MetricsService()

__all__ = [
    "metrics_service",
    "MetricsService",
    "SPATIAL_AUGMENTATIONS",
    "accuracy",
    "visual_gain",
    "rce",
    "mrce",
    "mce",
    "mce_inputs",
    "mce_by_category",
    "tier",
    "tier_counts",
    "tier_shares",
    "severe_failure_rate",
    "worst_case",
    "worst_at_low",
    "benign_at_low",
    "flip_stats",
    "flip_rate",
    "flip_ratio",
    "monotonicity_violation",
    "spearman_rho",
    "severity_mismatch_rows",
    "severity_mismatch_summary",
    "scaling_slope",
    "category_sensitivity",
    "tail_risk_share",
    "top_k_by_severity",
    "rce_by_severity",
    "positive_configs",
    "mean_drop",
    "macro_average",
    "reference_model",
    "default_corrupted_slugs",
    "slice_of",
]
