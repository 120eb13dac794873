"""A/B condition runs and the paired-evaluation statistics toolbox.

Wilcoxon signed-rank: zeros dropped, average ranks on ties, exact two-sided
p by sign-assignment enumeration for small n, normal approximation with tie
and continuity corrections otherwise.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import Degenerate, ValidationError
from .model import Article, Condition, Framing, Premise, Script
from .scriptgen import generate_script
from .providers import ProviderSession

EXACT_N_LIMIT = 12


class Dimension(str, Enum):
    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"
    Q4 = "Q4"
    Q5 = "Q5"
    Q6 = "Q6"


@dataclass(frozen=True)
class RatingRecord:
    script_id: str
    rater_id: str
    dimension: Dimension
    score: int
    justification: str = ""

    def __post_init__(self):
        if not 1 <= self.score <= 7:
            raise ValidationError("rating score must be in [1, 7]")


@dataclass(frozen=True)
class WilcoxonResult:
    n_effective: int
    w_statistic: float
    p_two_sided: float
    method: str  # "exact" | "normal_approx"

    def to_dict(self) -> dict:
        return {
            "n_effective": self.n_effective,
            "w_statistic": self.w_statistic,
            "p_two_sided": self.p_two_sided,
            "method": self.method,
        }


@dataclass(frozen=True)
class KappaResult:
    kappa: float
    observed_agreement: float
    expected_agreement: float

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "observed_agreement": self.observed_agreement,
            "expected_agreement": self.expected_agreement,
        }


def _average_ranks(magnitudes: list[float]) -> list[float]:
    """Ranks of |d| with average ranks assigned to ties."""
    order = sorted(range(len(magnitudes)), key=lambda i: magnitudes[i])
    ranks = [0.0] * len(magnitudes)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and magnitudes[order[j + 1]] == magnitudes[order[i]]:
            j += 1
        average = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    return ranks


def _exact_p(ranks: list[float], w_observed: float) -> float:
    """P(min rank sum <= observed) over all 2^n sign assignments.

    Computed by convolving the doubled-rank distribution; doubling keeps
    tie-averaged half ranks integral.
    """
    doubled = [round(2 * r) for r in ranks]
    total = sum(doubled)
    counts = {0: 1}
    for rank in doubled:
        nxt: dict[int, int] = {}
        for value, count in counts.items():
            nxt[value] = nxt.get(value, 0) + count
            nxt[value + rank] = nxt.get(value + rank, 0) + count
        counts = nxt
    w2 = round(2 * w_observed)
    favorable = sum(
        count for value, count in counts.items() if min(value, total - value) <= w2
    )
    return favorable / (2 ** len(ranks))


def wilcoxon_signed_rank(pairs: list[dict]) -> WilcoxonResult:
    """``pairs`` is a list of {"a": float, "b": float}; tests a - b."""
    if not pairs:
        raise ValidationError("wilcoxon needs at least one pair")
    diffs = [float(p["a"]) - float(p["b"]) for p in pairs]
    diffs = [d for d in diffs if d != 0.0]
    if not diffs:
        raise Degenerate("all differences are zero; no test possible")
    n = len(diffs)
    ranks = _average_ranks([abs(d) for d in diffs])
    w_pos = sum(r for r, d in zip(ranks, diffs) if d > 0)
    w_neg = sum(r for r, d in zip(ranks, diffs) if d < 0)
    w = min(w_pos, w_neg)

    if n <= EXACT_N_LIMIT:
        return WilcoxonResult(
            n_effective=n,
            w_statistic=w,
            p_two_sided=min(1.0, _exact_p(ranks, w)),
            method="exact",
        )

    mean = n * (n + 1) / 4
    tie_counts: dict[float, int] = {}
    for d in diffs:
        tie_counts[abs(d)] = tie_counts.get(abs(d), 0) + 1
    tie_term = sum(t**3 - t for t in tie_counts.values()) / 48
    variance = n * (n + 1) * (2 * n + 1) / 24 - tie_term
    if variance <= 0:
        raise Degenerate("zero variance in rank sums")
    z = (w - mean + 0.5) / variance**0.5  # continuity correction toward the mean
    p = 2 * statistics.NormalDist().cdf(z)
    return WilcoxonResult(
        n_effective=n,
        w_statistic=w,
        p_two_sided=min(1.0, p),
        method="normal_approx",
    )


def cohens_kappa(ratings_a: list, ratings_b: list) -> KappaResult:
    """Unweighted kappa over nominal categories."""
    if len(ratings_a) != len(ratings_b):
        raise ValidationError("rating lists must have equal length")
    if not ratings_a:
        raise ValidationError("rating lists must be non-empty")
    n = len(ratings_a)
    observed = sum(1 for x, y in zip(ratings_a, ratings_b) if x == y) / n
    categories = set(ratings_a) | set(ratings_b)
    expected = sum(
        (ratings_a.count(c) / n) * (ratings_b.count(c) / n) for c in categories
    )
    if expected == 1.0:
        raise Degenerate("expected agreement is 1; kappa undefined")
    kappa = (observed - expected) / (1 - expected)
    return KappaResult(
        kappa=kappa, observed_agreement=observed, expected_agreement=expected
    )


def summarize(scores: list[float]) -> dict:
    if not scores:
        raise ValidationError("cannot summarize an empty score list")
    mean = statistics.fmean(scores)
    sd = statistics.stdev(scores) if len(scores) > 1 else 0.0
    return {"mean": mean, "sd": sd}


def run_condition_pair(
    article: Article,
    framing: Framing,
    premise: Premise,
    session: ProviderSession,
    k: int,
    id_prefix: str = "cond",
) -> dict[str, list[Script]]:
    """k scripts per condition, identical style blocks across both."""
    from .model import validate_premise

    if validate_premise(premise):
        raise ValidationError("condition run needs a valid premise")
    result: dict[str, list[Script]] = {"with": [], "without": []}
    for i in range(k):
        script, _ = generate_script(
            f"{id_prefix}-with-{i}", article, framing, Condition.WITH_PREMISE,
            session, premise=premise,
        )
        result["with"].append(script)
        script, _ = generate_script(
            f"{id_prefix}-without-{i}", article, framing, Condition.WITHOUT_PREMISE,
            session,
        )
        result["without"].append(script)
    return result


RATINGS_COLUMNS = ["script_id", "rater_id", "dimension", "score", "justification"]


def load_ratings(path: Path) -> list[RatingRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            records.append(
                RatingRecord(
                    script_id=row["script_id"],
                    rater_id=row["rater_id"],
                    dimension=Dimension(row["dimension"]),
                    score=int(row["score"]),
                    justification=row.get("justification", ""),
                )
            )
    return records


def save_ratings(records: list[RatingRecord], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(RATINGS_COLUMNS)
        for r in records:
            writer.writerow(
                [r.script_id, r.rater_id, r.dimension.value, r.score, r.justification]
            )


def rating_report(
    records: list[RatingRecord],
    condition_of: dict[str, str],
    pooled_kappa: bool = True,
) -> dict:
    """Per-dimension mean/SD per condition plus Wilcoxon p on paired means.

    ``condition_of`` maps script_id -> "with" | "without". Scripts are paired
    by their order within each condition. Kappa is reported pooled across
    dimensions and per dimension; callers pick the grouping they need.
    """
    report: dict = {"dimensions": {}, "kappa": {}}
    raters = sorted({r.rater_id for r in records})
    for dim in Dimension:
        dim_records = [r for r in records if r.dimension is dim]
        if not dim_records:
            continue
        per_script: dict[str, list[int]] = {}
        for r in dim_records:
            per_script.setdefault(r.script_id, []).append(r.score)
        means = {sid: statistics.fmean(v) for sid, v in per_script.items()}
        with_scores = sorted(
            (sid, m) for sid, m in means.items() if condition_of.get(sid) == "with"
        )
        without_scores = sorted(
            (sid, m) for sid, m in means.items() if condition_of.get(sid) == "without"
        )
        entry: dict = {}
        if with_scores:
            entry["with"] = summarize([m for _, m in with_scores])
        if without_scores:
            entry["without"] = summarize([m for _, m in without_scores])
        if with_scores and len(with_scores) == len(without_scores):
            try:
                pairs = [
                    {"a": a, "b": b}
                    for (_, a), (_, b) in zip(with_scores, without_scores)
                ]
                entry["wilcoxon"] = wilcoxon_signed_rank(pairs).to_dict()
            except Degenerate:
                entry["wilcoxon"] = None
        report["dimensions"][dim.value] = entry

    if len(raters) == 2:
        a_id, b_id = raters
        def _scores(rater: str, dims) -> list:
            keyed = {
                (r.script_id, r.dimension): r.score
                for r in records
                if r.rater_id == rater and r.dimension in dims
            }
            return [keyed[k] for k in sorted(keyed, key=lambda k: (k[0], k[1].value))]

        all_dims = set(Dimension)
        try:
            report["kappa"]["pooled"] = cohens_kappa(
                _scores(a_id, all_dims), _scores(b_id, all_dims)
            ).to_dict()
        except (Degenerate, ValidationError):
            report["kappa"]["pooled"] = None
        report["kappa"]["per_dimension"] = {}
        for dim in Dimension:
            try:
                report["kappa"]["per_dimension"][dim.value] = cohens_kappa(
                    _scores(a_id, {dim}), _scores(b_id, {dim})
                ).to_dict()
            except (Degenerate, ValidationError):
                report["kappa"]["per_dimension"][dim.value] = None
    return report
