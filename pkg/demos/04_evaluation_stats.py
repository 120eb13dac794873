"""Paired evaluation statistics for A/B script comparisons.

Shows the Wilcoxon signed-rank test (exact for small samples), Cohen's
kappa for two-rater agreement, and the combined rating report.
"""

from __future__ import annotations

from reelsmith.evalkit import (
    Dimension,
    RatingRecord,
    cohens_kappa,
    rating_report,
    wilcoxon_signed_rank,
)


def main() -> None:
    # Paired scores: condition A consistently beats condition B.
    pairs = [
        {"a": 6.0, "b": 5.0},
        {"a": 5.5, "b": 3.5},
        {"a": 6.5, "b": 3.5},
        {"a": 5.0, "b": 1.0},
    ]
    result = wilcoxon_signed_rank(pairs)
    print("wilcoxon signed-rank:")
    print(f"  n={result.n_effective} W={result.w_statistic} "
          f"p={result.p_two_sided:.3f} ({result.method})")

    # Two raters over fifty shared items, moderate agreement.
    rater_a = ["good"] * 25 + ["bad"] * 25
    rater_b = ["good"] * 20 + ["bad"] * 5 + ["good"] * 10 + ["bad"] * 15
    kappa = cohens_kappa(rater_a, rater_b)
    print("\ncohen's kappa:")
    print(f"  observed={kappa.observed_agreement:.2f} "
          f"expected={kappa.expected_agreement:.2f} kappa={kappa.kappa:.2f}")

    # A tiny rating sheet: two scripts per condition, two raters, one
    # dimension. The report pairs scripts by order within each condition.
    records = []
    for sid, (a, b) in {
        "with-0": (6, 6), "with-1": (5, 6), "without-0": (3, 4), "without-1": (4, 4),
    }.items():
        records.append(RatingRecord(sid, "rater_a", Dimension.Q1, a))
        records.append(RatingRecord(sid, "rater_b", Dimension.Q1, b))
    condition_of = {
        "with-0": "with", "with-1": "with",
        "without-0": "without", "without-1": "without",
    }
    report = rating_report(records, condition_of)
    q1 = report["dimensions"]["Q1"]
    print("\nrating report, dimension Q1:")
    print(f"  with:    mean={q1['with']['mean']:.2f} sd={q1['with']['sd']:.2f}")
    print(f"  without: mean={q1['without']['mean']:.2f} sd={q1['without']['sd']:.2f}")
    print(f"  paired wilcoxon p={q1['wilcoxon']['p_two_sided']:.3f}")
    print(f"  pooled kappa={report['kappa']['pooled']['kappa']:.2f}")


if __name__ == "__main__":
    main()
