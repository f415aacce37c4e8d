#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace csd {

struct SampleGroup {
    std::string label;
    std::vector<double> values;
};

struct BmResult {
    double statistic;  // positive when A tends to exceed B
    double df;
    double p_value;  // one-sided, alternative: A stochastically larger than B
    bool df_fallback = false;
};

struct PsResult {
    double ps;  // P(A > B) + 1/2 P(A = B)
    double ci_lo, ci_hi;
};

struct HlResult {
    double shift;  // median of all pairwise differences a - b
    double ci_lo, ci_hi;
};

// One report row: Brunner-Munzel test, probability of superiority,
// Hodges-Lehmann shift, and the shift scaled by IQR of the reference group.
struct GroupComparison {
    std::size_t n_a = 0, n_b = 0;
    double bm_statistic = 0;
    double degrees_of_freedom = 0;
    double p_value = 1;
    double ps = 0.5;
    double ps_ci_lo = 0, ps_ci_hi = 1;
    double hl_shift = 0;
    double hl_ci_lo = 0, hl_ci_hi = 0;
    double hl_over_iqr = 0;
    bool hl_over_iqr_defined = true;  // false when iqr(B) == 0
    bool df_fallback = false;
};

// Studentized Brunner-Munzel rank statistic with tie midranks and a
// Welch-Satterthwaite style df estimate. p is for the one-sided alternative
// that A is stochastically larger than B. When both groups have zero
// midrank variance (e.g. each group constant) the statistic is undefined
// and a degenerate-variance error naming both groups is thrown; a
// non-finite df falls back to min(nA, nB) - 1 with the flag set.
BmResult brunner_munzel_one_sided(const SampleGroup& a, const SampleGroup& b);

// Pairwise count with half credit for ties, plus a Wald 95% CI using the
// Brunner-Munzel variance estimate, clamped to [0, 1].
PsResult probability_of_superiority(const SampleGroup& a, const SampleGroup& b);

// Median of all pairwise differences; CI endpoints are order statistics of
// the sorted differences at positions from the normal approximation to the
// Mann-Whitney U statistic. The approximation is documented as inaccurate
// below nA*nB < 100.
HlResult hodges_lehmann_shift(const SampleGroup& a, const SampleGroup& b);

// Q3 - Q1 with quartiles by linear interpolation between order statistics
// (position 1 + p(n-1)). Requires at least 4 values.
double iqr(std::span<const double> values);

GroupComparison compare_groups(const SampleGroup& a, const SampleGroup& b);

}  // namespace csd
