#include "casesens/inference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "casesens/bernoulli_sum.hpp"
#include "casesens/error.hpp"
#include "casesens/normal.hpp"

namespace casesens {

std::string_view to_string(Alternative alt) noexcept {
    switch (alt) {
        case Alternative::Greater: return "greater";
        case Alternative::Less: return "less";
        case Alternative::TwoSided: return "two-sided";
    }
    return "greater";
}

std::string_view to_string(Method method) noexcept {
    return method == Method::Normal ? "normal" : "exact";
}

std::string_view to_string(TestKind test) noexcept {
    switch (test) {
        case TestKind::Broad: return "broad";
        case TestKind::Narrow: return "narrow";
        case TestKind::Combined: return "combined";
    }
    return "broad";
}

Alternative parse_alternative(std::string_view text) {
    if (text == "greater") return Alternative::Greater;
    if (text == "less") return Alternative::Less;
    if (text == "two-sided" || text == "two_sided") return Alternative::TwoSided;
    throw Error(ErrorCode::InvalidArgument, "unknown alternative '" + std::string(text) + "'");
}

Method parse_method(std::string_view text) {
    if (text == "exact") return Method::Exact;
    if (text == "normal") return Method::Normal;
    throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(text) + "'");
}

TestKind parse_test_kind(std::string_view text) {
    if (text == "broad") return TestKind::Broad;
    if (text == "narrow") return TestKind::Narrow;
    if (text == "combined") return TestKind::Combined;
    throw Error(ErrorCode::InvalidArgument, "unknown test '" + std::string(text) + "'");
}

namespace {

struct TailValue {
    double p = 1.0;
    bool zero_variance = false;
};

double sum(std::span<const double> probs) {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

double var(std::span<const double> probs) {
    double v = 0.0;
    for (double p : probs) v += p * (1.0 - p);
    return v;
}

// Pr(S >= k) or Pr(S <= k) for the Bernoulli sum with the given probabilities.
TailValue tail(std::span<const double> probs, std::int64_t k, bool upper_tail, Method method) {
    const auto n = static_cast<std::int64_t>(probs.size());
    if (upper_tail) {
        if (k <= 0) return {1.0};
        if (k > n) return {0.0};
    } else {
        if (k >= n) return {1.0};
        if (k < 0) return {0.0};
    }
    if (method == Method::Normal) {
        const double v = var(probs);
        if (v > 0.0) {
            const double z = (static_cast<double>(k) - sum(probs)) / std::sqrt(v);
            return {upper_tail ? normal_sf(z) : normal_cdf(z)};
        }
        // Degenerate: every probability is 0 or 1, so the exact tail is a step.
        const BernoulliSum exact{std::vector<double>(probs.begin(), probs.end())};
        return {upper_tail ? exact.tail_ge(k) : exact.tail_le(k), true};
    }
    const BernoulliSum exact{std::vector<double>(probs.begin(), probs.end())};
    return {upper_tail ? exact.tail_ge(k) : exact.tail_le(k)};
}

// One-sided bounds for the sum whose per-set probabilities lie in [lower_i, upper_i].
PValueBounds one_sided(std::span<const double> lower, std::span<const double> upper,
                       std::int64_t k, bool greater, Method method) {
    PValueBounds out;
    out.statistic = k;
    out.n_sets_used = static_cast<std::int64_t>(upper.size());
    out.method = method;
    // For Pr(S >= k) the largest tail comes from the largest probabilities; for
    // Pr(S <= k) from the smallest.
    const auto hi = tail(greater ? upper : lower, k, greater, method);
    const auto lo = tail(greater ? lower : upper, k, greater, method);
    out.upper = std::clamp(hi.p, 0.0, 1.0);
    out.lower = std::clamp(lo.p, 0.0, 1.0);
    out.zero_variance = hi.zero_variance || lo.zero_variance;
    return out;
}

PValueBounds with_alternative(std::span<const double> lower, std::span<const double> upper,
                              std::int64_t k, Alternative alt, Method method) {
    if (alt != Alternative::TwoSided) {
        return one_sided(lower, upper, k, alt == Alternative::Greater, method);
    }
    const auto g = one_sided(lower, upper, k, true, method);
    const auto l = one_sided(lower, upper, k, false, method);
    PValueBounds out = g;
    out.upper = std::min(1.0, 2.0 * std::min(g.upper, l.upper));
    out.lower = std::min(1.0, 2.0 * std::min(g.lower, l.lower));
    out.zero_variance = g.zero_variance || l.zero_variance;
    return out;
}

}  // namespace

PValueBounds normal_tail_bounds(std::span<const double> probs_lower,
                                std::span<const double> probs_upper, std::int64_t k) {
    if (probs_lower.empty() || probs_upper.empty() || probs_lower.size() != probs_upper.size()) {
        throw Error(ErrorCode::InvalidArgument,
                    "normal tail bounds need two nonempty sequences of equal length");
    }
    return one_sided(probs_lower, probs_upper, k, true, Method::Normal);
}

PValueBounds broad_test(const Study& study, double gamma, Alternative alternative,
                        Method method) {
    if (study.size() == 0) throw Error(ErrorCode::EmptyStudy, "study has no matched sets");
    SensitivityParams{gamma, 1.0}.validate();
    std::vector<double> lower, upper;
    lower.reserve(study.size());
    upper.reserve(study.size());
    std::int64_t y = 0;
    for (const auto& s : study.sets()) {
        const auto b = broad_bounds(s.exposed_count, s.size, gamma);
        lower.push_back(b.lower);
        upper.push_back(b.upper);
        y += s.case_exposed ? 1 : 0;
    }
    return with_alternative(lower, upper, y, alternative, method);
}

PValueBounds narrow_test(const Study& study, const SensitivityParams& params,
                         Alternative alternative, Method method) {
    params.validate();
    if (study.narrow_count() == 0) {
        throw Error(ErrorCode::NoNarrowSets, "study has no narrow-case matched sets");
    }
    std::vector<double> lower, upper;
    lower.reserve(study.narrow_count());
    upper.reserve(study.narrow_count());
    std::int64_t y = 0;
    for (const auto& s : study.sets()) {
        if (!s.is_narrow) continue;
        const auto b = narrow_bounds(s.exposed_count, s.size, params);
        lower.push_back(b.lower);
        upper.push_back(b.upper);
        y += s.case_exposed ? 1 : 0;
    }
    return with_alternative(lower, upper, y, alternative, method);
}

double bonferroni(double p_a, double p_b) noexcept {
    return std::min(1.0, 2.0 * std::min(p_a, p_b));
}

CombinedResult combined_test(const Study& study, const SensitivityParams& params,
                             Alternative alternative, Method method) {
    CombinedResult out;
    out.narrow = narrow_test(study, params, alternative, method);
    out.broad = broad_test(study, params.gamma, alternative, method);
    out.p_broad_upper = out.broad.upper;
    out.p_narrow_upper = out.narrow.upper;
    out.bonferroni_p = bonferroni(out.p_broad_upper, out.p_narrow_upper);
    return out;
}

}  // namespace casesens
