#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "casesens/bounds.hpp"
#include "casesens/study.hpp"

namespace casesens {

enum class Alternative { Greater, Less, TwoSided };
enum class Method { Exact, Normal };
enum class TestKind { Broad, Narrow, Combined };

std::string_view to_string(Alternative alt) noexcept;
std::string_view to_string(Method method) noexcept;
std::string_view to_string(TestKind test) noexcept;
Alternative parse_alternative(std::string_view text);
Method parse_method(std::string_view text);
TestKind parse_test_kind(std::string_view text);

// Sharp bounds on the p-value of a Mantel-Haenszel statistic over all
// allocations permitted by the sensitivity parameters.
struct PValueBounds {
    double lower = 1.0;
    double upper = 1.0;
    std::int64_t statistic = 0;
    std::int64_t n_sets_used = 0;
    Method method = Method::Exact;
    // Normal method only: a tail had zero variance and fell back to its exact value.
    bool zero_variance = false;
};

// Normal approximation to Pr(sum >= k) for the sums with per-set probabilities
// probs_lower (lower bound) and probs_upper (upper bound). No continuity correction.
PValueBounds normal_tail_bounds(std::span<const double> probs_lower,
                                std::span<const double> probs_upper, std::int64_t k);

// Broad-case test over all sets.
PValueBounds broad_test(const Study& study, double gamma,
                        Alternative alternative = Alternative::Greater,
                        Method method = Method::Exact);

// Narrow-case test over the narrow sets only. Throws NoNarrowSets when the study has none.
PValueBounds narrow_test(const Study& study, const SensitivityParams& params,
                         Alternative alternative = Alternative::Greater,
                         Method method = Method::Exact);

struct CombinedResult {
    PValueBounds broad;
    PValueBounds narrow;
    double p_broad_upper = 1.0;
    double p_narrow_upper = 1.0;
    double bonferroni_p = 1.0;
};

// min(1, 2 * min(a, b)).
double bonferroni(double p_a, double p_b) noexcept;

CombinedResult combined_test(const Study& study, const SensitivityParams& params,
                             Alternative alternative = Alternative::Greater,
                             Method method = Method::Exact);

}  // namespace casesens
