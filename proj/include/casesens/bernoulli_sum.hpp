#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace casesens {

// Distribution of a sum of independent Bernoulli(p_i) variables
// (Poisson-binomial), evaluated by sequential convolution of the per-trial
// generating functions (1 - p_i) + p_i x in a fixed left-to-right order.
class BernoulliSum {
public:
    BernoulliSum() = default;
    // Throws InvalidArgument if any probability lies outside [0, 1].
    explicit BernoulliSum(std::vector<double> probs);

    std::span<const double> probs() const noexcept { return probs_; }
    std::int64_t trials() const noexcept { return static_cast<std::int64_t>(probs_.size()); }

    double mean() const noexcept;
    double variance() const noexcept;

    // Full pmf over {0..n}; O(n^2).
    std::vector<double> pmf() const;

    // Pr(sum >= k) for 0 <= k <= n + 1. Work is O(n * min(k, n - k)).
    double tail_ge(std::int64_t k) const;
    // Pr(sum <= k) for -1 <= k <= n.
    double tail_le(std::int64_t k) const;

private:
    std::vector<double> probs_;
};

inline double tail_ge(const BernoulliSum& dist, std::int64_t k) { return dist.tail_ge(k); }

}  // namespace casesens
