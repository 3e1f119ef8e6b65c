#include "casesens/bernoulli_sum.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "casesens/error.hpp"

namespace casesens {

BernoulliSum::BernoulliSum(std::vector<double> probs) : probs_(std::move(probs)) {
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "Bernoulli probability outside [0, 1]");
        }
    }
}

double BernoulliSum::mean() const noexcept {
    return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

double BernoulliSum::variance() const noexcept {
    double v = 0.0;
    for (double p : probs_) v += p * (1.0 - p);
    return v;
}

std::vector<double> BernoulliSum::pmf() const {
    std::vector<double> dist(probs_.size() + 1, 0.0);
    dist[0] = 1.0;
    std::size_t len = 1;
    for (double p : probs_) {
        const double q = 1.0 - p;
        dist[len] = dist[len - 1] * p;
        for (std::size_t j = len - 1; j > 0; --j) dist[j] = dist[j] * q + dist[j - 1] * p;
        dist[0] *= q;
        ++len;
    }
    return dist;
}

namespace {

// Counts of "hits" over n trials; outcome(i) yields {Pr(hit), Pr(miss)} for trial i.
// Bins 0..cap-1 hold exact counts; bin `cap` absorbs every count >= cap.
template <class Outcome>
std::vector<double> absorbing_counts(std::size_t n, std::size_t cap, Outcome outcome) {
    std::vector<double> state(cap + 1, 0.0);
    state[0] = 1.0;
    std::size_t reach = 0;  // highest bin that may hold mass
    for (std::size_t i = 0; i < n; ++i) {
        const auto [p, q] = outcome(i);
        if (reach + 1 >= cap) state[cap] += state[cap - 1] * p;
        for (std::size_t j = std::min(reach + 1, cap - 1); j > 0; --j) {
            state[j] = state[j] * q + state[j - 1] * p;
        }
        state[0] *= q;
        reach = std::min(reach + 1, cap);
    }
    return state;
}

// Pr(#successes >= k) when `success` is true, else Pr(#failures >= k).
double upper_count_tail(std::span<const double> probs, std::size_t k, bool success) {
    const std::size_t n = probs.size();
    if (k == 0) return 1.0;
    if (k > n) return 0.0;
    auto hit = [&](std::size_t i) {
        return success ? std::pair{probs[i], 1.0 - probs[i]}
                       : std::pair{1.0 - probs[i], probs[i]};
    };
    if (k <= n - k + 1) return absorbing_counts(n, k, hit)[k];
    // Pr(H >= k) = Pr(misses <= n - k); summing the exact miss bins keeps small
    // tails free of cancellation.
    const std::size_t cap = n - k + 1;
    const auto state = absorbing_counts(n, cap, [&](std::size_t i) {
        const auto [p, q] = hit(i);
        return std::pair{q, p};
    });
    double tail = 0.0;
    for (std::size_t j = cap; j-- > 0;) tail += state[j];
    return tail;
}

}  // namespace

double BernoulliSum::tail_ge(std::int64_t k) const {
    const auto n = trials();
    if (k < 0 || k > n + 1) {
        throw Error(ErrorCode::InvalidCount,
                    "tail threshold " + std::to_string(k) + " outside [0, n+1]");
    }
    return upper_count_tail(probs_, static_cast<std::size_t>(k), true);
}

double BernoulliSum::tail_le(std::int64_t k) const {
    const auto n = trials();
    if (k < -1 || k > n) {
        throw Error(ErrorCode::InvalidCount,
                    "tail threshold " + std::to_string(k) + " outside [-1, n]");
    }
    // Pr(S <= k) = Pr(F >= n - k), with F the count of failures.
    return upper_count_tail(probs_, static_cast<std::size_t>(n - k), false);
}

}  // namespace casesens
