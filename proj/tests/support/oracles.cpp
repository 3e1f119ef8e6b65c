#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

#include "casesens/simulation.hpp"

namespace casesens::testkit {

double enumerate_tail_ge(const std::vector<double>& probs, std::int64_t k) {
    const std::size_t n = probs.size();
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double p = 1.0;
        std::int64_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1) {
                p *= probs[i];
                ++count;
            } else {
                p *= 1.0 - probs[i];
            }
        }
        if (count >= k) total += p;
    }
    return total;
}

double elementary_symmetric(const std::vector<double>& w, int b) {
    if (b < 0 || b > static_cast<int>(w.size())) return 0.0;
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << w.size()); ++mask) {
        if (std::popcount(mask) != static_cast<unsigned>(b)) continue;
        double prod = 1.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (mask >> j & 1) prod *= w[j];
        }
        total += prod;
    }
    return total;
}

ProbBounds narrow_bounds_bruteforce(int m, int J, double gamma, double theta, ThetaSense sense) {
    const std::vector<double> ratios = sense == ThetaSense::Symmetric
                                           ? std::vector<double>{1.0 / theta, 1.0, theta}
                                           : std::vector<double>{1.0, theta};
    ProbBounds out{std::numeric_limits<double>::infinity(), -1.0};
    for (std::uint64_t u = 0; u < (std::uint64_t{1} << J); ++u) {
        const double w1 = (u & 1) ? gamma : 1.0;
        std::vector<double> w;
        for (int j = 1; j < J; ++j) w.push_back((u >> j & 1) ? gamma : 1.0);
        const double s_prev = elementary_symmetric(w, m - 1);
        const double s_m = elementary_symmetric(w, m);
        for (double r : ratios) {
            const double num = r * w1 * s_prev;
            const double p = num / (num + s_m);
            out.lower = std::min(out.lower, p);
            out.upper = std::max(out.upper, p);
        }
    }
    return out;
}

double exhaustive_group_assignment(const CostMatrix& cost, std::size_t k) {
    std::vector<char> used(cost.cols, 0);
    double best = std::numeric_limits<double>::infinity();
    // Slot s belongs to row s / k; columns within a row are taken in increasing order.
    std::function<void(std::size_t, std::size_t, double)> go = [&](std::size_t slot,
                                                                   std::size_t min_col,
                                                                   double acc) {
        if (slot == cost.rows * k) {
            best = std::min(best, acc);
            return;
        }
        const std::size_t row = slot / k;
        const std::size_t start = slot % k == 0 ? 0 : min_col;
        for (std::size_t c = start; c < cost.cols; ++c) {
            if (used[c]) continue;
            used[c] = 1;
            go(slot + 1, c + 1, acc + cost(row, c));
            used[c] = 0;
        }
    };
    go(0, 0, 0.0);
    return best;
}

double enumerate_randomization_p(const Study& study) {
    const auto& sets = study.sets();
    std::int64_t observed = 0;
    for (const auto& s : sets) observed += s.case_exposed;
    double total = 0.0;
    std::function<void(std::size_t, std::int64_t, double)> go = [&](std::size_t i,
                                                                    std::int64_t count,
                                                                    double p) {
        if (i == sets.size()) {
            if (count >= observed) total += p;
            return;
        }
        const auto& s = sets[i];
        for (int pos = 0; pos < s.size; ++pos) {
            // The first m positions hold the exposed subjects.
            go(i + 1, count + (pos < s.exposed_count ? 1 : 0), p / s.size);
        }
    };
    go(0, 0, 1.0);
    return total;
}

EmpiricalPmf empirical_pmf_m(const FavorableModel& model, std::int64_t draws, std::uint64_t seed,
                             bool narrow_only) {
    auto rng = replicate_engine(seed, 0);
    const Study study = generate_study(model, draws, rng);
    EmpiricalPmf out;
    out.freq.assign(static_cast<std::size_t>(model.J) + 1, 0.0);
    for (const auto& s : study.sets()) {
        if (narrow_only && !s.is_narrow) continue;
        out.freq[static_cast<std::size_t>(s.exposed_count)] += 1.0;
        ++out.n;
    }
    for (auto& f : out.freq) f /= static_cast<double>(out.n);
    return out;
}

double grid_gamma_star(const Study& study, TestKind test, double theta,
                       const GammaSearch& search) {
    auto rejects = [&](double g) {
        return worst_case_p(study, test, g, theta, search) <= search.alpha;
    };
    if (!rejects(1.0)) return 0.0;
    auto scan = [&](double from, double step, double limit) {
        double last = from;
        for (std::int64_t i = 1;; ++i) {
            const double g = from + static_cast<double>(i) * step;
            if (g > limit || !rejects(g)) break;
            last = g;
        }
        return last;
    };
    const double coarse = scan(1.0, 1e-2, search.gamma_max);
    return scan(coarse, 1e-5, std::min(coarse + 1e-2, search.gamma_max));
}

}  // namespace casesens::testkit
