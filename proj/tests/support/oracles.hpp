#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "casesens/assignment.hpp"
#include "casesens/bounds.hpp"
#include "casesens/frontier.hpp"
#include "casesens/power.hpp"
#include "casesens/study.hpp"

namespace casesens::testkit {

// Pr(sum >= k) by summing over all 2^n outcomes.
double enumerate_tail_ge(const std::vector<double>& probs, std::int64_t k);

// b-th elementary symmetric function of w.
double elementary_symmetric(const std::vector<double>& w, int b);

// Extremes of Pr(Y = 1 | narrow set) over u in {0,1}^J and the allowed ratios
// theta_T / theta_C, written with elementary symmetric functions of the
// referents' weights.
ProbBounds narrow_bounds_bruteforce(int m, int J, double gamma, double theta, ThetaSense sense);

// Minimum total cost over every way of giving each row k distinct columns.
double exhaustive_group_assignment(const CostMatrix& cost, std::size_t k);

// Randomization p-value Pr(T >= observed) by enumerating every position of the
// case within every set (each position equally likely).
double enumerate_randomization_p(const Study& study);

// Empirical pmf of m over `draws` simulated sets; narrow_only keeps narrow sets.
struct EmpiricalPmf {
    std::vector<double> freq;
    std::int64_t n = 0;
};
EmpiricalPmf empirical_pmf_m(const FavorableModel& model, std::int64_t draws, std::uint64_t seed,
                             bool narrow_only);

// Largest gamma that still rejects, by scanning upward from 1 in steps of 0.01
// and then in steps of 1e-5 inside the last coarse interval; 0 when the test
// does not reject at 1.
double grid_gamma_star(const Study& study, TestKind test, double theta, const GammaSearch& search);

}  // namespace casesens::testkit
