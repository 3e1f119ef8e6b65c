#pragma once

#include <iosfwd>
#include <vector>

#include "casesens/bounds.hpp"
#include "casesens/inference.hpp"
#include "casesens/study.hpp"

namespace casesens {

enum class GammaStarStatus {
    Found,             // gamma is the largest Gamma still rejecting, within tolerance
    NoRejectionAtOne,  // the test does not reject even without bias
    NotBracketed,      // still rejects at the search ceiling; gamma = ceiling
};

struct GammaStar {
    double gamma = 1.0;
    GammaStarStatus status = GammaStarStatus::Found;
};

struct GammaSearch {
    double alpha = 0.05;
    double gamma_max = 100.0;
    double tolerance = 1e-4;
    Method method = Method::Exact;
    ThetaSense theta_sense = ThetaSense::UpperOnly;
};

// Worst-case (upper) one-sided p-value of `test` at (gamma, theta).
double worst_case_p(const Study& study, TestKind test, double gamma, double theta,
                    const GammaSearch& search);

// Largest Gamma at which the worst-case p-value is still <= alpha, found by
// bisection on [1, gamma_max]. The returned value is the last Gamma verified
// to reject. Throws NoNarrowSets for narrow/combined tests on a study without
// narrow sets.
GammaStar gamma_star(const Study& study, TestKind test, double theta,
                     const GammaSearch& search = {});

struct FrontierPoint {
    double theta = 1.0;
    GammaStar broad;
    GammaStar narrow;
    GammaStar combined;
};

// One point per theta in {theta_min, theta_min + step, ...} up to theta_max.
// Points are evaluated on `threads` workers; output order and values do not
// depend on the thread count.
std::vector<FrontierPoint> frontier_curve(const Study& study, double theta_min, double theta_max,
                                          double step, const GammaSearch& search = {},
                                          unsigned threads = 1);

// CSV with columns theta, gamma_star_broad, gamma_star_narrow, gamma_star_combined.
// Non-rejecting points print "NA"; points above the ceiling print ">=<ceiling>".
void write_frontier_csv(std::ostream& out, const std::vector<FrontierPoint>& points,
                        double gamma_max);

}  // namespace casesens
