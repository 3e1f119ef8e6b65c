#include "casesens/frontier.hpp"

#include <cmath>
#include <ostream>

#include "casesens/csv.hpp"
#include "casesens/error.hpp"
#include "casesens/parallel.hpp"

namespace casesens {

double worst_case_p(const Study& study, TestKind test, double gamma, double theta,
                    const GammaSearch& search) {
    const SensitivityParams params{gamma, theta, search.theta_sense};
    switch (test) {
        case TestKind::Broad:
            return broad_test(study, gamma, Alternative::Greater, search.method).upper;
        case TestKind::Narrow:
            return narrow_test(study, params, Alternative::Greater, search.method).upper;
        case TestKind::Combined:
            return combined_test(study, params, Alternative::Greater, search.method)
                .bonferroni_p;
    }
    return 1.0;
}

namespace {

void validate_search(const GammaSearch& search) {
    if (!(search.alpha > 0.0 && search.alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    }
    if (!(search.gamma_max > 1.0) || !(search.tolerance > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "need gamma_max > 1 and tolerance > 0");
    }
}

// Whether the test rejects at level alpha for every bias up to gamma.
bool rejects(const Study& study, TestKind test, double gamma, double theta,
             const GammaSearch& search) {
    if (test != TestKind::Combined) {
        return worst_case_p(study, test, gamma, theta, search) <= search.alpha;
    }
    // Bonferroni: 2 * min(pb, pn) <= alpha  <=>  pb <= alpha/2 or pn <= alpha/2.
    const double half = search.alpha / 2.0;
    if (worst_case_p(study, TestKind::Broad, gamma, theta, search) <= half) return true;
    return worst_case_p(study, TestKind::Narrow, gamma, theta, search) <= half;
}

}  // namespace

GammaStar gamma_star(const Study& study, TestKind test, double theta,
                     const GammaSearch& search) {
    validate_search(search);
    if (!(theta >= 1.0)) throw Error(ErrorCode::InvalidTheta, "theta must be >= 1");
    if (test != TestKind::Broad && study.narrow_count() == 0) {
        throw Error(ErrorCode::NoNarrowSets, "study has no narrow-case matched sets");
    }
    if (!rejects(study, test, 1.0, theta, search)) {
        return {1.0, GammaStarStatus::NoRejectionAtOne};
    }
    if (rejects(study, test, search.gamma_max, theta, search)) {
        return {search.gamma_max, GammaStarStatus::NotBracketed};
    }
    // The worst-case p-value is nondecreasing in gamma, so the rejecting
    // region is an interval [1, gamma*].
    double lo = 1.0;
    double hi = search.gamma_max;
    while (hi - lo > search.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (rejects(study, test, mid, theta, search)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, GammaStarStatus::Found};
}

std::vector<FrontierPoint> frontier_curve(const Study& study, double theta_min, double theta_max,
                                          double step, const GammaSearch& search,
                                          unsigned threads) {
    if (!(theta_min >= 1.0 && theta_max >= theta_min)) {
        throw Error(ErrorCode::InvalidTheta, "need 1 <= theta_min <= theta_max");
    }
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta step must be positive");
    validate_search(search);
    if (study.narrow_count() == 0) {
        throw Error(ErrorCode::NoNarrowSets, "study has no narrow-case matched sets");
    }

    const auto count =
        static_cast<std::size_t>(std::floor((theta_max - theta_min) / step + 1e-9)) + 1;
    std::vector<FrontierPoint> points(count);
    const GammaStar broad = gamma_star(study, TestKind::Broad, 1.0, search);
    parallel_for(count, threads, [&](std::size_t i) {
        auto& pt = points[i];
        pt.theta = theta_min + static_cast<double>(i) * step;
        pt.broad = broad;
        pt.narrow = gamma_star(study, TestKind::Narrow, pt.theta, search);
        pt.combined = gamma_star(study, TestKind::Combined, pt.theta, search);
    });
    return points;
}

namespace {

std::string format_gamma(const GammaStar& g, double gamma_max) {
    switch (g.status) {
        case GammaStarStatus::NoRejectionAtOne: return "NA";
        case GammaStarStatus::NotBracketed: return ">=" + csv::format_fixed(gamma_max, 1);
        case GammaStarStatus::Found: break;
    }
    return csv::format_fixed(g.gamma, 6);
}

}  // namespace

void write_frontier_csv(std::ostream& out, const std::vector<FrontierPoint>& points,
                        double gamma_max) {
    csv::write_row(out, {"theta", "gamma_star_broad", "gamma_star_narrow", "gamma_star_combined"});
    for (const auto& p : points) {
        csv::write_row(out, {csv::format_fixed(p.theta, 4), format_gamma(p.broad, gamma_max),
                             format_gamma(p.narrow, gamma_max),
                             format_gamma(p.combined, gamma_max)});
    }
}

}  // namespace casesens
