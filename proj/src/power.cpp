#include "casesens/power.hpp"

#include <cmath>

#include "casesens/error.hpp"
#include "casesens/normal.hpp"

namespace casesens {

std::string_view to_string(CaseDefinition def) noexcept {
    return def == CaseDefinition::Narrow ? "narrow" : "broad";
}

CaseDefinition parse_case_definition(std::string_view text) {
    if (text == "broad") return CaseDefinition::Broad;
    if (text == "narrow") return CaseDefinition::Narrow;
    throw Error(ErrorCode::InvalidArgument, "unknown case definition '" + std::string(text) + "'");
}

namespace {

bool open_unit(double p) { return p > 0.0 && p < 1.0; }

double choose(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// Shared pmf of m given the case; weights scale the exposed / unexposed case
// terms (1, 1 for broad; eta_t, eta_c for narrow).
double pmf_m(const FavorableModel& m, int t, double w_t, double w_c) {
    m.validate();
    const int J = m.J;
    if (t < 0 || t > J) throw Error(ErrorCode::InvalidCount, "t outside [0, J]");
    const double pi = m.pi;
    const double ref_base = (1.0 - m.b_t) * pi + (1.0 - m.b_c) * (1.0 - pi);
    const double denom =
        (m.b_t * w_t * pi + m.b_c * w_c * (1.0 - pi)) * std::pow(ref_base, J - 1);
    double num = 0.0;
    if (t == 0) {
        num = std::pow(1.0 - pi, J) * m.b_c * w_c * std::pow(1.0 - m.b_c, J - 1);
    } else if (t == J) {
        num = std::pow(pi, J) * m.b_t * w_t * std::pow(1.0 - m.b_t, J - 1);
    } else {
        num = std::pow(pi, t) * std::pow(1.0 - pi, J - t) *
              (m.b_t * w_t * choose(J - 1, t - 1) * std::pow(1.0 - m.b_t, t - 1) *
                   std::pow(1.0 - m.b_c, J - t) +
               m.b_c * w_c * choose(J - 1, t) * std::pow(1.0 - m.b_t, t) *
                   std::pow(1.0 - m.b_c, J - 1 - t));
    }
    return num / denom;
}

void check_theta(double theta) {
    if (!(theta >= 1.0) || std::isinf(theta)) {
        throw Error(ErrorCode::InvalidTheta, "theta must be a finite value >= 1");
    }
}

void check_gamma(double gamma) {
    if (!(gamma >= 1.0) || std::isinf(gamma)) {
        throw Error(ErrorCode::InvalidGamma, "gamma must be a finite value >= 1");
    }
}

double require_theta(std::optional<double> theta, CaseDefinition def) {
    if (def == CaseDefinition::Broad) return 1.0;
    if (!theta) throw Error(ErrorCode::InvalidArgument, "narrow definition requires theta");
    check_theta(*theta);
    return *theta;
}

}  // namespace

void FavorableModel::validate() const {
    if (!open_unit(pi) || !open_unit(b_t) || !open_unit(b_c) || !open_unit(eta_t) ||
        !open_unit(eta_c)) {
        throw Error(ErrorCode::InvalidArgument, "model probabilities must lie in (0, 1)");
    }
    if (J < 2 || J > kMaxSetSize) {
        throw Error(ErrorCode::InvalidArgument, "set size J must lie in [2, 30]");
    }
}

std::vector<std::string> FavorableModel::warnings() const {
    std::vector<std::string> out;
    if (b_t < b_c) out.emplace_back("b_t < b_c: exposure lowers broad-case risk");
    if (eta_t < eta_c) out.emplace_back("eta_t < eta_c: exposure lowers narrow-case share");
    return out;
}

double FavorableModel::narrow_fraction() const {
    validate();
    return (eta_t * b_t * pi + eta_c * b_c * (1.0 - pi)) / (b_t * pi + b_c * (1.0 - pi));
}

double pmf_m_broad(const FavorableModel& model, int t) { return pmf_m(model, t, 1.0, 1.0); }

double pmf_m_narrow(const FavorableModel& model, int t) {
    return pmf_m(model, t, model.eta_t, model.eta_c);
}

double case_exposure_prob(const FavorableModel& m, CaseDefinition def) {
    m.validate();
    const double w_t = def == CaseDefinition::Narrow ? m.eta_t : 1.0;
    const double w_c = def == CaseDefinition::Narrow ? m.eta_c : 1.0;
    const double exposed = m.b_t * w_t * m.pi;
    return exposed / (exposed + m.b_c * w_c * (1.0 - m.pi));
}

double referent_exposure_prob(const FavorableModel& m) {
    m.validate();
    const double exposed = (1.0 - m.b_t) * m.pi;
    return exposed / (exposed + (1.0 - m.b_c) * (1.0 - m.pi));
}

UpperBoundMoments upper_bound_moments(const FavorableModel& model, double gamma, double theta,
                                      CaseDefinition def) {
    check_gamma(gamma);
    check_theta(theta);
    const double g = def == CaseDefinition::Narrow ? gamma * theta : gamma;
    UpperBoundMoments out;
    for (int t = 0; t <= model.J; ++t) {
        const double w = def == CaseDefinition::Narrow ? pmf_m_narrow(model, t)
                                                       : pmf_m_broad(model, t);
        const double p = t == 0 ? 0.0 : (t == model.J ? 1.0 : t * g / (t * g + (model.J - t)));
        out.mean += w * p;
        out.mean_bernoulli_var += w * p * (1.0 - p);
    }
    return out;
}

double power_at(const FavorableModel& model, double sets, double gamma, double theta,
                double alpha, CaseDefinition def) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    }
    if (!(sets > 0.0)) throw Error(ErrorCode::InvalidArgument, "number of sets must be positive");
    const double p = case_exposure_prob(model, def);
    const auto moments = upper_bound_moments(model, gamma, theta, def);
    const double n = def == CaseDefinition::Narrow ? model.narrow_fraction() * sets : sets;
    const double z = normal_quantile(1.0 - alpha);
    const double numer = std::sqrt(n) * (p - moments.mean) - z * std::sqrt(moments.mean_bernoulli_var);
    return normal_cdf(numer / std::sqrt(p * (1.0 - p)));
}

double power_broad(const PowerSpec& spec) {
    if (spec.I < 1) throw Error(ErrorCode::InvalidArgument, "I must be >= 1");
    return power_at(spec.model, static_cast<double>(spec.I), spec.gamma, 1.0, spec.alpha,
                    CaseDefinition::Broad);
}

double power_narrow(const PowerSpec& spec) {
    if (spec.I < 1) throw Error(ErrorCode::InvalidArgument, "I must be >= 1");
    return power_at(spec.model, static_cast<double>(spec.I), spec.gamma, spec.theta, spec.alpha,
                    CaseDefinition::Narrow);
}

double expected_narrow_sets(const FavorableModel& model, std::int64_t I) {
    if (I < 1) throw Error(ErrorCode::InvalidArgument, "I must be >= 1");
    return model.narrow_fraction() * static_cast<double>(I);
}

double design_sensitivity(const FavorableModel& model, std::optional<double> theta,
                          CaseDefinition def) {
    model.validate();
    const double th = require_theta(theta, def);
    const double broad = (model.b_t / (1.0 - model.b_t)) / (model.b_c / (1.0 - model.b_c));
    if (def == CaseDefinition::Broad) return broad;
    return broad * (model.eta_t / model.eta_c) / th;
}

double design_sensitivity_numeric(const FavorableModel& model, std::optional<double> theta,
                                  CaseDefinition def) {
    const double th = require_theta(theta, def);
    const double p = case_exposure_prob(model, def);
    auto gap = [&](double gamma) {
        return p - upper_bound_moments(model, gamma, th, def).mean;
    };
    double lo = 1.0;
    double hi = 1000.0;
    if (!(gap(lo) > 0.0) || !(gap(hi) < 0.0)) {
        throw Error(ErrorCode::NotBracketed, "design sensitivity not bracketed by [1, 1000]");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::int64_t required_sets(const FavorableModel& model, double gamma, std::optional<double> theta,
                           double alpha, double target_power, CaseDefinition def) {
    if (!(target_power > 0.0 && target_power < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "target power must lie in (0, 1)");
    }
    check_gamma(gamma);
    const double th = require_theta(theta, def);
    const double ds = design_sensitivity(model, theta, def);
    if (gamma >= ds) {
        throw Error(ErrorCode::Unattainable,
                    "gamma is at or above the design sensitivity; power tends to 0");
    }
    auto shortfall = [&](double sets) {
        return power_at(model, sets, gamma, th, alpha, def) - target_power;
    };
    if (shortfall(1.0) >= 0.0) return 1;
    // Power is increasing in I below the design sensitivity: bracket, then bisect.
    double lo = 1.0;
    double hi = 2.0;
    while (shortfall(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e13) {
            throw Error(ErrorCode::Unattainable, "target power not reached below 1e13 sets");
        }
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-9 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (shortfall(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const auto rounded = static_cast<std::int64_t>(std::llround(0.5 * (lo + hi)));
    return rounded < 1 ? 1 : rounded;
}

bool favorable_condition_check(const FavorableModel& model, double theta) {
    model.validate();
    check_theta(theta);
    const double ratio = model.eta_t / model.eta_c;
    // Relative slack absorbs representation error at the boundary ratio == theta.
    return ratio >= theta * (1.0 - 1e-12);
}

}  // namespace casesens
