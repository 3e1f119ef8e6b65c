#include "casesens/bounds.hpp"

#include <cmath>
#include <string>

#include "casesens/error.hpp"

namespace casesens {

std::string_view to_string(ThetaSense sense) noexcept {
    return sense == ThetaSense::Symmetric ? "symmetric" : "upper_only";
}

ThetaSense parse_theta_sense(std::string_view text) {
    if (text == "upper_only" || text == "upper") return ThetaSense::UpperOnly;
    if (text == "symmetric") return ThetaSense::Symmetric;
    throw Error(ErrorCode::InvalidArgument, "unknown theta sense '" + std::string(text) + "'");
}

void SensitivityParams::validate() const {
    if (!(gamma >= 1.0) || std::isinf(gamma)) {
        throw Error(ErrorCode::InvalidGamma, "gamma must be a finite value >= 1");
    }
    if (!(theta >= 1.0) || std::isinf(theta)) {
        throw Error(ErrorCode::InvalidTheta, "theta must be a finite value >= 1");
    }
}

namespace {

void check_count(int m, int J) {
    if (J < 2) throw Error(ErrorCode::InvalidCount, "set size J must be >= 2");
    if (m < 0 || m > J) throw Error(ErrorCode::InvalidCount, "exposed count outside [0, J]");
}

// Case exposed with odds multiplied by g: m*g / (m*g + J - m).
double odds_up(int m, int J, double g) {
    if (m == 0) return 0.0;
    if (m == J) return 1.0;
    const double num = m * g;
    return num / (num + (J - m));
}

// Referents exposed with odds multiplied by g: m / (m + (J - m)*g).
double odds_down(int m, int J, double g) {
    if (m == 0) return 0.0;
    if (m == J) return 1.0;
    return m / (m + (J - m) * g);
}

}  // namespace

ProbBounds broad_bounds(int m, int J, double gamma) {
    check_count(m, J);
    SensitivityParams{gamma, 1.0}.validate();
    return {odds_down(m, J, gamma), odds_up(m, J, gamma)};
}

ProbBounds narrow_bounds(int m, int J, const SensitivityParams& params) {
    check_count(m, J);
    params.validate();
    const double upper_odds = params.theta * params.gamma;
    const double lower_odds =
        params.theta_sense == ThetaSense::Symmetric ? upper_odds : params.gamma;
    return {odds_down(m, J, lower_odds), odds_up(m, J, upper_odds)};
}

double theta_from_displacement(double fraction) {
    if (!(fraction >= 0.0 && fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "displacement fraction must lie in [0, 1)");
    }
    return 1.0 / (1.0 - fraction);
}

double displacement_from_theta(double theta) {
    if (!(theta >= 1.0) || std::isinf(theta)) {
        throw Error(ErrorCode::InvalidTheta, "theta must be a finite value >= 1");
    }
    return 1.0 - 1.0 / theta;
}

}  // namespace casesens
