#pragma once

#include <string_view>

namespace casesens {

// How the selection parameter bounds theta_T / theta_C.
enum class ThetaSense {
    UpperOnly,  // 1 <= theta_T/theta_C <= Theta
    Symmetric,  // 1/Theta <= theta_T/theta_C <= Theta
};

std::string_view to_string(ThetaSense sense) noexcept;
ThetaSense parse_theta_sense(std::string_view text);

// Sensitivity parameters: Gamma bounds unmeasured confounding of exposure,
// Theta bounds the effect of exposure on narrow-case status among always-cases.
struct SensitivityParams {
    double gamma = 1.0;
    double theta = 1.0;
    ThetaSense theta_sense = ThetaSense::UpperOnly;

    // Throws InvalidGamma / InvalidTheta.
    void validate() const;
};

struct ProbBounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Sharp bounds on Pr(case exposed) for a set of size J with m exposed subjects,
// under confounding of magnitude at most gamma.
ProbBounds broad_bounds(int m, int J, double gamma);

// Same for a narrow-case set; the upper bound inflates gamma by theta, the
// lower bound does so only when theta_sense is symmetric.
ProbBounds narrow_bounds(int m, int J, const SensitivityParams& params);

// Theta implied by allowing `fraction` of exposed always-cases counted as narrow
// to have been displaced from non-narrow status: 1 / (1 - fraction).
double theta_from_displacement(double fraction);
double displacement_from_theta(double theta);

}  // namespace casesens
