#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace casesens {

enum class CaseDefinition { Broad, Narrow };

std::string_view to_string(CaseDefinition def) noexcept;
CaseDefinition parse_case_definition(std::string_view text);

// IID generative model for exposure, broad-case status and narrow-case status:
//   Pr(Z = 1) = pi,
//   Pr(broad | Z = 1) = b_t,    Pr(broad | Z = 0) = b_c,
//   Pr(narrow | broad, Z = 1) = eta_t,  Pr(narrow | broad, Z = 0) = eta_c,
// with matched sets of size J built from one broad case and J - 1 referents.
struct FavorableModel {
    double pi = 1.0 / 3.0;
    double b_t = 0.3;
    double b_c = 0.1;
    double eta_t = 0.3;
    double eta_c = 0.15;
    int J = 6;

    static constexpr int kMaxSetSize = 30;

    // Throws InvalidArgument unless every probability lies in (0, 1) and 2 <= J <= 30.
    void validate() const;
    // Human-readable notes for parameter orderings the formulas allow but
    // that describe a protective or null exposure (b_t < b_c, eta_t < eta_c).
    std::vector<std::string> warnings() const;

    // Pr(narrow | broad case): share of broad-case sets expected to be narrow.
    double narrow_fraction() const;
};

// Pr(m_i = t | one broad case and J-1 referents).
double pmf_m_broad(const FavorableModel& model, int t);
// Same, additionally conditioning on the set being a narrow-case set.
double pmf_m_narrow(const FavorableModel& model, int t);

// Pr(case exposed): p_b (broad) or p_n (narrow), by Bayes' rule.
double case_exposure_prob(const FavorableModel& model, CaseDefinition def);
// Pr(referent exposed).
double referent_exposure_prob(const FavorableModel& model);

// E and E{p(1-p)} of the worst-case per-set probability m*g/(m*g + J - m)
// under the model's pmf of m, with g = gamma (broad) or gamma*theta (narrow).
struct UpperBoundMoments {
    double mean = 0.0;
    double mean_bernoulli_var = 0.0;
};
UpperBoundMoments upper_bound_moments(const FavorableModel& model, double gamma, double theta,
                                      CaseDefinition def);

struct PowerSpec {
    FavorableModel model;
    std::int64_t I = 1;
    double gamma = 1.0;
    double theta = 1.0;
    double alpha = 0.05;
};

// Large-sample power of the one-sided sensitivity analysis with no bias and a
// real treatment effect. The narrow version uses q*I expected narrow sets.
double power_broad(const PowerSpec& spec);
double power_narrow(const PowerSpec& spec);
// Same with a real-valued number of broad-case sets.
double power_at(const FavorableModel& model, double sets, double gamma, double theta,
                double alpha, CaseDefinition def);

// q * I.
double expected_narrow_sets(const FavorableModel& model, std::int64_t I);

// Closed-form design sensitivity: odds ratio of b_t vs b_c, times
// (eta_t / eta_c) / theta for the narrow definition.
double design_sensitivity(const FavorableModel& model, std::optional<double> theta,
                          CaseDefinition def);
// Root in Gamma of p - E(worst-case p) by bisection on [1, 1000]; throws NotBracketed.
double design_sensitivity_numeric(const FavorableModel& model, std::optional<double> theta,
                                  CaseDefinition def);

// Number of broad-case sets giving `target_power`: the root of power(I) = target
// over real I, rounded to the nearest integer (minimum 1). Throws Unattainable
// when gamma is at or above the design sensitivity.
std::int64_t required_sets(const FavorableModel& model, double gamma, std::optional<double> theta,
                           double alpha, double target_power, CaseDefinition def);

// eta_t / eta_c >= theta: the narrow definition has the larger design sensitivity.
bool favorable_condition_check(const FavorableModel& model, double theta);

}  // namespace casesens
