#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "casesens/inference.hpp"
#include "casesens/power.hpp"
#include "casesens/study.hpp"

namespace casesens {

struct SimConfig {
    FavorableModel model;
    std::int64_t I = 18;
    std::int64_t reps = 3000;
    std::uint64_t seed = 20240101;
    double alpha = 0.05;
    double gamma = 1.0;
    double theta = 1.0;
    Method method = Method::Normal;

    void validate() const;
};

struct SimResult {
    double power_broad = 0.0;
    double power_narrow = 0.0;
    double power_combined = 0.0;
    double mean_narrow_sets = 0.0;
    std::int64_t reps = 0;
    double stderr_broad = 0.0;
    double stderr_narrow = 0.0;
    double stderr_combined = 0.0;
    // Reps that produced no narrow sets; counted as narrow non-rejections.
    std::int64_t zero_narrow_reps = 0;

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

// Uniform on [0, 1) from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Generator for replicate `rep` of a run seeded with `seed`.
std::mt19937_64 replicate_engine(std::uint64_t seed, std::uint64_t rep);

// I matched sets drawn from the favorable model: the broad case's exposure from
// p_b, referents' exposures from the referent probability, and the case's
// narrow flag from eta_t or eta_c depending on its exposure.
Study generate_study(const FavorableModel& model, std::int64_t I, std::mt19937_64& rng);

// Rejection rates over config.reps simulated studies. Results do not depend on
// the thread count.
SimResult simulate_power(const SimConfig& config, unsigned threads = 1);

std::vector<SimResult> power_sweep(const std::vector<SimConfig>& configs, unsigned threads = 1);

// Table with one row per config: gamma, theta, I, b_C, b_T, eta_C, eta_T,
// E_narrow, ds_broad, ds_narrow, power_broad, power_narrow, power_combined
// (percent, one decimal), reps, zero_narrow_reps.
void write_power_table_csv(std::ostream& out, const std::vector<SimConfig>& configs,
                           const std::vector<SimResult>& results);

}  // namespace casesens
