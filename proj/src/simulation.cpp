#include "casesens/simulation.hpp"

#include <cmath>
#include <ostream>

#include "casesens/csv.hpp"
#include "casesens/error.hpp"
#include "casesens/parallel.hpp"

namespace casesens {

void SimConfig::validate() const {
    model.validate();
    if (I < 1) throw Error(ErrorCode::InvalidArgument, "I must be >= 1");
    if (reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    }
    SensitivityParams{gamma, theta, ThetaSense::UpperOnly}.validate();
}

std::mt19937_64 replicate_engine(std::uint64_t seed, std::uint64_t rep) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
    return std::mt19937_64(seq);
}

Study generate_study(const FavorableModel& model, std::int64_t I, std::mt19937_64& rng) {
    model.validate();
    if (I < 1) throw Error(ErrorCode::InvalidArgument, "I must be >= 1");
    const double p_case = case_exposure_prob(model, CaseDefinition::Broad);
    const double p_ref = referent_exposure_prob(model);
    std::vector<MatchedSet> sets;
    sets.reserve(static_cast<std::size_t>(I));
    for (std::int64_t i = 0; i < I; ++i) {
        MatchedSet s;
        s.set_id = i + 1;
        s.size = model.J;
        s.case_exposed = uniform01(rng) < p_case;
        s.exposed_count = s.case_exposed ? 1 : 0;
        for (int j = 1; j < model.J; ++j) {
            if (uniform01(rng) < p_ref) ++s.exposed_count;
        }
        s.is_narrow = uniform01(rng) < (s.case_exposed ? model.eta_t : model.eta_c);
        sets.push_back(s);
    }
    return Study(std::move(sets));
}

namespace {

struct RepOutcome {
    bool broad = false;
    bool narrow = false;
    bool combined = false;
    std::size_t narrow_sets = 0;
};

RepOutcome run_rep(const SimConfig& config, std::uint64_t rep) {
    auto rng = replicate_engine(config.seed, rep);
    const Study study = generate_study(config.model, config.I, rng);
    const SensitivityParams params{config.gamma, config.theta, ThetaSense::UpperOnly};
    RepOutcome out;
    out.narrow_sets = study.narrow_count();
    const double pb = broad_test(study, config.gamma, Alternative::Greater, config.method).upper;
    double pn = 1.0;
    if (out.narrow_sets > 0) {
        pn = narrow_test(study, params, Alternative::Greater, config.method).upper;
    }
    out.broad = pb <= config.alpha;
    out.narrow = out.narrow_sets > 0 && pn <= config.alpha;
    out.combined = bonferroni(pb, pn) <= config.alpha;
    return out;
}

double mc_stderr(double p, std::int64_t reps) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
}

}  // namespace

SimResult simulate_power(const SimConfig& config, unsigned threads) {
    config.validate();
    const auto reps = static_cast<std::size_t>(config.reps);
    std::vector<RepOutcome> outcomes(reps);
    parallel_for(reps, threads, [&](std::size_t r) { outcomes[r] = run_rep(config, r); });

    std::int64_t broad = 0, narrow = 0, combined = 0, zero = 0;
    double narrow_total = 0.0;
    for (const auto& o : outcomes) {
        broad += o.broad;
        narrow += o.narrow;
        combined += o.combined;
        zero += o.narrow_sets == 0;
        narrow_total += static_cast<double>(o.narrow_sets);
    }
    SimResult res;
    res.reps = config.reps;
    const auto n = static_cast<double>(config.reps);
    res.power_broad = static_cast<double>(broad) / n;
    res.power_narrow = static_cast<double>(narrow) / n;
    res.power_combined = static_cast<double>(combined) / n;
    res.mean_narrow_sets = narrow_total / n;
    res.stderr_broad = mc_stderr(res.power_broad, config.reps);
    res.stderr_narrow = mc_stderr(res.power_narrow, config.reps);
    res.stderr_combined = mc_stderr(res.power_combined, config.reps);
    res.zero_narrow_reps = zero;
    return res;
}

std::vector<SimResult> power_sweep(const std::vector<SimConfig>& configs, unsigned threads) {
    if (configs.empty()) throw Error(ErrorCode::InvalidArgument, "power sweep needs a config");
    std::vector<SimResult> out;
    out.reserve(configs.size());
    for (const auto& c : configs) out.push_back(simulate_power(c, threads));
    return out;
}

void write_power_table_csv(std::ostream& out, const std::vector<SimConfig>& configs,
                           const std::vector<SimResult>& results) {
    if (configs.size() != results.size()) {
        throw Error(ErrorCode::InvalidArgument, "configs and results differ in length");
    }
    csv::write_row(out, {"gamma", "theta", "I", "b_C", "b_T", "eta_C", "eta_T", "E_narrow",
                         "ds_broad", "ds_narrow", "power_broad", "power_narrow",
                         "power_combined", "reps", "zero_narrow_reps"});
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto& c = configs[i];
        const auto& r = results[i];
        const auto& m = c.model;
        csv::write_row(
            out, {csv::format_double(c.gamma), csv::format_double(c.theta), std::to_string(c.I),
                  csv::format_double(m.b_c), csv::format_double(m.b_t),
                  csv::format_double(m.eta_c), csv::format_double(m.eta_t),
                  std::to_string(std::llround(expected_narrow_sets(m, c.I))),
                  csv::format_fixed(design_sensitivity(m, std::nullopt, CaseDefinition::Broad), 1),
                  csv::format_fixed(design_sensitivity(m, c.theta, CaseDefinition::Narrow), 1),
                  csv::format_fixed(100.0 * r.power_broad, 1),
                  csv::format_fixed(100.0 * r.power_narrow, 1),
                  csv::format_fixed(100.0 * r.power_combined, 1), std::to_string(r.reps),
                  std::to_string(r.zero_narrow_reps)});
    }
}

}  // namespace casesens
