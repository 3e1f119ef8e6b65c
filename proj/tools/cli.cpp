#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "casesens/csv.hpp"
#include "casesens/error.hpp"
#include "casesens/frontier.hpp"
#include "casesens/inference.hpp"
#include "casesens/matching.hpp"
#include "casesens/parallel.hpp"
#include "casesens/power.hpp"
#include "casesens/simulation.hpp"
#include "casesens/study.hpp"

namespace casesens::cli {

namespace {

using json = nlohmann::ordered_json;

struct ModelFlags {
    FavorableModel model;

    void attach(CLI::App* cmd) {
        cmd->add_option("--pi", model.pi, "Pr(exposed)")->capture_default_str();
        cmd->add_option("--bt", model.b_t, "Pr(broad case | exposed)")->capture_default_str();
        cmd->add_option("--bc", model.b_c, "Pr(broad case | unexposed)")->capture_default_str();
        cmd->add_option("--eta-t", model.eta_t, "Pr(narrow | broad case, exposed)")
            ->capture_default_str();
        cmd->add_option("--eta-c", model.eta_c, "Pr(narrow | broad case, unexposed)")
            ->capture_default_str();
        cmd->add_option("--J", model.J, "matched set size")->capture_default_str();
    }
};

json model_json(const FavorableModel& m) {
    return json{{"pi", m.pi}, {"b_t", m.b_t},     {"b_c", m.b_c},
                {"eta_t", m.eta_t}, {"eta_c", m.eta_c}, {"J", m.J}};
}

json bounds_json(TestKind test, const SensitivityParams& params, Alternative alt,
                 const PValueBounds& b) {
    json j{{"test", to_string(test)},
           {"gamma", params.gamma},
           {"theta", params.theta},
           {"theta_sense", to_string(params.theta_sense)},
           {"alternative", to_string(alt)},
           {"method", to_string(b.method)},
           {"statistic", b.statistic},
           {"n_sets", b.n_sets_used},
           {"p_lower", b.lower},
           {"p_upper", b.upper}};
    if (b.zero_variance) j["zero_variance"] = true;
    return j;
}

void emit_error(std::ostream& err, std::string_view code, const std::string& message) {
    err << json{{"error", code}, {"message", message}}.dump() << '\n';
}

void emit_warning(std::ostream& err, const std::string& message) {
    err << json{{"warning", message}}.dump() << '\n';
}

Study load_study(const std::string& path) { return parse_study(read_subject_csv_file(path)); }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    f << content;
}

struct AnalyzeArgs {
    std::string data;
    double gamma = 1.0;
    double theta = 1.0;
    std::string theta_sense = "upper_only";
    std::string test = "broad";
    std::string alternative = "greater";
    std::string method = "exact";
};

void run_analyze(const AnalyzeArgs& a, std::ostream& out) {
    const SensitivityParams params{a.gamma, a.theta, parse_theta_sense(a.theta_sense)};
    params.validate();
    const TestKind test = parse_test_kind(a.test);
    const Alternative alt = parse_alternative(a.alternative);
    const Method method = parse_method(a.method);
    const Study study = load_study(a.data);

    json j;
    switch (test) {
        case TestKind::Broad:
            j = bounds_json(test, params, alt, broad_test(study, a.gamma, alt, method));
            break;
        case TestKind::Narrow:
            j = bounds_json(test, params, alt, narrow_test(study, params, alt, method));
            break;
        case TestKind::Combined: {
            const CombinedResult r = combined_test(study, params, alt, method);
            j = json{{"test", to_string(test)},
                     {"gamma", params.gamma},
                     {"theta", params.theta},
                     {"theta_sense", to_string(params.theta_sense)},
                     {"alternative", to_string(alt)},
                     {"method", to_string(method)},
                     {"p_broad_upper", r.p_broad_upper},
                     {"p_narrow_upper", r.p_narrow_upper},
                     {"bonferroni_p", r.bonferroni_p},
                     {"components", json::array({bounds_json(TestKind::Broad, params, alt, r.broad),
                                                 bounds_json(TestKind::Narrow, params, alt,
                                                             r.narrow)})}};
            break;
        }
    }
    out << j.dump(2) << '\n';
}

struct FrontierArgs {
    std::string data;
    double theta_min = 1.0;
    double theta_max = 2.0;
    double theta_step = 0.01;
    double alpha = 0.05;
    double gamma_max = 100.0;
    double tolerance = 1e-4;
    std::string method = "exact";
    std::string theta_sense = "upper_only";
    unsigned threads = 0;
};

void run_frontier(const FrontierArgs& a, std::ostream& out) {
    GammaSearch search;
    search.alpha = a.alpha;
    search.gamma_max = a.gamma_max;
    search.tolerance = a.tolerance;
    search.method = parse_method(a.method);
    search.theta_sense = parse_theta_sense(a.theta_sense);
    const Study study = load_study(a.data);
    const unsigned threads = a.threads == 0 ? default_thread_count() : a.threads;
    const auto points =
        frontier_curve(study, a.theta_min, a.theta_max, a.theta_step, search, threads);
    write_frontier_csv(out, points, a.gamma_max);
}

struct PowerArgs {
    ModelFlags model;
    double gamma = 1.0;
    double theta = 1.0;
    double alpha = 0.05;
    std::int64_t I = 18;
};

void run_power(const PowerArgs& a, std::ostream& out, std::ostream& err) {
    const FavorableModel& m = a.model.model;
    const PowerSpec spec{m, a.I, a.gamma, a.theta, a.alpha};
    json j{{"model", model_json(m)},
           {"gamma", a.gamma},
           {"theta", a.theta},
           {"alpha", a.alpha},
           {"I", a.I},
           {"power_broad", power_broad(spec)},
           {"power_narrow", power_narrow(spec)},
           {"design_gamma_broad", design_sensitivity(m, std::nullopt, CaseDefinition::Broad)},
           {"design_gamma_narrow", design_sensitivity(m, a.theta, CaseDefinition::Narrow)},
           {"expected_narrow_sets", expected_narrow_sets(m, a.I)},
           {"favorable_condition", favorable_condition_check(m, a.theta)}};
    for (const auto& w : m.warnings()) emit_warning(err, w);
    out << j.dump(2) << '\n';
}

struct DesignArgs {
    ModelFlags model;
    std::optional<double> theta;
    std::string definition = "broad";
    bool numeric = false;
};

void run_design(const DesignArgs& a, std::ostream& out) {
    const CaseDefinition def = parse_case_definition(a.definition);
    const double ds = a.numeric ? design_sensitivity_numeric(a.model.model, a.theta, def)
                                : design_sensitivity(a.model.model, a.theta, def);
    out << csv::format_fixed(ds, 3) << '\n';
}

struct SampleSizeArgs {
    ModelFlags model;
    double gamma = 1.0;
    std::optional<double> theta;
    double alpha = 0.05;
    double target = 0.8;
    std::string definition = "broad";
};

void run_sample_size(const SampleSizeArgs& a, std::ostream& out) {
    const CaseDefinition def = parse_case_definition(a.definition);
    out << required_sets(a.model.model, a.gamma, a.theta, a.alpha, a.target, def) << '\n';
}

struct SimulateArgs {
    ModelFlags model;
    std::vector<std::int64_t> I{18};
    std::vector<double> gamma{1.0};
    std::vector<double> theta{1.0};
    std::int64_t reps = 3000;
    std::uint64_t seed = 20240101;
    double alpha = 0.05;
    std::string method = "normal";
    unsigned threads = 0;
};

void run_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    const Method method = parse_method(a.method);
    std::vector<SimConfig> configs;
    for (double g : a.gamma) {
        for (double t : a.theta) {
            for (std::int64_t n : a.I) {
                SimConfig c;
                c.model = a.model.model;
                c.I = n;
                c.reps = a.reps;
                c.seed = a.seed;
                c.alpha = a.alpha;
                c.gamma = g;
                c.theta = t;
                c.method = method;
                c.validate();
                configs.push_back(c);
            }
        }
    }
    const unsigned threads = a.threads == 0 ? default_thread_count() : a.threads;
    const auto results = power_sweep(configs, threads);
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].zero_narrow_reps > 0) {
            emit_warning(err, std::to_string(results[i].zero_narrow_reps) + " of " +
                                  std::to_string(results[i].reps) + " reps at row " +
                                  std::to_string(i + 1) +
                                  " had no narrow sets; counted as narrow non-rejections");
        }
    }
    write_power_table_csv(out, configs, results);
}

struct TableArgs {
    std::string data;
    std::string cases;
    std::string referents;
    CovariateColumns columns;

    void attach(CLI::App* cmd) {
        cmd->add_option("--data", data, "CSV with a group column (case/referent)");
        cmd->add_option("--cases", cases, "CSV of cases");
        cmd->add_option("--referents", referents, "CSV of referents");
        cmd->add_option("--id", columns.id, "subject id column")->capture_default_str();
        cmd->add_option("--group", columns.group, "group column")->capture_default_str();
        cmd->add_option("--exact", columns.keys, "exact-match columns")->delimiter(',');
        cmd->add_option("--covariates", columns.covariates, "numeric covariate columns")
            ->delimiter(',')
            ->required();
    }

    CovariateTable load() const {
        const bool single = !data.empty();
        const bool pair = !cases.empty() || !referents.empty();
        if (single == pair || (pair && (cases.empty() || referents.empty()))) {
            throw Error(ErrorCode::InvalidArgument,
                        "give either --data or both --cases and --referents");
        }
        if (single) return covariate_table_from_csv(csv::read_file(data), columns);
        return covariate_table_from_csv(csv::read_file(cases), csv::read_file(referents),
                                        columns);
    }
};

struct MatchArgs {
    TableArgs table;
    std::size_t k = 1;
    std::string balance_out;
};

void run_match(const MatchArgs& a, std::ostream& out, std::ostream& err) {
    const CovariateTable table = a.table.load();
    const MatchResult result = optimal_match(table, a.k);
    for (const auto& c : result.dropped_columns) {
        emit_warning(err, "constant covariate '" + c + "' dropped");
    }
    if (result.singular) emit_warning(err, "rank covariance is singular; pseudo-inverse used");
    for (const auto& c : result.unmatched_cases) {
        emit_warning(err, "case '" + c + "' unmatched: too few referents in its stratum");
    }
    write_matched_sets_csv(out, result);
    if (!a.balance_out.empty()) {
        std::ostringstream balance;
        write_balance_csv(balance, balance_table(table, result));
        write_text_file(a.balance_out, balance.str());
    }
}

struct BalanceArgs {
    TableArgs table;
    std::string matched;
};

void run_balance(const BalanceArgs& a, std::ostream& out, std::ostream& err) {
    const CovariateTable table = a.table.load();
    const MatchResult result = read_matched_sets_csv(csv::read_file(a.matched));
    const auto rows = balance_table(table, result);
    for (const auto& r : rows) {
        if (r.zero_pooled_sd) {
            emit_warning(err, "covariate '" + r.covariate + "' has zero pooled SD");
        }
    }
    write_balance_csv(out, rows);
}

struct SummaryArgs {
    std::string data;
};

int exit_status(ErrorCode code) {
    return is_statistical(code) ? kStatisticalError : kDataError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sensitivity analysis for matched case-referent studies", "casesens"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "casesens 1.0.0");

    AnalyzeArgs analyze;
    auto* c_analyze = app.add_subcommand("analyze", "p-value bounds for one study");
    c_analyze->add_option("--data", analyze.data, "subject CSV")->required();
    c_analyze->add_option("--gamma", analyze.gamma)->capture_default_str();
    c_analyze->add_option("--theta", analyze.theta)->capture_default_str();
    c_analyze->add_option("--theta-sense", analyze.theta_sense, "upper_only or symmetric")
        ->capture_default_str();
    c_analyze->add_option("--test", analyze.test, "broad, narrow or combined")
        ->capture_default_str();
    c_analyze->add_option("--alternative", analyze.alternative, "greater, less or two-sided")
        ->capture_default_str();
    c_analyze->add_option("--method", analyze.method, "exact or normal")->capture_default_str();

    SummaryArgs summary;
    auto* c_summary = app.add_subcommand("summary", "study summary as JSON");
    c_summary->add_option("--data", summary.data, "subject CSV")->required();

    FrontierArgs frontier;
    auto* c_frontier = app.add_subcommand("frontier", "largest rejecting Gamma over a theta grid");
    c_frontier->add_option("--data", frontier.data, "subject CSV")->required();
    c_frontier->add_option("--theta-min", frontier.theta_min)->capture_default_str();
    c_frontier->add_option("--theta-max", frontier.theta_max)->capture_default_str();
    c_frontier->add_option("--theta-step", frontier.theta_step)->capture_default_str();
    c_frontier->add_option("--alpha", frontier.alpha)->capture_default_str();
    c_frontier->add_option("--gamma-max", frontier.gamma_max)->capture_default_str();
    c_frontier->add_option("--tolerance", frontier.tolerance)->capture_default_str();
    c_frontier->add_option("--method", frontier.method)->capture_default_str();
    c_frontier->add_option("--theta-sense", frontier.theta_sense)->capture_default_str();
    c_frontier->add_option("--threads", frontier.threads, "0 = CASESENS_THREADS or all cores");

    PowerArgs power;
    auto* c_power = app.add_subcommand("power", "formula power under the favorable model");
    power.model.attach(c_power);
    c_power->add_option("--gamma", power.gamma)->capture_default_str();
    c_power->add_option("--theta", power.theta)->capture_default_str();
    c_power->add_option("--alpha", power.alpha)->capture_default_str();
    c_power->add_option("--I", power.I, "broad-case matched sets")->capture_default_str();

    DesignArgs design;
    auto* c_design = app.add_subcommand("design-sensitivity", "design sensitivity");
    design.model.attach(c_design);
    c_design->add_option("--theta", design.theta, "required for the narrow definition");
    c_design->add_option("--definition", design.definition, "broad or narrow")
        ->capture_default_str();
    c_design->add_flag("--numeric", design.numeric, "solve numerically instead of closed form");

    SampleSizeArgs sample;
    auto* c_sample = app.add_subcommand("sample-size", "broad-case sets for a target power");
    sample.model.attach(c_sample);
    c_sample->add_option("--gamma", sample.gamma)->capture_default_str();
    c_sample->add_option("--theta", sample.theta, "required for the narrow definition");
    c_sample->add_option("--alpha", sample.alpha)->capture_default_str();
    c_sample->add_option("--target", sample.target)->capture_default_str();
    c_sample->add_option("--definition", sample.definition)->capture_default_str();

    SimulateArgs simulate;
    auto* c_simulate = app.add_subcommand("simulate", "simulated power table");
    simulate.model.attach(c_simulate);
    c_simulate->add_option("--I", simulate.I, "one or more set counts")->delimiter(',')
        ->capture_default_str();
    c_simulate->add_option("--gamma", simulate.gamma, "one or more")->delimiter(',')
        ->capture_default_str();
    c_simulate->add_option("--theta", simulate.theta, "one or more")->delimiter(',')
        ->capture_default_str();
    c_simulate->add_option("--reps", simulate.reps)->capture_default_str();
    c_simulate->add_option("--seed", simulate.seed)->capture_default_str();
    c_simulate->add_option("--alpha", simulate.alpha)->capture_default_str();
    c_simulate->add_option("--method", simulate.method)->capture_default_str();
    c_simulate->add_option("--threads", simulate.threads, "0 = CASESENS_THREADS or all cores");

    MatchArgs match;
    auto* c_match = app.add_subcommand("match", "optimal 1:k matching");
    match.table.attach(c_match);
    c_match->add_option("--k", match.k, "referents per case")->capture_default_str();
    c_match->add_option("--balance-out", match.balance_out, "also write a balance CSV here");

    BalanceArgs balance;
    auto* c_balance = app.add_subcommand("balance", "covariate balance of matched sets");
    balance.table.attach(c_balance);
    c_balance->add_option("--matched", balance.matched, "matched-sets CSV")->required();

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("casesens");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "UsageError", e.what());
        return kDataError;
    }

    try {
        if (c_analyze->parsed()) {
            run_analyze(analyze, out);
        } else if (c_summary->parsed()) {
            out << summary_to_json(summarize(load_study(summary.data))) << '\n';
        } else if (c_frontier->parsed()) {
            run_frontier(frontier, out);
        } else if (c_power->parsed()) {
            run_power(power, out, err);
        } else if (c_design->parsed()) {
            run_design(design, out);
        } else if (c_sample->parsed()) {
            run_sample_size(sample, out);
        } else if (c_simulate->parsed()) {
            run_simulate(simulate, out, err);
        } else if (c_match->parsed()) {
            run_match(match, out, err);
        } else if (c_balance->parsed()) {
            run_balance(balance, out, err);
        }
    } catch (const Error& e) {
        emit_error(err, error_code_name(e.code()), e.what());
        return exit_status(e.code());
    } catch (const std::exception& e) {
        emit_error(err, "InternalError", e.what());
        return kInternalError;
    }
    return kOk;
}

}  // namespace casesens::cli
