#include "casesens/matching.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include <Eigen/Dense>

#include "casesens/error.hpp"

namespace casesens {

void CovariateTable::validate() const {
    if (covariate_names.empty()) {
        throw Error(ErrorCode::InvalidArgument, "at least one numeric covariate is required");
    }
    std::set<std::string> seen;
    for (const auto& s : subjects) {
        if (!seen.insert(s.id).second) {
            throw Error(ErrorCode::DuplicateId, "duplicate subject id '" + s.id + "'");
        }
        if (s.keys.size() != key_names.size() || s.values.size() != covariate_names.size()) {
            throw Error(ErrorCode::ParseError, "subject '" + s.id + "' has the wrong row width");
        }
        for (double v : s.values) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::ParseError, "non-finite covariate for '" + s.id + "'");
            }
        }
    }
}

namespace {

// Average ranks, 1-based; ties share the mean rank.
std::vector<double> average_ranks(const std::vector<double>& x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

DistanceMatrix robust_mahalanobis(const CovariateTable& table) {
    table.validate();
    const std::size_t n = table.subjects.size();
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two subjects");

    DistanceMatrix out;
    std::vector<std::vector<double>> rank_cols;
    for (std::size_t c = 0; c < table.covariate_names.size(); ++c) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = table.subjects[i].values[c];
        const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        if (*lo == *hi) {
            out.dropped_columns.push_back(table.covariate_names[c]);
            continue;
        }
        rank_cols.push_back(average_ranks(col));
    }
    if (rank_cols.empty()) {
        throw Error(ErrorCode::ConstantColumn, "every numeric covariate is constant");
    }

    const auto p = static_cast<Eigen::Index>(rank_cols.size());
    Eigen::MatrixXd R(static_cast<Eigen::Index>(n), p);
    for (Eigen::Index c = 0; c < p; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            R(static_cast<Eigen::Index>(i), c) = rank_cols[static_cast<std::size_t>(c)][i];
        }
    }
    const Eigen::MatrixXd centered = R.rowwise() - R.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
    const double untied = static_cast<double>(n) * static_cast<double>(n + 1) / 12.0;
    const Eigen::VectorXd ratio = (untied / cov.diagonal().array()).sqrt().matrix();
    cov = ratio.asDiagonal() * cov * ratio.asDiagonal();

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(cov);
    out.singular = cod.rank() < p;
    const Eigen::MatrixXd icov = cod.pseudoInverse();

    for (std::size_t i = 0; i < n; ++i) {
        (table.subjects[i].is_case ? out.case_rows : out.referent_rows).push_back(i);
    }
    out.distances = CostMatrix(out.case_rows.size(), out.referent_rows.size());
    for (std::size_t a = 0; a < out.case_rows.size(); ++a) {
        const auto ci = static_cast<Eigen::Index>(out.case_rows[a]);
        for (std::size_t b = 0; b < out.referent_rows.size(); ++b) {
            const auto ri = static_cast<Eigen::Index>(out.referent_rows[b]);
            const Eigen::VectorXd d = (R.row(ci) - R.row(ri)).transpose();
            out.distances(a, b) = d.dot(icov * d);
        }
    }
    return out;
}

MatchResult optimal_match(const CovariateTable& table, std::size_t k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    const DistanceMatrix dm = robust_mahalanobis(table);

    // Stratum -> (case positions, referent positions) within the distance matrix.
    std::map<std::vector<std::string>, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
        strata;
    for (std::size_t a = 0; a < dm.case_rows.size(); ++a) {
        strata[table.subjects[dm.case_rows[a]].keys].first.push_back(a);
    }
    for (std::size_t b = 0; b < dm.referent_rows.size(); ++b) {
        const auto& keys = table.subjects[dm.referent_rows[b]].keys;
        auto it = strata.find(keys);
        if (it != strata.end()) it->second.second.push_back(b);
    }

    MatchResult out;
    out.singular = dm.singular;
    out.dropped_columns = dm.dropped_columns;
    for (const auto& [keys, members] : strata) {
        const auto& [cases, refs] = members;
        if (refs.size() < cases.size() * k) {
            for (std::size_t a : cases) {
                out.unmatched_cases.push_back(table.subjects[dm.case_rows[a]].id);
            }
            continue;
        }
        CostMatrix cost(cases.size(), refs.size());
        for (std::size_t a = 0; a < cases.size(); ++a) {
            for (std::size_t b = 0; b < refs.size(); ++b) {
                cost(a, b) = dm.distances(cases[a], refs[b]);
            }
        }
        const GroupAssignment ga = solve_group_assignment(cost, k);
        out.total_distance += ga.total;
        for (std::size_t a = 0; a < cases.size(); ++a) {
            MatchedCase mc;
            mc.case_id = table.subjects[dm.case_rows[cases[a]]].id;
            for (std::size_t b : ga.row_to_cols[a]) {
                mc.referent_ids.push_back(table.subjects[dm.referent_rows[refs[b]]].id);
            }
            std::sort(mc.referent_ids.begin(), mc.referent_ids.end());
            out.sets.push_back(std::move(mc));
        }
    }
    std::sort(out.sets.begin(), out.sets.end(),
              [](const MatchedCase& x, const MatchedCase& y) { return x.case_id < y.case_id; });
    std::sort(out.unmatched_cases.begin(), out.unmatched_cases.end());
    return out;
}

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;  // n - 1 denominator; 0 when n < 2
};

Moments moments(const std::vector<double>& x) {
    Moments m;
    if (x.empty()) return m;
    m.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    if (x.size() < 2) return m;
    double ss = 0.0;
    for (double v : x) ss += (v - m.mean) * (v - m.mean);
    m.var = ss / static_cast<double>(x.size() - 1);
    return m;
}

BalanceRow balance_row(std::string name, const std::vector<double>& cases,
                       const std::vector<double>& refs) {
    const Moments c = moments(cases);
    const Moments r = moments(refs);
    BalanceRow row;
    row.covariate = std::move(name);
    row.case_mean = c.mean;
    row.referent_mean = r.mean;
    const double pooled = std::sqrt((c.var + r.var) / 2.0);
    if (pooled > 0.0) {
        row.smd = (c.mean - r.mean) / pooled;
    } else if (c.mean == r.mean) {
        row.smd = 0.0;
    } else {
        row.smd = std::numeric_limits<double>::quiet_NaN();
        row.zero_pooled_sd = true;
    }
    return row;
}

}  // namespace

std::vector<BalanceRow> balance_table(const CovariateTable& table, const MatchResult& result) {
    table.validate();
    if (result.sets.empty()) throw Error(ErrorCode::InvalidArgument, "no matched sets");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < table.subjects.size(); ++i) index[table.subjects[i].id] = i;
    auto lookup = [&](const std::string& id) -> const CovariateSubject& {
        auto it = index.find(id);
        if (it == index.end()) {
            throw Error(ErrorCode::InvalidArgument, "matched id '" + id + "' not in table");
        }
        return table.subjects[it->second];
    };

    std::vector<const CovariateSubject*> cases, refs;
    for (const auto& set : result.sets) {
        cases.push_back(&lookup(set.case_id));
        for (const auto& r : set.referent_ids) refs.push_back(&lookup(r));
    }

    std::vector<BalanceRow> rows;
    for (std::size_t c = 0; c < table.covariate_names.size(); ++c) {
        std::vector<double> xc, xr;
        for (const auto* s : cases) xc.push_back(s->values[c]);
        for (const auto* s : refs) xr.push_back(s->values[c]);
        rows.push_back(balance_row(table.covariate_names[c], xc, xr));
    }
    for (std::size_t k = 0; k < table.key_names.size(); ++k) {
        std::set<std::string> levels;
        for (const auto* s : cases) levels.insert(s->keys[k]);
        for (const auto* s : refs) levels.insert(s->keys[k]);
        for (const auto& level : levels) {
            std::vector<double> xc, xr;
            for (const auto* s : cases) xc.push_back(s->keys[k] == level ? 1.0 : 0.0);
            for (const auto* s : refs) xr.push_back(s->keys[k] == level ? 1.0 : 0.0);
            rows.push_back(balance_row(table.key_names[k] + "=" + level, xc, xr));
        }
    }
    return rows;
}

namespace {

double parse_number(const std::string& text, const std::string& column) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw Error(ErrorCode::ParseError,
                    "column '" + column + "' has non-numeric value '" + text + "'");
    }
    return v;
}

bool parse_group(const std::string& text) {
    if (text == "case" || text == "1") return true;
    if (text == "referent" || text == "0") return false;
    throw Error(ErrorCode::ParseError, "group must be case/referent or 1/0, got '" + text + "'");
}

void append_rows(CovariateTable& out, const csv::Table& data, const CovariateColumns& cols,
                 std::optional<bool> fixed_group) {
    const std::size_t id_col = data.require_column(cols.id);
    std::optional<std::size_t> group_col;
    if (!fixed_group) group_col = data.require_column(cols.group);
    std::vector<std::size_t> key_cols, cov_cols;
    for (const auto& k : cols.keys) key_cols.push_back(data.require_column(k));
    for (const auto& c : cols.covariates) cov_cols.push_back(data.require_column(c));
    for (const auto& row : data.rows) {
        CovariateSubject s;
        s.id = row[id_col];
        s.is_case = fixed_group ? *fixed_group : parse_group(row[*group_col]);
        for (std::size_t c : key_cols) s.keys.push_back(row[c]);
        for (std::size_t i = 0; i < cov_cols.size(); ++i) {
            s.values.push_back(parse_number(row[cov_cols[i]], cols.covariates[i]));
        }
        out.subjects.push_back(std::move(s));
    }
}

}  // namespace

CovariateTable covariate_table_from_csv(const csv::Table& data, const CovariateColumns& cols) {
    CovariateTable out;
    out.key_names = cols.keys;
    out.covariate_names = cols.covariates;
    append_rows(out, data, cols, std::nullopt);
    out.validate();
    return out;
}

CovariateTable covariate_table_from_csv(const csv::Table& cases, const csv::Table& referents,
                                        const CovariateColumns& cols) {
    CovariateTable out;
    out.key_names = cols.keys;
    out.covariate_names = cols.covariates;
    append_rows(out, cases, cols, true);
    append_rows(out, referents, cols, false);
    out.validate();
    return out;
}

void write_matched_sets_csv(std::ostream& out, const MatchResult& result) {
    csv::write_row(out, {"set_id", "subject_id", "broad_case"});
    std::size_t set_id = 0;
    for (const auto& set : result.sets) {
        const std::string sid = std::to_string(++set_id);
        csv::write_row(out, {sid, set.case_id, "1"});
        for (const auto& r : set.referent_ids) csv::write_row(out, {sid, r, "0"});
    }
}

void write_balance_csv(std::ostream& out, const std::vector<BalanceRow>& rows) {
    csv::write_row(out, {"covariate", "case_mean", "referent_mean", "smd"});
    for (const auto& r : rows) {
        csv::write_row(out, {r.covariate, csv::format_fixed(r.case_mean, 4),
                             csv::format_fixed(r.referent_mean, 4),
                             r.zero_pooled_sd ? "NA" : csv::format_fixed(r.smd, 2)});
    }
}

MatchResult read_matched_sets_csv(const csv::Table& data) {
    const std::size_t set_col = data.require_column("set_id");
    const std::size_t id_col = data.require_column("subject_id");
    const std::size_t case_col = data.require_column("broad_case");
    std::map<std::string, MatchedCase> by_set;
    std::vector<std::string> order;
    for (const auto& row : data.rows) {
        const std::string& sid = row[set_col];
        if (!by_set.count(sid)) order.push_back(sid);
        auto& mc = by_set[sid];
        if (parse_group(row[case_col])) {
            if (!mc.case_id.empty()) {
                throw Error(ErrorCode::MultipleCases, "set " + sid + " has two cases");
            }
            mc.case_id = row[id_col];
        } else {
            mc.referent_ids.push_back(row[id_col]);
        }
    }
    MatchResult out;
    for (const auto& sid : order) {
        auto& mc = by_set[sid];
        if (mc.case_id.empty()) throw Error(ErrorCode::MissingCase, "set " + sid + " has no case");
        out.sets.push_back(std::move(mc));
    }
    return out;
}

}  // namespace casesens
