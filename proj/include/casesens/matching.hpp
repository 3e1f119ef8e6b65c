#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "casesens/assignment.hpp"
#include "casesens/csv.hpp"

namespace casesens {

struct CovariateSubject {
    std::string id;
    bool is_case = false;
    std::vector<std::string> keys;  // one value per exact-match key
    std::vector<double> values;     // one value per numeric covariate
};

struct CovariateTable {
    std::vector<std::string> key_names;
    std::vector<std::string> covariate_names;
    std::vector<CovariateSubject> subjects;

    // Unique ids, consistent row widths, at least one covariate.
    void validate() const;
};

// Case x referent distances; rows follow the order of cases in the table and
// columns the order of referents.
struct DistanceMatrix {
    std::vector<std::size_t> case_rows;      // indices into table.subjects
    std::vector<std::size_t> referent_rows;  // indices into table.subjects
    CostMatrix distances;
    bool singular = false;  // covariance was rank deficient; pseudo-inverse used
    std::vector<std::string> dropped_columns;  // constant covariates
};

// Rank-based Mahalanobis distance: covariates replaced by average ranks over
// all subjects, rank covariance with its diagonal reset to the variance of
// untied ranks, distance = d' S^+ d for the rank difference d.
DistanceMatrix robust_mahalanobis(const CovariateTable& table);

struct MatchedCase {
    std::string case_id;
    std::vector<std::string> referent_ids;
};

struct MatchResult {
    std::vector<MatchedCase> sets;  // ordered by case id
    double total_distance = 0.0;
    std::vector<std::string> unmatched_cases;  // ordered by case id
    bool singular = false;
    std::vector<std::string> dropped_columns;
};

// Optimal 1:k matching within strata of identical exact keys. A stratum with
// fewer than k referents per case leaves all of its cases unmatched.
MatchResult optimal_match(const CovariateTable& table, std::size_t k);

struct BalanceRow {
    std::string covariate;
    double case_mean = 0.0;
    double referent_mean = 0.0;
    double smd = 0.0;
    bool zero_pooled_sd = false;  // pooled SD is zero but the means differ; smd is NaN
};

// Balance on the matched sample: numeric covariates plus one indicator per
// level of each exact key. SMD uses sqrt((s_case^2 + s_ref^2) / 2).
std::vector<BalanceRow> balance_table(const CovariateTable& table, const MatchResult& result);

struct CovariateColumns {
    std::string id = "id";
    std::string group = "group";
    std::vector<std::string> keys;
    std::vector<std::string> covariates;
};

// One table with a group column holding case/referent (or 1/0).
CovariateTable covariate_table_from_csv(const csv::Table& data, const CovariateColumns& cols);
// Separate case and referent tables; the group column is not used.
CovariateTable covariate_table_from_csv(const csv::Table& cases, const csv::Table& referents,
                                        const CovariateColumns& cols);

// set_id, subject_id, broad_case; case first within each set.
void write_matched_sets_csv(std::ostream& out, const MatchResult& result);
// covariate, case_mean, referent_mean, smd.
void write_balance_csv(std::ostream& out, const std::vector<BalanceRow>& rows);
// Reads the output of write_matched_sets_csv back into a MatchResult (no distances).
MatchResult read_matched_sets_csv(const csv::Table& data);

}  // namespace casesens
