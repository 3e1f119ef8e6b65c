#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace casesens {

// One subject row of a matched case-referent dataset.
struct SubjectRecord {
    std::int64_t set_id = 0;
    std::string subject_id;
    int exposed = 0;
    int broad_case = 0;
    int narrow_case = 0;
};

// Per-set aggregate: one broad case plus size - 1 referents.
struct MatchedSet {
    std::int64_t set_id = 0;
    int size = 0;            // J_i
    int exposed_count = 0;   // m_i
    bool case_exposed = false;  // Y_i
    bool is_narrow = false;

    friend bool operator==(const MatchedSet&, const MatchedSet&) = default;
};

// A validated collection of matched sets, ordered by set_id.
class Study {
public:
    Study() = default;
    // Validates set invariants; throws Error on violation.
    explicit Study(std::vector<MatchedSet> sets);

    const std::vector<MatchedSet>& sets() const noexcept { return sets_; }
    std::size_t size() const noexcept { return sets_.size(); }
    std::size_t narrow_count() const noexcept { return narrow_count_; }

    // Sub-study of the narrow-case sets only.
    Study narrow_only() const;

    friend bool operator==(const Study&, const Study&) = default;

private:
    std::vector<MatchedSet> sets_;
    std::size_t narrow_count_ = 0;
};

// Aggregates subject rows into a Study, rejecting malformed sets.
Study parse_study(const std::vector<SubjectRecord>& rows);

// Expands a Study back to subject rows (case first in each set).
std::vector<SubjectRecord> serialize(const Study& study);

std::vector<SubjectRecord> read_subject_csv(std::istream& in);
std::vector<SubjectRecord> read_subject_csv_file(const std::string& path);
void write_subject_csv(std::ostream& out, const std::vector<SubjectRecord>& rows);

struct StudySummary {
    std::size_t sets = 0;         // I
    std::size_t narrow_sets = 0;  // |N|
    std::int64_t y_broad = 0;     // Y_b
    std::int64_t y_narrow = 0;    // Y_n
    std::map<int, std::size_t> m_histogram;
    // Cells of the case/referent by exposed/unexposed table.
    std::int64_t cases_exposed = 0;
    std::int64_t cases_unexposed = 0;
    std::int64_t referents_exposed = 0;
    std::int64_t referents_unexposed = 0;
    // Empty when a cell of the 2x2 table is zero.
    std::optional<double> odds_ratio;
    bool odds_ratio_degenerate = false;
};

StudySummary summarize(const Study& study);

// JSON with keys I, narrow_sets, Y_b, Y_n, m_histogram, odds_ratio, odds_ratio_degenerate.
std::string summary_to_json(const StudySummary& summary);

}  // namespace casesens
