#include "casesens/study.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "casesens/csv.hpp"
#include "casesens/error.hpp"

namespace casesens {

namespace {

void check_binary(int value, const char* field, std::int64_t set_id) {
    if (value != 0 && value != 1) {
        throw Error(ErrorCode::BadBinary, std::string(field) + " must be 0 or 1 (set " +
                                              std::to_string(set_id) + ", got " +
                                              std::to_string(value) + ")");
    }
}

void validate_set(const MatchedSet& s) {
    if (s.size < 2) {
        throw Error(ErrorCode::InvalidSetSize,
                    "set " + std::to_string(s.set_id) + " has fewer than 2 subjects");
    }
    if (s.exposed_count < 0 || s.exposed_count > s.size) {
        throw Error(ErrorCode::InvalidCount,
                    "set " + std::to_string(s.set_id) + ": exposed count outside [0, J]");
    }
    if (s.case_exposed && s.exposed_count < 1) {
        throw Error(ErrorCode::InvalidCount,
                    "set " + std::to_string(s.set_id) + ": exposed case but m = 0");
    }
    if (!s.case_exposed && s.exposed_count > s.size - 1) {
        throw Error(ErrorCode::InvalidCount,
                    "set " + std::to_string(s.set_id) + ": unexposed case but m = J");
    }
}

}  // namespace

Study::Study(std::vector<MatchedSet> sets) : sets_(std::move(sets)) {
    std::sort(sets_.begin(), sets_.end(),
              [](const MatchedSet& a, const MatchedSet& b) { return a.set_id < b.set_id; });
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        validate_set(sets_[i]);
        if (i > 0 && sets_[i].set_id == sets_[i - 1].set_id) {
            throw Error(ErrorCode::DuplicateId,
                        "duplicate set_id " + std::to_string(sets_[i].set_id));
        }
        if (sets_[i].is_narrow) ++narrow_count_;
    }
}

Study Study::narrow_only() const {
    std::vector<MatchedSet> narrow;
    narrow.reserve(narrow_count_);
    std::copy_if(sets_.begin(), sets_.end(), std::back_inserter(narrow),
                 [](const MatchedSet& s) { return s.is_narrow; });
    return Study(std::move(narrow));
}

Study parse_study(const std::vector<SubjectRecord>& rows) {
    if (rows.empty()) throw Error(ErrorCode::EmptyStudy, "no subject rows");

    struct Acc {
        int size = 0;
        int exposed = 0;
        int cases = 0;
        bool case_exposed = false;
        bool case_narrow = false;
    };
    std::map<std::int64_t, Acc> by_set;
    std::set<std::string> subject_ids;

    for (const auto& r : rows) {
        if (r.set_id < 1) {
            throw Error(ErrorCode::ParseError, "set_id must be >= 1");
        }
        check_binary(r.exposed, "exposed", r.set_id);
        check_binary(r.broad_case, "broad_case", r.set_id);
        check_binary(r.narrow_case, "narrow_case", r.set_id);
        if (!r.subject_id.empty() && !subject_ids.insert(r.subject_id).second) {
            throw Error(ErrorCode::DuplicateId, "duplicate subject_id '" + r.subject_id + "'");
        }
        if (r.narrow_case == 1 && r.broad_case == 0) {
            throw Error(ErrorCode::NarrowReferent,
                        "set " + std::to_string(r.set_id) + ": referent '" + r.subject_id +
                            "' flagged narrow_case = 1");
        }
        auto& acc = by_set[r.set_id];
        ++acc.size;
        acc.exposed += r.exposed;
        if (r.broad_case == 1) {
            ++acc.cases;
            acc.case_exposed = r.exposed == 1;
            acc.case_narrow = r.narrow_case == 1;
        }
    }

    std::vector<MatchedSet> sets;
    sets.reserve(by_set.size());
    for (const auto& [id, acc] : by_set) {
        if (acc.cases == 0) {
            throw Error(ErrorCode::MissingCase, "set " + std::to_string(id) + " has no broad case");
        }
        if (acc.cases > 1) {
            throw Error(ErrorCode::MultipleCases,
                        "set " + std::to_string(id) + " has " + std::to_string(acc.cases) +
                            " broad cases");
        }
        sets.push_back({id, acc.size, acc.exposed, acc.case_exposed, acc.case_narrow});
    }
    return Study(std::move(sets));
}

std::vector<SubjectRecord> serialize(const Study& study) {
    std::vector<SubjectRecord> rows;
    for (const auto& s : study.sets()) {
        const std::string prefix = "s" + std::to_string(s.set_id) + "_";
        rows.push_back({s.set_id, prefix + "1", s.case_exposed ? 1 : 0, 1, s.is_narrow ? 1 : 0});
        int referents_exposed = s.exposed_count - (s.case_exposed ? 1 : 0);
        for (int j = 2; j <= s.size; ++j) {
            const int z = referents_exposed-- > 0 ? 1 : 0;
            rows.push_back({s.set_id, prefix + std::to_string(j), z, 0, 0});
        }
    }
    return rows;
}

namespace {

template <class Int>
Int parse_int(const std::string& text, const char* field, std::size_t row) {
    Int value{};
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        // Non-integer text in a binary column is a BadBinary, elsewhere a ParseError.
        const std::string f = field;
        const auto code = (f == "set_id") ? ErrorCode::ParseError : ErrorCode::BadBinary;
        throw Error(code, "row " + std::to_string(row) + ": invalid " + f + " '" + text + "'");
    }
    return value;
}

}  // namespace

std::vector<SubjectRecord> read_subject_csv(std::istream& in) {
    const auto table = csv::read(in);
    const auto c_set = table.require_column("set_id");
    const auto c_subject = table.require_column("subject_id");
    const auto c_exposed = table.require_column("exposed");
    const auto c_broad = table.require_column("broad_case");
    const auto c_narrow = table.require_column("narrow_case");

    std::vector<SubjectRecord> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i];
        SubjectRecord r;
        r.set_id = parse_int<std::int64_t>(f[c_set], "set_id", i + 1);
        r.subject_id = f[c_subject];
        r.exposed = parse_int<int>(f[c_exposed], "exposed", i + 1);
        r.broad_case = parse_int<int>(f[c_broad], "broad_case", i + 1);
        r.narrow_case = parse_int<int>(f[c_narrow], "narrow_case", i + 1);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SubjectRecord> read_subject_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    return read_subject_csv(in);
}

void write_subject_csv(std::ostream& out, const std::vector<SubjectRecord>& rows) {
    csv::write_row(out, {"set_id", "subject_id", "exposed", "broad_case", "narrow_case"});
    for (const auto& r : rows) {
        csv::write_row(out, {std::to_string(r.set_id), r.subject_id, std::to_string(r.exposed),
                             std::to_string(r.broad_case), std::to_string(r.narrow_case)});
    }
}

StudySummary summarize(const Study& study) {
    StudySummary out;
    out.sets = study.size();
    out.narrow_sets = study.narrow_count();
    for (const auto& s : study.sets()) {
        const int y = s.case_exposed ? 1 : 0;
        out.y_broad += y;
        if (s.is_narrow) out.y_narrow += y;
        ++out.m_histogram[s.exposed_count];
        out.cases_exposed += y;
        out.cases_unexposed += 1 - y;
        out.referents_exposed += s.exposed_count - y;
        out.referents_unexposed += (s.size - 1) - (s.exposed_count - y);
    }
    if (out.cases_exposed == 0 || out.cases_unexposed == 0 || out.referents_exposed == 0 ||
        out.referents_unexposed == 0) {
        out.odds_ratio_degenerate = true;
    } else {
        out.odds_ratio = (static_cast<double>(out.cases_exposed) / out.cases_unexposed) /
                         (static_cast<double>(out.referents_exposed) / out.referents_unexposed);
    }
    return out;
}

std::string summary_to_json(const StudySummary& summary) {
    nlohmann::ordered_json j;
    j["I"] = summary.sets;
    j["narrow_sets"] = summary.narrow_sets;
    j["Y_b"] = summary.y_broad;
    j["Y_n"] = summary.y_narrow;
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [m, count] : summary.m_histogram) hist[std::to_string(m)] = count;
    j["m_histogram"] = hist;
    if (summary.odds_ratio) {
        j["odds_ratio"] = *summary.odds_ratio;
    } else {
        j["odds_ratio"] = nullptr;
    }
    j["odds_ratio_degenerate"] = summary.odds_ratio_degenerate;
    return j.dump();
}

}  // namespace casesens
