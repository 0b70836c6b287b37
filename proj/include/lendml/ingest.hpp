#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lendml/dataset.hpp"

namespace lendml {

// Canonical field name -> CSV header name, so renamed exports still load.
// Defaults follow the Lending Club Kaggle export headers.
struct SchemaMap {
    std::map<std::string, std::string> accepted;
    std::map<std::string, std::string> rejected;

    static SchemaMap defaults();
};

struct ParseSummary {
    std::string source_name;
    size_t rows_read = 0;
    size_t rows_retained = 0;
    // reason -> count; reasons are stable tokens so reports are diffable
    std::map<std::string, size_t> dropped;

    size_t rows_dropped() const;
    std::string to_text() const;  // line-oriented plain-text report
};

struct ParseResult {
    std::vector<LoanRecord> records;
    ParseSummary summary;
    std::vector<std::string> header;  // file header row, as read
};

struct ParseOptions {
    bool require_date = true;   // scoring paths keep rows without dates
    bool keep_raw_cells = false;
};

ParseResult parse_accepted(const std::string& path, const SchemaMap& schema,
                           const ParseOptions& opts = {});
ParseResult parse_rejected(const std::string& path, const SchemaMap& schema,
                           const ParseOptions& opts = {});

// Field-level parsing rules shared by both loan files.
// "10+ years" -> 10, "< 1 year" -> 0, "n years" -> n, "n/a"/"" -> missing.
std::optional<double> parse_emp_length(std::string_view s);
// " 36 months" -> 36
std::optional<double> parse_term_months(std::string_view s);
// lower-cased, trimmed; empty result means missing
std::string normalize_token(std::string_view s);

enum class LoanStatus { FullyPaid, Defaulted, Other };
LoanStatus map_loan_status(std::string_view raw);

struct BuildSummary {
    size_t rows_in = 0;
    size_t rows_out = 0;
    std::map<std::string, size_t> dropped;
    std::string to_text(const std::string& name) const;
};

struct BuildResult {
    SampleSet set;
    BuildSummary summary;
};

enum class BuildMode { Training, Scoring };

// Label 1 for accepted, 0 for rejected; exactly the four shared features.
BuildResult build_phase1(const std::vector<LoanRecord>& accepted,
                         const std::vector<LoanRecord>& rejected);

// Rows only for fully-paid / defaulted statuses (Training mode); all 18
// features, log transforms applied. Scoring mode keeps every record and
// leaves labels at -1 when the status is absent or unmapped.
BuildResult build_phase2(const std::vector<LoanRecord>& accepted,
                         BuildMode mode = BuildMode::Training);

// Phase-1 features for scoring: no labels required, any record source.
BuildResult build_phase1_features(const std::vector<LoanRecord>& records);

}  // namespace lendml
