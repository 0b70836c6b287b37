#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lendml/common.hpp"

namespace lendml {

// Dense row-major matrix of doubles. Sizes here are desk scale; plain
// loops beat any heavier dependency.
struct Matrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(size_t r, size_t c) { return data[r * cols + c]; }
    double at(size_t r, size_t c) const { return data[r * cols + c]; }
    const double* row(size_t r) const { return data.data() + r * cols; }
    double* row(size_t r) { return data.data() + r * cols; }
};

enum class Source { Accepted, Rejected };

enum class ColumnKind { Numeric, Categorical };

struct ColumnMeta {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    double coverage = 1.0;  // non-missing fraction, in [0,1]
};

// One parsed row of either loan file. Numeric/categorical feature values are
// already normalized to model conventions (employment length mapped to years,
// percent signs stripped, log transforms applied downstream in build).
struct LoanRecord {
    Source source = Source::Accepted;
    YearMonth date;
    std::map<std::string, std::optional<std::string>> fields_raw;
    // verbatim row cells in original column order, kept for scored-output echo
    std::vector<std::string> raw_cells;

    std::optional<std::string> raw(const std::string& key) const {
        auto it = fields_raw.find(key);
        if (it == fields_raw.end()) return std::nullopt;
        return it->second;
    }
};

// Columnar sample container. Missing numeric cells are NaN; missing
// categorical cells are the empty token. All parallel vectors share the
// row count.
struct SampleSet {
    std::vector<ColumnMeta> columns;
    // numeric columns, indexed as in `columns` filtered to Numeric, in order
    std::vector<std::vector<double>> numeric;
    std::vector<std::string> numeric_names;
    std::vector<std::vector<std::string>> categorical;
    std::vector<std::string> categorical_names;
    std::vector<YearMonth> dates;
    std::vector<int> labels;  // 0/1, -1 when unlabeled (scoring mode)

    size_t n_rows() const { return dates.size(); }

    int numeric_index(const std::string& name) const;
    int categorical_index(const std::string& name) const;

    void add_numeric_column(const std::string& name);
    void add_categorical_column(const std::string& name);
    void recompute_coverage();
    void check_consistent() const;  // throws on parallel-vector mismatch
    SampleSet select_rows(const std::vector<size_t>& idx) const;
};

inline bool is_missing(double v) { return std::isnan(v); }
inline double missing_value() { return std::nan(""); }

// Canonical feature names. Phase-1 columns are exactly the four features
// shared between the two loan files; phase-2 columns are the 18 pre-decision
// features of the accepted file. Post-decision fields (status, rate, grade)
// must never appear here.
namespace features {
inline const std::vector<std::string> phase1_numeric = {"dti", "emp_length", "loan_amount"};
inline const std::vector<std::string> phase1_categorical = {"purpose"};
inline const std::vector<std::string> phase2_numeric = {
    "loan_amount", "term", "installment", "emp_length", "dti",
    "earliest_credit_line", "open_credit_lines", "derogatory_public_records",
    "revolving_utilization", "total_credit_lines", "mortgage_credit_lines",
    "bankruptcies", "log_annual_income", "fico", "log_revolving_balance"};
inline const std::vector<std::string> phase2_categorical = {
    "home_ownership", "verification_status", "purpose"};
}  // namespace features

}  // namespace lendml
