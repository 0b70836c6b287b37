#include "lendml/dataset.hpp"

namespace lendml {

int SampleSet::numeric_index(const std::string& name) const {
    for (size_t i = 0; i < numeric_names.size(); ++i)
        if (numeric_names[i] == name) return (int)i;
    return -1;
}

int SampleSet::categorical_index(const std::string& name) const {
    for (size_t i = 0; i < categorical_names.size(); ++i)
        if (categorical_names[i] == name) return (int)i;
    return -1;
}

void SampleSet::add_numeric_column(const std::string& name) {
    columns.push_back({name, ColumnKind::Numeric, 1.0});
    numeric_names.push_back(name);
    numeric.emplace_back();
}

void SampleSet::add_categorical_column(const std::string& name) {
    columns.push_back({name, ColumnKind::Categorical, 1.0});
    categorical_names.push_back(name);
    categorical.emplace_back();
}

void SampleSet::recompute_coverage() {
    const double n = n_rows() == 0 ? 1.0 : (double)n_rows();
    for (auto& meta : columns) {
        size_t present = 0;
        if (meta.kind == ColumnKind::Numeric) {
            const auto& col = numeric[(size_t)numeric_index(meta.name)];
            for (double v : col)
                if (!is_missing(v)) ++present;
        } else {
            const auto& col = categorical[(size_t)categorical_index(meta.name)];
            for (const auto& t : col)
                if (!t.empty()) ++present;
        }
        meta.coverage = (double)present / n;
    }
}

void SampleSet::check_consistent() const {
    const size_t n = n_rows();
    if (labels.size() != n) fail("SampleSet: label/date row count mismatch");
    for (const auto& col : numeric)
        if (col.size() != n) fail("SampleSet: numeric column row count mismatch");
    for (const auto& col : categorical)
        if (col.size() != n) fail("SampleSet: categorical column row count mismatch");
    if (numeric.size() != numeric_names.size() || categorical.size() != categorical_names.size())
        fail("SampleSet: column metadata mismatch");
}

SampleSet SampleSet::select_rows(const std::vector<size_t>& idx) const {
    SampleSet out;
    out.columns = columns;
    out.numeric_names = numeric_names;
    out.categorical_names = categorical_names;
    out.numeric.resize(numeric.size());
    out.categorical.resize(categorical.size());
    for (size_t c = 0; c < numeric.size(); ++c) {
        out.numeric[c].reserve(idx.size());
        for (size_t r : idx) out.numeric[c].push_back(numeric[c][r]);
    }
    for (size_t c = 0; c < categorical.size(); ++c) {
        out.categorical[c].reserve(idx.size());
        for (size_t r : idx) out.categorical[c].push_back(categorical[c][r]);
    }
    out.dates.reserve(idx.size());
    out.labels.reserve(idx.size());
    for (size_t r : idx) {
        out.dates.push_back(dates[r]);
        out.labels.push_back(labels[r]);
    }
    out.recompute_coverage();
    return out;
}

}  // namespace lendml
