#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lendml/dataset.hpp"

namespace lendml {

// Fitted imputation + scaling + encoding state. Fit on training rows only;
// immutable afterwards. Applying it never refits.
struct PreprocessState {
    std::vector<std::string> numeric_names;
    std::vector<double> impute_mean;  // mean of non-missing training values
    std::vector<double> scaler_mean;  // mean after imputation
    std::vector<double> scaler_std;   // population std after imputation; >= kMinStd
    std::vector<std::string> categorical_names;
    std::vector<std::vector<std::string>> vocab;  // sorted unique non-empty tokens
    std::vector<std::pair<std::string, double>> dropped_columns;  // (name, coverage)

    size_t design_width() const;
    std::vector<std::string> design_column_names() const;

    std::string to_json() const;
    static PreprocessState from_json(const std::string& text);
    // content hash; reports and artifacts reference states by this id
    std::string id() const;
};

struct DesignMatrix {
    Matrix X;
    std::vector<int> labels;
    std::vector<std::string> column_names;
};

struct SplitSpec {
    double train_fraction = 0.75;
    std::optional<YearMonth> cutoff_date;  // rows strictly after it are excluded
};

struct CoverageResult {
    SampleSet set;
    std::vector<std::pair<std::string, double>> dropped;  // (name, coverage)
};

// Removes columns covering < threshold of rows (strict). All columns gone -> fatal.
CoverageResult drop_low_coverage(const SampleSet& set, double threshold = 0.70);

PreprocessState fit_impute_scale(const SampleSet& train);

// missing -> train mean; numeric standardized; categoricals one-hot over the
// train vocab (tokens outside the vocab produce an all-zero block). Column
// order: numeric in state order, then one-hot blocks in vocab order.
DesignMatrix apply(const PreprocessState& state, const SampleSet& set);

struct SplitResult {
    SampleSet train;
    SampleSet test;
};

// Date-ordered split: rows sorted by (date, original index); the first
// floor(train_fraction * N) go to train. Never random.
SplitResult time_split(const SampleSet& set, const SplitSpec& spec);

// Majority class subsampled without replacement down to the minority count.
// Minority rows are all retained; row order is preserved.
SampleSet downsample_majority(const SampleSet& train, std::uint64_t seed);

struct ClassWeights {
    double w0 = 1.0;
    double w1 = 1.0;
};

// w_c = N / (2 * N_c): both classes contribute equal total weight.
ClassWeights class_weights(const std::vector<int>& labels);

std::vector<double> sample_weight_vector(const std::vector<int>& labels, const ClassWeights& w);

}  // namespace lendml
