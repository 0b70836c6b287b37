#include "lendml/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "lendml/rng.hpp"

namespace lendml {

namespace {
using ordered_json = nlohmann::ordered_json;
}

size_t PreprocessState::design_width() const {
    size_t w = numeric_names.size();
    for (const auto& v : vocab) w += v.size();
    return w;
}

std::vector<std::string> PreprocessState::design_column_names() const {
    std::vector<std::string> names = numeric_names;
    for (size_t c = 0; c < categorical_names.size(); ++c)
        for (const auto& token : vocab[c]) names.push_back(categorical_names[c] + "=" + token);
    return names;
}

std::string PreprocessState::to_json() const {
    ordered_json j;
    j["schema"] = "preprocess-state/1";
    ordered_json cols = ordered_json::array();
    for (size_t i = 0; i < numeric_names.size(); ++i) {
        cols.push_back({{"name", numeric_names[i]},
                        {"impute_mean", impute_mean[i]},
                        {"scaler_mean", scaler_mean[i]},
                        {"scaler_std", scaler_std[i]}});
    }
    j["numeric"] = cols;
    ordered_json cats = ordered_json::array();
    for (size_t i = 0; i < categorical_names.size(); ++i)
        cats.push_back({{"name", categorical_names[i]}, {"vocab", vocab[i]}});
    j["categorical"] = cats;
    ordered_json dropped = ordered_json::array();
    for (const auto& [name, cov] : dropped_columns)
        dropped.push_back({{"name", name}, {"coverage", cov}});
    j["dropped_columns"] = dropped;
    j["id"] = id();
    return j.dump(2) + "\n";
}

PreprocessState PreprocessState::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    if (j.value("schema", "") != "preprocess-state/1") fail("unrecognized preprocess state schema");
    PreprocessState s;
    for (const auto& col : j.at("numeric")) {
        s.numeric_names.push_back(col.at("name").get<std::string>());
        s.impute_mean.push_back(col.at("impute_mean").get<double>());
        s.scaler_mean.push_back(col.at("scaler_mean").get<double>());
        s.scaler_std.push_back(col.at("scaler_std").get<double>());
    }
    for (const auto& col : j.at("categorical")) {
        s.categorical_names.push_back(col.at("name").get<std::string>());
        s.vocab.push_back(col.at("vocab").get<std::vector<std::string>>());
    }
    for (const auto& col : j.at("dropped_columns"))
        s.dropped_columns.emplace_back(col.at("name").get<std::string>(),
                                       col.at("coverage").get<double>());
    return s;
}

std::string PreprocessState::id() const {
    // hash of the content, independent of the embedded id field
    ordered_json j;
    j["numeric_names"] = numeric_names;
    j["impute_mean"] = impute_mean;
    j["scaler_mean"] = scaler_mean;
    j["scaler_std"] = scaler_std;
    j["categorical_names"] = categorical_names;
    j["vocab"] = vocab;
    return hex64(fnv1a64(j.dump()));
}

CoverageResult drop_low_coverage(const SampleSet& set, double threshold) {
    CoverageResult out;
    SampleSet& kept = out.set;
    for (const auto& meta : set.columns) {
        if (meta.coverage < threshold) {
            out.dropped.emplace_back(meta.name, meta.coverage);
            continue;
        }
        if (meta.kind == ColumnKind::Numeric) {
            kept.add_numeric_column(meta.name);
            kept.numeric.back() = set.numeric[(size_t)set.numeric_index(meta.name)];
        } else {
            kept.add_categorical_column(meta.name);
            kept.categorical.back() = set.categorical[(size_t)set.categorical_index(meta.name)];
        }
        kept.columns.back().coverage = meta.coverage;
    }
    if (kept.columns.empty())
        fail("drop_low_coverage: every column fell below coverage threshold");
    kept.dates = set.dates;
    kept.labels = set.labels;
    kept.check_consistent();
    return out;
}

PreprocessState fit_impute_scale(const SampleSet& train) {
    if (train.n_rows() == 0) fail("fit_impute_scale: empty training set");
    PreprocessState s;
    const double n = (double)train.n_rows();
    for (size_t c = 0; c < train.numeric.size(); ++c) {
        const auto& col = train.numeric[c];
        double sum = 0.0;
        size_t present = 0;
        for (double v : col)
            if (!is_missing(v)) {
                sum += v;
                ++present;
            }
        if (present == 0)
            fail("fit_impute_scale: column entirely missing in training data: " +
                 train.numeric_names[c]);
        const double imp = sum / (double)present;
        // post-imputation moments; population variance
        double total = 0.0;
        for (double v : col) total += is_missing(v) ? imp : v;
        const double mean = total / n;
        double ss = 0.0;
        for (double v : col) {
            const double x = (is_missing(v) ? imp : v) - mean;
            ss += x * x;
        }
        double std = std::sqrt(ss / n);
        if (!(std > 0.0)) std = 1.0;  // zero-variance columns scale to all-zero
        s.numeric_names.push_back(train.numeric_names[c]);
        s.impute_mean.push_back(imp);
        s.scaler_mean.push_back(mean);
        s.scaler_std.push_back(std);
    }
    for (size_t c = 0; c < train.categorical.size(); ++c) {
        std::set<std::string> tokens;
        for (const auto& t : train.categorical[c])
            if (!t.empty()) tokens.insert(t);
        s.categorical_names.push_back(train.categorical_names[c]);
        s.vocab.emplace_back(tokens.begin(), tokens.end());
    }
    return s;
}

DesignMatrix apply(const PreprocessState& state, const SampleSet& set) {
    const size_t n = set.n_rows();
    DesignMatrix out;
    out.column_names = state.design_column_names();
    out.X = Matrix(n, state.design_width());
    out.labels = set.labels;

    size_t col_out = 0;
    for (size_t c = 0; c < state.numeric_names.size(); ++c, ++col_out) {
        int idx = set.numeric_index(state.numeric_names[c]);
        if (idx < 0) fail("apply: numeric column missing from input set: " + state.numeric_names[c]);
        const auto& col = set.numeric[(size_t)idx];
        for (size_t r = 0; r < n; ++r) {
            double v = is_missing(col[r]) ? state.impute_mean[c] : col[r];
            out.X.at(r, col_out) = (v - state.scaler_mean[c]) / state.scaler_std[c];
        }
    }
    for (size_t c = 0; c < state.categorical_names.size(); ++c) {
        int idx = set.categorical_index(state.categorical_names[c]);
        if (idx < 0)
            fail("apply: categorical column missing from input set: " + state.categorical_names[c]);
        const auto& col = set.categorical[(size_t)idx];
        const auto& vocab = state.vocab[c];
        for (size_t r = 0; r < n; ++r) {
            // tokens outside the train vocab leave the whole block at zero
            auto it = std::lower_bound(vocab.begin(), vocab.end(), col[r]);
            if (it != vocab.end() && *it == col[r])
                out.X.at(r, col_out + (size_t)(it - vocab.begin())) = 1.0;
        }
        col_out += vocab.size();
    }
    return out;
}

SplitResult time_split(const SampleSet& set, const SplitSpec& spec) {
    std::vector<size_t> order;
    order.reserve(set.n_rows());
    for (size_t i = 0; i < set.n_rows(); ++i) {
        if (spec.cutoff_date && set.dates[i] > *spec.cutoff_date) continue;
        order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return set.dates[a].index() < set.dates[b].index();
    });
    const size_t n_train = (size_t)std::floor(spec.train_fraction * (double)order.size());
    if (n_train == 0) fail("time_split: empty train split");
    if (n_train >= order.size()) fail("time_split: empty test split");
    std::vector<size_t> train_idx(order.begin(), order.begin() + (std::ptrdiff_t)n_train);
    std::vector<size_t> test_idx(order.begin() + (std::ptrdiff_t)n_train, order.end());
    return {set.select_rows(train_idx), set.select_rows(test_idx)};
}

SampleSet downsample_majority(const SampleSet& train, std::uint64_t seed) {
    std::vector<size_t> pos, neg;
    for (size_t i = 0; i < train.n_rows(); ++i)
        (train.labels[i] == 1 ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty()) fail("downsample_majority: both classes required");
    const auto& minority = pos.size() <= neg.size() ? pos : neg;
    const auto& majority = pos.size() <= neg.size() ? neg : pos;
    if (minority.size() == majority.size()) return train;

    Rng rng(substream_seed(seed, 0xD05A));
    std::vector<size_t> chosen = rng.sample_without_replacement(majority.size(), minority.size());
    std::vector<size_t> keep = minority;
    for (size_t k : chosen) keep.push_back(majority[k]);
    std::sort(keep.begin(), keep.end());
    return train.select_rows(keep);
}

ClassWeights class_weights(const std::vector<int>& labels) {
    size_t n0 = 0, n1 = 0;
    for (int y : labels) (y == 1 ? n1 : n0) += 1;
    if (n0 == 0 || n1 == 0) fail("class_weights: both classes required");
    const double n = (double)labels.size();
    return {n / (2.0 * (double)n0), n / (2.0 * (double)n1)};
}

std::vector<double> sample_weight_vector(const std::vector<int>& labels, const ClassWeights& w) {
    std::vector<double> out(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) out[i] = labels[i] == 1 ? w.w1 : w.w0;
    return out;
}

}  // namespace lendml
