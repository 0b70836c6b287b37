#pragma once

#include <string>
#include <vector>

namespace lendml {

struct EvalReport {
    double auc = 0.0;
    double recall_class0 = 0.0;
    double recall_class1 = 0.0;
    double recall_macro = 0.0;
    // confusion counts at the threshold
    size_t tp = 0, fp = 0, tn = 0, fn = 0;
    size_t n_rows = 0;
    std::string split_name;
    std::string model_id;

    std::string to_json() const;
};

// Probability a random positive outranks a random negative, ties counting
// half. Computed from a single sort via average ranks (Mann-Whitney U),
// O(n log n). Errors if only one class is present.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

// Threshold rule is >=: a score exactly at the threshold predicts class 1.
// Pass 0.5 for probabilities, 0.0 for SVM margins.
EvalReport recall_report(const std::vector<double>& scores, const std::vector<int>& labels,
                         double threshold, const std::string& split_name,
                         const std::string& model_id);

}  // namespace lendml
