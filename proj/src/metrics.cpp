#include "lendml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "lendml/common.hpp"

namespace lendml {

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) fail("auc: score/label length mismatch");
    const size_t n = scores.size();
    size_t n_pos = 0;
    for (int y : labels) n_pos += (y == 1);
    const size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) fail("auc: undefined for single-class input");
    for (double s : scores)
        if (std::isnan(s)) fail("auc: NaN score");

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] < scores[b]; });

    // average ranks over tie groups; rank sum of positives gives U
    double rank_sum_pos = 0.0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * (double)(i + 1 + j);  // ranks are 1-based
        for (size_t k = i; k < j; ++k)
            if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
        i = j;
    }
    const double u = rank_sum_pos - 0.5 * (double)n_pos * (double)(n_pos + 1);
    return u / ((double)n_pos * (double)n_neg);
}

EvalReport recall_report(const std::vector<double>& scores, const std::vector<int>& labels,
                         double threshold, const std::string& split_name,
                         const std::string& model_id) {
    if (scores.size() != labels.size()) fail("recall_report: score/label length mismatch");
    EvalReport rep;
    rep.n_rows = scores.size();
    rep.split_name = split_name;
    rep.model_id = model_id;
    for (size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] >= threshold;
        if (labels[i] == 1) (pred ? rep.tp : rep.fn) += 1;
        else (pred ? rep.fp : rep.tn) += 1;
    }
    if (rep.tp + rep.fn == 0) fail("recall_report: class 1 absent from labels");
    if (rep.tn + rep.fp == 0) fail("recall_report: class 0 absent from labels");
    rep.recall_class1 = (double)rep.tp / (double)(rep.tp + rep.fn);
    rep.recall_class0 = (double)rep.tn / (double)(rep.tn + rep.fp);
    rep.recall_macro = 0.5 * (rep.recall_class0 + rep.recall_class1);
    rep.auc = auc(scores, labels);
    return rep;
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j;
    j["model_id"] = model_id;
    j["split"] = split_name;
    j["n_rows"] = n_rows;
    j["auc"] = auc;
    j["recall_class0"] = recall_class0;
    j["recall_class1"] = recall_class1;
    j["recall_macro"] = recall_macro;
    j["confusion"] = {{"tp", tp}, {"fp", fp}, {"tn", tn}, {"fn", fn}};
    return j.dump(2);
}

}  // namespace lendml
