#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lendml/dataset.hpp"

namespace lendml {

struct NormalDist {
    double mean = 0.0;
    double stddev = 1.0;
    int decimals = 2;
    double clip_lo = -1e308;
    double clip_hi = 1e308;
};

struct IntDist {
    long lo = 0;
    long hi = 1;
    double mean() const { return 0.5 * (double)(lo + hi); }
    double stddev() const;
};

struct PurposeShare {
    std::string token;
    double share = 0.0;
    double accept_offset = 0.0;   // additive logit offset, phase 1
    double default_offset = 0.0;  // additive logit offset, phase 2
};

struct CohortSpec {
    std::string token = "small_business";
    double share = 0.0;
    bool invert_phase2 = false;  // cohort rows flip the sign of the default logit signal
    double accept_offset = 0.0;
    double default_offset = 0.0;
};

// Generator configuration. Weights live in z-scored feature space: the logit
// is sum_f w_f * (x_f - mean_f) / std_f + categorical offsets + bias, where
// (mean_f, std_f) are the declared generating moments recorded in the truth
// sidecar. Labels are Bernoulli(sigmoid(logit)).
struct SyntheticSpec {
    size_t n_requests = 11000;

    std::map<std::string, double> phase1_weights;  // over phase-1 numeric features
    std::optional<double> phase1_bias;             // solved from accept_fraction when unset
    double accept_fraction = 0.10;

    std::map<std::string, double> phase2_weights;  // over phase-2 numeric features
    std::optional<double> phase2_bias;
    double default_fraction = 0.20;

    double current_fraction = 0.0;  // accepted rows emitted with a "Current" status

    YearMonth start_month{2010, 1};
    int n_months = 72;

    std::vector<PurposeShare> purposes;
    std::optional<CohortSpec> cohort;

    // linearly lowers the default logit over the final 12 generated months,
    // reaching -drop in the last month; models the outcome-censoring dip
    double final_year_default_logit_drop = 0.0;

    // feature distributions
    NormalDist dti{20.0, 5.0, 2, 0.0, 1e9};
    IntDist emp_length{0, 10};
    NormalDist loan_amount{15000.0, 3000.0, 2, 500.0, 1e9};
    double term_prob_36 = 0.7;
    NormalDist installment{450.0, 100.0, 2, 20.0, 1e9};
    IntDist earliest_credit_months{24, 360};
    IntDist open_credit_lines{1, 30};
    IntDist derogatory_public_records{0, 3};
    NormalDist revolving_utilization{55.0, 12.0, 1, 0.0, 120.0};
    IntDist total_credit_lines{5, 50};
    IntDist mortgage_credit_lines{0, 8};
    IntDist bankruptcies{0, 2};
    NormalDist log_annual_income{11.1, 0.5, 2, 0.0, 0.0};   // log scale; file stores exp()
    IntDist fico{660, 850};
    NormalDist log_revolving_balance{9.0, 1.0, 2, 0.0, 0.0};  // log scale; file stores exp()-1

    static SyntheticSpec defaults();
    void validate() const;
};

struct GroundTruth {
    std::uint64_t seed = 0;
    size_t n_requests = 0, n_accepted = 0, n_rejected = 0, n_phase2 = 0, n_current = 0;
    double phase1_bias = 0.0, phase2_bias = 0.0;
    std::vector<std::pair<std::string, double>> phase1_weights;
    std::vector<std::pair<std::string, double>> phase2_weights;
    // feature -> (mean, std) used when z-scoring inside the logit
    std::map<std::string, std::pair<double, double>> scale;
    std::map<std::string, double> purpose_accept_offsets;
    std::map<std::string, double> purpose_default_offsets;
    std::optional<std::string> cohort_token;
    bool cohort_inverted = false;

    std::string to_json() const;
};

// In-memory mirror of the emitted files, for oracle tests. phase1 holds all
// requests in build_phase1 output order (accepted rows first); phase2 holds
// the accepted rows with a resolved outcome, in accepted-file order.
struct SyntheticData {
    GroundTruth truth;
    SampleSet phase1;
    std::vector<double> phase1_logits;
    SampleSet phase2;
    std::vector<double> phase2_logits;
};

struct SyntheticPaths {
    std::string accepted_csv;
    std::string rejected_csv;
    std::string truth_json;
};

SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed,
                                 const SyntheticPaths& paths);

}  // namespace lendml
