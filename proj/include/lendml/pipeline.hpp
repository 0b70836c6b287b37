#pragma once

#include <string>
#include <vector>

#include "lendml/artifact.hpp"
#include "lendml/config.hpp"
#include "lendml/stats.hpp"

namespace lendml {

struct PhaseOutcome {
    PreprocessState state;
    GridResult grid;
    ObjectiveComparison objective_comparison;
    EvalReport test_report;
    ModelArtifact artifact;
    size_t n_total = 0, n_fit = 0, n_val = 0, n_test = 0;
    double cohort_share = -1.0;  // fraction of built rows carrying the cohort token
    std::string parse_text;
};

// Full run for the configured phase: ingest, build, coverage drop, time
// splits, preprocessing fitted on the fit portion, grid search, one test
// evaluation of the selected model, artifacts and reports written to
// config.out_dir. Output bytes depend only on (input files, config, seed).
PhaseOutcome run_phase(const RunConfig& config);

struct CohortSuiteOutcome {
    std::vector<PhaseOutcome> runs;  // phase1/subset, phase1/all, phase2/subset, phase2/all
    std::string summary_json;
};

// The 2x2 of {phase 1, phase 2} x {train_and_test, test_only} for the
// configured cohort token, with a side-by-side comparison summary.
CohortSuiteOutcome run_cohort_suite(const RunConfig& config);

MonthlyStats stats_report(const RunConfig& config);

struct PredictSummary {
    size_t rows_scored = 0;
    size_t rows_skipped = 0;
};

// Scores an input CSV with a saved artifact + its paired preprocess state.
// Appends score and predicted_class columns; never refits anything.
PredictSummary predict_file(const std::string& artifact_path, const std::string& input_csv,
                            const std::string& output_csv, Source input_schema,
                            const SchemaMap& schema);

struct WeightGraphSummary {
    size_t n_nodes = 0;
    size_t n_edges = 0;
};

// Node/edge lists for an MLP artifact: per-node normalized total outgoing
// absolute weight, per-edge signed weight.
WeightGraphSummary export_network_weights(const std::string& artifact_path,
                                          const std::string& nodes_csv_path,
                                          const std::string& edges_csv_path);

}  // namespace lendml
