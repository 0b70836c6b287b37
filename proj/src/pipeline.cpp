#include "lendml/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lendml/csv.hpp"

namespace fs = std::filesystem;

namespace lendml {

namespace {
using ordered_json = nlohmann::ordered_json;

std::vector<size_t> rows_with_purpose(const SampleSet& set, const std::string& token) {
    const int ci = set.categorical_index("purpose");
    if (ci < 0) fail("cohort filtering requires a purpose column");
    std::vector<size_t> rows;
    for (size_t r = 0; r < set.n_rows(); ++r)
        if (set.categorical[(size_t)ci][r] == token) rows.push_back(r);
    return rows;
}

SampleSet drop_categorical_columns(const SampleSet& set) {
    SampleSet out;
    for (size_t c = 0; c < set.numeric_names.size(); ++c) {
        out.add_numeric_column(set.numeric_names[c]);
        out.numeric[c] = set.numeric[c];
    }
    out.dates = set.dates;
    out.labels = set.labels;
    out.recompute_coverage();
    return out;
}

void write_out(const fs::path& dir, const std::string& name, const std::string& content) {
    write_text_file((dir / name).string(), content);
}

}  // namespace

PhaseOutcome run_phase(const RunConfig& config) {
    const std::string stage = config.phase == 1 ? "phase1" : "phase2";
    PhaseOutcome out;
    std::ostringstream parse_text;

    // ingest + build
    ParseResult acc = parse_accepted(config.accepted_csv, config.schema);
    parse_text << acc.summary.to_text();
    BuildResult built;
    if (config.phase == 1) {
        ParseResult rej = parse_rejected(config.rejected_csv, config.schema);
        parse_text << rej.summary.to_text();
        built = build_phase1(acc.records, rej.records);
        parse_text << built.summary.to_text("phase1");
    } else {
        built = build_phase2(acc.records);
        parse_text << built.summary.to_text("phase2");
    }
    SampleSet set = std::move(built.set);
    out.n_total = set.n_rows();

    if (config.cohort) {
        const std::vector<size_t> cohort_rows = rows_with_purpose(set, config.cohort->token);
        if (cohort_rows.empty())
            fail(stage + ": cohort token absent from data: " + config.cohort->token);
        out.cohort_share = (double)cohort_rows.size() / (double)set.n_rows();
        if (config.cohort->scope == CohortScope::TrainAndTest) set = set.select_rows(cohort_rows);
    }

    CoverageResult cov = drop_low_coverage(set, config.coverage_threshold);
    set = std::move(cov.set);
    if (config.numeric_only) set = drop_categorical_columns(set);

    // date-ordered splits: train/test, then fit/validation inside train
    SplitResult train_test =
        time_split(set, SplitSpec{config.effective_train_fraction(), config.cutoff_date});
    SplitResult fit_val = time_split(train_test.train, SplitSpec{config.fit_val_fraction, {}});
    SampleSet fit = std::move(fit_val.train);
    if (config.effective_downsample()) fit = downsample_majority(fit, config.seed);

    out.state = fit_impute_scale(fit);
    out.state.dropped_columns = cov.dropped;

    DesignMatrix fit_d = apply(out.state, fit);
    DesignMatrix val_d = apply(out.state, fit_val.test);

    SampleSet test = std::move(train_test.test);
    if (config.cohort && config.cohort->scope == CohortScope::TestOnly) {
        const std::vector<size_t> rows = rows_with_purpose(test, config.cohort->token);
        if (rows.empty())
            fail(stage + ": cohort token absent from the test split: " + config.cohort->token);
        test = test.select_rows(rows);
    }
    DesignMatrix test_d = apply(out.state, test);

    out.n_fit = fit_d.X.rows;
    out.n_val = val_d.X.rows;
    out.n_test = test_d.X.rows;

    std::vector<double> fit_weights =
        config.effective_class_weighting()
            ? sample_weight_vector(fit_d.labels, class_weights(fit_d.labels))
            : std::vector<double>(fit_d.X.rows, 1.0);

    out.grid = grid_search(config.grid_spec(), fit_d, fit_weights, val_d, config.objective);
    out.objective_comparison = compare_objectives(out.grid);

    const GridCell& best = out.grid.best_cell();
    out.artifact.model = best.model;
    out.artifact.phase = config.phase;
    out.artifact.preprocess_state_id = out.state.id();
    out.artifact.preprocess_state_file = "preprocess_state.json";
    out.test_report = recall_report(best.model.scores(test_d.X), test_d.labels,
                                    best.model.threshold(), "test", out.artifact.id());
    out.parse_text = parse_text.str();

    // reports and artifacts; no timestamps or output paths so rerun bytes match
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    write_out(dir, "parse_summary.txt", out.parse_text);
    write_out(dir, "preprocess_state.json", out.state.to_json());
    write_out(dir, "model.json", out.artifact.to_json());
    write_out(dir, "grid.json", out.grid.to_json());
    write_out(dir, "grid_cells.csv", out.grid.cells_csv());
    write_out(dir, "objective_comparison.json", out.objective_comparison.to_json());
    write_out(dir, "report_fit.json", best.fit_report.to_json() + "\n");
    write_out(dir, "report_validation.json", best.val_report.to_json() + "\n");
    write_out(dir, "report_test.json", out.test_report.to_json() + "\n");

    ordered_json run;
    run["schema"] = "run-report/1";
    run["config"] = ordered_json::parse(config.echo_json());
    run["rows"] = {{"built", out.n_total},
                   {"fit", out.n_fit},
                   {"validation", out.n_val},
                   {"test", out.n_test}};
    if (out.cohort_share >= 0.0) run["cohort_share"] = out.cohort_share;
    run["preprocess_state_id"] = out.state.id();
    run["model_id"] = out.artifact.id();
    run["selected_cell"] = best.params.label();
    run["test"] = ordered_json::parse(out.test_report.to_json());
    write_out(dir, "run_report.json", run.dump(2) + "\n");
    return out;
}

CohortSuiteOutcome run_cohort_suite(const RunConfig& config) {
    if (!config.cohort || config.cohort->token.empty())
        fail("cohort: a cohort token must be configured");
    CohortSuiteOutcome out;
    ordered_json rows = ordered_json::array();
    const fs::path base(config.out_dir);

    struct Leg {
        int phase;
        CohortScope scope;
        const char* dir;
    };
    const Leg legs[] = {{1, CohortScope::TrainAndTest, "phase1_subset_trained"},
                        {1, CohortScope::TestOnly, "phase1_all_trained"},
                        {2, CohortScope::TrainAndTest, "phase2_subset_trained"},
                        {2, CohortScope::TestOnly, "phase2_all_trained"}};
    for (const Leg& leg : legs) {
        RunConfig leg_cfg = config;
        leg_cfg.phase = leg.phase;
        leg_cfg.cohort->scope = leg.scope;
        leg_cfg.out_dir = (base / leg.dir).string();
        PhaseOutcome outcome = run_phase(leg_cfg);
        ordered_json r;
        r["phase"] = leg.phase;
        r["scope"] = to_string(leg.scope);
        r["cohort_share"] = outcome.cohort_share;
        r["selected_cell"] = outcome.grid.best_cell().params.label();
        r["test_auc"] = outcome.test_report.auc;
        r["test_recall_class0"] = outcome.test_report.recall_class0;
        r["test_recall_class1"] = outcome.test_report.recall_class1;
        r["test_recall_macro"] = outcome.test_report.recall_macro;
        r["n_test"] = outcome.test_report.n_rows;
        rows.push_back(r);
        out.runs.push_back(std::move(outcome));
    }
    ordered_json j;
    j["schema"] = "cohort-suite/1";
    j["cohort_token"] = config.cohort->token;
    j["runs"] = rows;
    out.summary_json = j.dump(2) + "\n";
    fs::create_directories(base);
    write_text_file((base / "cohort_summary.json").string(), out.summary_json);
    return out;
}

MonthlyStats stats_report(const RunConfig& config) {
    ParseResult acc = parse_accepted(config.accepted_csv, config.schema);
    ParseResult rej = parse_rejected(config.rejected_csv, config.schema);
    MonthlyStats stats = compute_monthly_stats(acc.records, rej.records);

    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    write_out(dir, "monthly_stats.txt",
              acc.summary.to_text() + rej.summary.to_text() + stats.to_text());
    write_out(dir, "stats_default_fraction.csv", stats.default_fraction.to_csv());
    write_out(dir, "stats_rejected_fraction.csv", stats.rejected_fraction.to_csv());
    write_out(dir, "stats_total_requested.csv", stats.total_requested.to_csv());
    return stats;
}

PredictSummary predict_file(const std::string& artifact_path, const std::string& input_csv,
                            const std::string& output_csv, Source input_schema,
                            const SchemaMap& schema) {
    ModelArtifact artifact = ModelArtifact::load(artifact_path);
    const fs::path state_path =
        fs::path(artifact_path).parent_path() / artifact.preprocess_state_file;
    PreprocessState state = PreprocessState::from_json(read_text_file(state_path.string()));
    if (state.id() != artifact.preprocess_state_id)
        fail("predict: preprocess state id mismatch (artifact expects " +
             artifact.preprocess_state_id + ", file " + state_path.string() + " has " +
             state.id() + ")");

    ParseOptions opts;
    opts.require_date = false;
    opts.keep_raw_cells = true;
    ParseResult parsed = input_schema == Source::Accepted
                             ? parse_accepted(input_csv, schema, opts)
                             : parse_rejected(input_csv, schema, opts);

    BuildResult built = artifact.phase == 2 ? build_phase2(parsed.records, BuildMode::Scoring)
                                            : build_phase1_features(parsed.records);
    DesignMatrix d = apply(state, built.set);
    const std::vector<double> scores =
        d.X.rows > 0 ? artifact.model.scores(d.X) : std::vector<double>{};
    const double threshold = artifact.model.threshold();

    CsvWriter writer(output_csv);
    std::vector<std::string> header = parsed.header;
    header.push_back("score");
    header.push_back("predicted_class");
    writer.write_row(header);
    for (size_t r = 0; r < parsed.records.size(); ++r) {
        std::vector<std::string> row = parsed.records[r].raw_cells;
        row.push_back(format_double(scores[r]));
        row.push_back(scores[r] >= threshold ? "1" : "0");
        writer.write_row(row);
    }
    return {parsed.records.size(), parsed.summary.rows_dropped()};
}

WeightGraphSummary export_network_weights(const std::string& artifact_path,
                                          const std::string& nodes_csv_path,
                                          const std::string& edges_csv_path) {
    ModelArtifact artifact = ModelArtifact::load(artifact_path);
    if (artifact.model.family != ModelFamily::MlpLinear &&
        artifact.model.family != ModelFamily::MlpDeep)
        fail("export-weights: artifact is not a neural network model");
    const MlpParams& mlp = artifact.model.mlp;

    // total outgoing absolute weight per node; output-layer nodes have none
    std::vector<std::vector<double>> outgoing(mlp.layer_sizes.size());
    for (size_t l = 0; l < mlp.layer_sizes.size(); ++l)
        outgoing[l].assign(mlp.layer_sizes[l], 0.0);
    for (size_t l = 0; l < mlp.n_layers(); ++l)
        for (size_t i = 0; i < mlp.weights[l].rows; ++i)
            for (size_t j = 0; j < mlp.weights[l].cols; ++j)
                outgoing[l][i] += std::fabs(mlp.weights[l].at(i, j));
    double max_out = 0.0;
    for (const auto& layer : outgoing)
        for (double v : layer) max_out = std::max(max_out, v);

    WeightGraphSummary summary;
    CsvWriter nodes(nodes_csv_path);
    nodes.write_row({"node", "layer", "unit", "total_outgoing_abs_weight", "normalized"});
    for (size_t l = 0; l < outgoing.size(); ++l)
        for (size_t u = 0; u < outgoing[l].size(); ++u) {
            nodes.write_row({"L" + std::to_string(l) + "U" + std::to_string(u),
                             std::to_string(l), std::to_string(u), format_double(outgoing[l][u]),
                             format_double(max_out > 0.0 ? outgoing[l][u] / max_out : 0.0)});
            ++summary.n_nodes;
        }
    CsvWriter edges(edges_csv_path);
    edges.write_row({"source", "target", "weight"});
    for (size_t l = 0; l < mlp.n_layers(); ++l)
        for (size_t i = 0; i < mlp.weights[l].rows; ++i)
            for (size_t j = 0; j < mlp.weights[l].cols; ++j) {
                edges.write_row({"L" + std::to_string(l) + "U" + std::to_string(i),
                                 "L" + std::to_string(l + 1) + "U" + std::to_string(j),
                                 format_double(mlp.weights[l].at(i, j))});
                ++summary.n_edges;
            }
    return summary;
}

}  // namespace lendml
