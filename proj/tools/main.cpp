#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lendml/pipeline.hpp"

namespace {

using namespace lendml;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir, accepted, rejected;
    std::optional<std::string> objective, family, cutoff, cohort_token, cohort_scope;
    std::optional<double> train_fraction;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required = true) {
    auto* opt = cmd->add_option("--config", f.config_path, "run configuration (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--seed", f.seed, "override config seed");
    cmd->add_option("--out", f.out_dir, "override output directory");
    cmd->add_option("--accepted", f.accepted, "override accepted-loans CSV path");
    cmd->add_option("--rejected", f.rejected, "override rejected-loans CSV path");
    cmd->add_option("--objective", f.objective, "grid objective: recall_macro|auc");
    cmd->add_option("--family", f.family, "model family: logistic|svm|mlp_linear|mlp_deep");
    cmd->add_option("--train-fraction", f.train_fraction, "train split fraction");
    cmd->add_option("--cutoff", f.cutoff, "exclude rows after this month (YYYY-MM)");
    cmd->add_option("--cohort-token", f.cohort_token, "cohort purpose token");
    cmd->add_option("--cohort-scope", f.cohort_scope, "train_and_test|test_only");
}

RunConfig resolve(const CommonFlags& f) {
    RunConfig cfg = f.config_path.empty() ? RunConfig{} : load_run_config(f.config_path);
    if (f.seed) cfg.seed = *f.seed;
    if (f.out_dir) cfg.out_dir = *f.out_dir;
    if (f.accepted) cfg.accepted_csv = *f.accepted;
    if (f.rejected) cfg.rejected_csv = *f.rejected;
    if (f.objective) cfg.objective = objective_from_string(*f.objective);
    if (f.family) cfg.family = model_family_from_string(*f.family);
    if (f.train_fraction) cfg.train_fraction = *f.train_fraction;
    if (f.cutoff) {
        auto ym = parse_year_month(*f.cutoff);
        if (!ym) fail("cannot parse --cutoff: " + *f.cutoff);
        cfg.cutoff_date = ym;
    }
    if (f.cohort_token) {
        if (!cfg.cohort) cfg.cohort = CohortConfig{};
        cfg.cohort->token = *f.cohort_token;
    }
    if (f.cohort_scope) {
        if (!cfg.cohort) cfg.cohort = CohortConfig{};
        cfg.cohort->scope = cohort_scope_from_string(*f.cohort_scope);
    }
    return cfg;
}

void print_phase_outcome(const PhaseOutcome& outcome, const std::string& out_dir) {
    const EvalReport& t = outcome.test_report;
    std::printf("selected: %s\n", outcome.grid.best_cell().params.label().c_str());
    std::printf("test: auc=%.4f recall0=%.4f recall1=%.4f recall_macro=%.4f (n=%zu)\n", t.auc,
                t.recall_class0, t.recall_class1, t.recall_macro, t.n_rows);
    std::printf("outputs written to %s\n", out_dir.c_str());
}

int run(int argc, char** argv) {
    CLI::App app{"two-phase loan acceptance and default modelling"};
    app.require_subcommand(1);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic loan CSVs with known truth");
    std::string synth_config;
    std::optional<std::uint64_t> synth_seed;
    std::optional<std::string> synth_out;
    synth_cmd->add_option("--config", synth_config, "generator configuration (JSON)");
    synth_cmd->add_option("--seed", synth_seed, "override generator seed");
    synth_cmd->add_option("--out", synth_out, "override output directory");

    // ingest-check
    auto* ingest_cmd = app.add_subcommand("ingest-check", "parse the loan files and print summaries");
    CommonFlags ingest_flags;
    int ingest_phase = 1;
    add_common(ingest_cmd, ingest_flags, false);
    ingest_cmd->add_option("--phase", ingest_phase, "1 or 2");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "monthly time-series statistics and plot data");
    CommonFlags stats_flags;
    add_common(stats_cmd, stats_flags, false);

    // phase1 / phase2
    auto* p1_cmd = app.add_subcommand("phase1", "acceptance model: grid search + evaluation");
    CommonFlags p1_flags;
    add_common(p1_cmd, p1_flags);
    auto* p2_cmd = app.add_subcommand("phase2", "default model: grid search + evaluation");
    CommonFlags p2_flags;
    add_common(p2_cmd, p2_flags);

    // cohort
    auto* cohort_cmd = app.add_subcommand("cohort", "2x2 cohort suite for one purpose token");
    CommonFlags cohort_flags;
    add_common(cohort_cmd, cohort_flags);

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "score a CSV with a saved model artifact");
    std::string model_path, input_path, output_path, predict_schema;
    std::string predict_config;
    predict_cmd->add_option("--model", model_path, "model artifact (JSON)")->required();
    predict_cmd->add_option("--input", input_path, "input CSV")->required();
    predict_cmd->add_option("--output", output_path, "scored output CSV")->required();
    predict_cmd->add_option("--schema", predict_schema,
                            "input schema: accepted|rejected (default by phase)");
    predict_cmd->add_option("--config", predict_config, "run config providing a column map");

    // export-weights
    auto* export_cmd = app.add_subcommand("export-weights", "emit MLP weight graph (nodes+edges CSV)");
    std::string export_model, nodes_path, edges_path;
    export_cmd->add_option("--model", export_model, "model artifact (JSON)")->required();
    export_cmd->add_option("--nodes", nodes_path, "node list CSV output")->required();
    export_cmd->add_option("--edges", edges_path, "edge list CSV output")->required();

    CLI11_PARSE(app, argc, argv);

    if (synth_cmd->parsed()) {
        SynthConfig cfg = synth_config.empty() ? SynthConfig{} : load_synth_config(synth_config);
        if (synth_seed) cfg.seed = *synth_seed;
        if (synth_out) cfg.out_dir = *synth_out;
        std::filesystem::create_directories(cfg.out_dir);
        SyntheticPaths paths{cfg.out_dir + "/accepted.csv", cfg.out_dir + "/rejected.csv",
                             cfg.out_dir + "/truth.json"};
        SyntheticData data = generate_synthetic(cfg.spec, cfg.seed, paths);
        std::printf("wrote %s (%zu rows), %s (%zu rows), %s\n", paths.accepted_csv.c_str(),
                    data.truth.n_accepted, paths.rejected_csv.c_str(), data.truth.n_rejected,
                    paths.truth_json.c_str());
        return 0;
    }
    if (ingest_cmd->parsed()) {
        RunConfig cfg = resolve(ingest_flags);
        cfg.phase = ingest_phase;
        ParseResult acc = parse_accepted(cfg.accepted_csv, cfg.schema);
        std::string text = acc.summary.to_text();
        if (cfg.phase == 1) {
            ParseResult rej = parse_rejected(cfg.rejected_csv, cfg.schema);
            text += rej.summary.to_text();
            text += build_phase1(acc.records, rej.records).summary.to_text("phase1");
        } else {
            text += build_phase2(acc.records).summary.to_text("phase2");
        }
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    if (stats_cmd->parsed()) {
        RunConfig cfg = resolve(stats_flags);
        MonthlyStats stats = stats_report(cfg);
        std::printf("%zu months; series written to %s\n", stats.months.size(),
                    cfg.out_dir.c_str());
        if (stats.suggested_cutoff)
            std::printf("suggested cutoff (advisory): %s\n",
                        to_string(*stats.suggested_cutoff).c_str());
        return 0;
    }
    if (p1_cmd->parsed() || p2_cmd->parsed()) {
        RunConfig cfg = resolve(p1_cmd->parsed() ? p1_flags : p2_flags);
        cfg.phase = p1_cmd->parsed() ? 1 : 2;
        PhaseOutcome outcome = run_phase(cfg);
        print_phase_outcome(outcome, cfg.out_dir);
        return 0;
    }
    if (cohort_cmd->parsed()) {
        RunConfig cfg = resolve(cohort_flags);
        CohortSuiteOutcome outcome = run_cohort_suite(cfg);
        std::fputs(outcome.summary_json.c_str(), stdout);
        std::printf("outputs written to %s\n", cfg.out_dir.c_str());
        return 0;
    }
    if (predict_cmd->parsed()) {
        SchemaMap schema = SchemaMap::defaults();
        if (!predict_config.empty()) schema = load_run_config(predict_config).schema;
        Source source;
        if (predict_schema.empty()) {
            ModelArtifact artifact = ModelArtifact::load(model_path);
            source = artifact.phase == 2 ? Source::Accepted : Source::Rejected;
        } else if (predict_schema == "accepted") {
            source = Source::Accepted;
        } else if (predict_schema == "rejected") {
            source = Source::Rejected;
        } else {
            fail("--schema must be accepted or rejected");
        }
        PredictSummary s = predict_file(model_path, input_path, output_path, source, schema);
        std::printf("scored %zu rows (%zu skipped) -> %s\n", s.rows_scored, s.rows_skipped,
                    output_path.c_str());
        return 0;
    }
    if (export_cmd->parsed()) {
        WeightGraphSummary s = export_network_weights(export_model, nodes_path, edges_path);
        std::printf("wrote %zu nodes -> %s, %zu edges -> %s\n", s.n_nodes, nodes_path.c_str(),
                    s.n_edges, edges_path.c_str());
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const lendml::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
