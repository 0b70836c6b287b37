#pragma once

#include <optional>
#include <string>

#include "lendml/grid.hpp"
#include "lendml/ingest.hpp"
#include "lendml/synth.hpp"

namespace lendml {

enum class CohortScope { TrainAndTest, TestOnly };
std::string to_string(CohortScope s);
CohortScope cohort_scope_from_string(const std::string& s);

struct CohortConfig {
    std::string token;
    CohortScope scope = CohortScope::TrainAndTest;
};

// One experiment run, loadable from a JSON config file; CLI flags mirror the
// top-level keys and override them.
struct RunConfig {
    std::string accepted_csv;
    std::string rejected_csv;
    std::string out_dir = ".";
    SchemaMap schema = SchemaMap::defaults();

    int phase = 1;
    std::uint64_t seed = 1;
    double train_fraction = -1.0;   // <0 means phase default (0.75 / 0.90)
    double fit_val_fraction = 0.8;  // time-ordered fit/validation split of train
    std::optional<YearMonth> cutoff_date;
    double coverage_threshold = 0.70;
    Objective objective = Objective::RecallMacro;

    ModelFamily family = ModelFamily::Logistic;
    std::vector<double> alphas;  // empty -> default power-of-ten ladder
    std::vector<Penalty> penalties{Penalty::L2};
    std::vector<size_t> hidden1{5, 10, 15, 20, 30};
    std::vector<size_t> hidden2{1, 3, 5, 10};
    double dropout = 0.20;
    double mlp_l2_alpha = 10.0;
    bool numeric_only = false;  // drop categorical features before encoding

    TrainConfig train;
    std::optional<bool> class_weighting;  // phase default: on for 1, off for 2
    std::optional<bool> downsample;       // phase default: off for 1, on for 2

    std::optional<CohortConfig> cohort;

    double effective_train_fraction() const;
    bool effective_class_weighting() const;
    bool effective_downsample() const;
    GridSpec grid_spec() const;
    std::string echo_json() const;  // config echo for reports; excludes out_dir
};

RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_json(const std::string& text);

// synth subcommand configuration: generator spec plus output locations
struct SynthConfig {
    SyntheticSpec spec = SyntheticSpec::defaults();
    std::uint64_t seed = 7;
    std::string out_dir = ".";
};

SynthConfig load_synth_config(const std::string& path);
SynthConfig synth_config_from_json(const std::string& text);

}  // namespace lendml
