#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lendml/linear_model.hpp"
#include "lendml/metrics.hpp"
#include "lendml/mlp.hpp"
#include "lendml/preprocess.hpp"

namespace lendml {

enum class ModelFamily { Logistic, Svm, MlpLinear, MlpDeep };
std::string to_string(ModelFamily f);
ModelFamily model_family_from_string(const std::string& s);

// A trained model of any family, scoring in its native space (probabilities
// for logistic/MLP, margins for SVM).
struct TrainedModel {
    ModelFamily family = ModelFamily::Logistic;
    LinearParams linear;
    MlpParams mlp;

    std::vector<double> scores(const Matrix& X) const;
    double threshold() const;
};

// Hyperparameters of one grid cell. Linear families vary (penalty, alpha);
// the deep net varies (n1, n2) at fixed dropout and l2.
struct CellParams {
    ModelFamily family = ModelFamily::Logistic;
    Penalty penalty = Penalty::L2;
    double alpha = 0.0;
    size_t n1 = 0, n2 = 0;
    double dropout = 0.0;
    double l2_alpha = 0.0;

    std::string label() const;
};

struct GridSpec {
    ModelFamily family = ModelFamily::Logistic;
    std::vector<double> alphas;                 // linear families
    std::vector<Penalty> penalties{Penalty::L2};
    std::vector<size_t> hidden1{5, 10, 15, 20, 30};  // deep net node grid
    std::vector<size_t> hidden2{1, 3, 5, 10};
    double dropout = 0.20;
    double mlp_l2_alpha = 10.0;
    TrainConfig train;

    // the default 11-point power-of-ten ladder, 1e-5 .. 1e5
    static std::vector<double> default_alpha_grid();
    std::vector<CellParams> enumerate() const;
};

enum class Objective { RecallMacro, AUC };
std::string to_string(Objective o);
Objective objective_from_string(const std::string& s);

struct GridCell {
    CellParams params;
    bool failed = false;
    std::string error;
    EvalReport fit_report;
    EvalReport val_report;
    TrainedModel model;
};

struct GridResult {
    std::vector<GridCell> cells;
    Objective objective = Objective::RecallMacro;
    size_t best = 0;

    const GridCell& best_cell() const { return cells.at(best); }
    std::string to_json() const;
    std::string cells_csv() const;  // one row per cell, for external plotting
};

// Trains every cell on the fit split, scores fit and validation, selects by
// the objective. Ties go to the larger alpha, then enumeration order. Failed
// (diverged) cells are recorded and excluded from selection.
GridResult grid_search(const GridSpec& spec, const DesignMatrix& fit,
                       const std::vector<double>& fit_weights, const DesignMatrix& val,
                       Objective objective);

struct ObjectiveChoice {
    Objective objective;
    size_t cell_index;
    CellParams params;
    EvalReport val_report;
};

struct ObjectiveComparison {
    std::vector<ObjectiveChoice> choices;  // one per objective
    bool selections_differ = false;
    std::string to_json() const;
};

// Re-selects over an already-trained grid under both objectives, surfacing
// how the selections (and their per-class recalls) diverge.
ObjectiveComparison compare_objectives(const GridResult& grid);

size_t select_best(const std::vector<GridCell>& cells, Objective objective);

}  // namespace lendml
