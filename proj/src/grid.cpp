#include "lendml/grid.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lendml {

namespace {
using ordered_json = nlohmann::ordered_json;

ordered_json report_json(const EvalReport& r) {
    return ordered_json{{"auc", r.auc},
                        {"recall_class0", r.recall_class0},
                        {"recall_class1", r.recall_class1},
                        {"recall_macro", r.recall_macro},
                        {"n_rows", r.n_rows}};
}

ordered_json cell_params_json(const CellParams& p) {
    ordered_json j;
    j["family"] = to_string(p.family);
    if (p.family == ModelFamily::Logistic || p.family == ModelFamily::Svm) {
        j["penalty"] = to_string(p.penalty);
        j["alpha"] = p.alpha;
    } else {
        j["l2_alpha"] = p.l2_alpha;
        j["dropout"] = p.dropout;
        if (p.family == ModelFamily::MlpDeep) {
            j["n1"] = p.n1;
            j["n2"] = p.n2;
        }
    }
    return j;
}

}  // namespace

std::string to_string(ModelFamily f) {
    switch (f) {
        case ModelFamily::Logistic: return "logistic";
        case ModelFamily::Svm: return "svm";
        case ModelFamily::MlpLinear: return "mlp_linear";
        case ModelFamily::MlpDeep: return "mlp_deep";
    }
    return "?";
}

ModelFamily model_family_from_string(const std::string& s) {
    if (s == "logistic" || s == "lr") return ModelFamily::Logistic;
    if (s == "svm") return ModelFamily::Svm;
    if (s == "mlp_linear" || s == "mlp-linear") return ModelFamily::MlpLinear;
    if (s == "mlp_deep" || s == "mlp-deep") return ModelFamily::MlpDeep;
    fail("unknown model family: " + s);
}

std::string to_string(Objective o) { return o == Objective::AUC ? "auc" : "recall_macro"; }

Objective objective_from_string(const std::string& s) {
    if (s == "auc") return Objective::AUC;
    if (s == "recall_macro" || s == "recall-macro") return Objective::RecallMacro;
    fail("unknown objective: " + s);
}

std::vector<double> TrainedModel::scores(const Matrix& X) const {
    if (family == ModelFamily::Logistic || family == ModelFamily::Svm)
        return linear_scores(linear, X);
    return mlp_predict(mlp, X);
}

double TrainedModel::threshold() const { return family == ModelFamily::Svm ? 0.0 : 0.5; }

std::string CellParams::label() const {
    std::ostringstream os;
    if (family == ModelFamily::Logistic || family == ModelFamily::Svm)
        os << to_string(family) << " " << to_string(penalty) << " alpha=" << format_double(alpha);
    else if (family == ModelFamily::MlpLinear)
        os << "mlp_linear l2=" << format_double(l2_alpha);
    else
        os << "mlp_deep n1=" << n1 << " n2=" << n2;
    return os.str();
}

std::vector<double> GridSpec::default_alpha_grid() {
    std::vector<double> alphas;
    for (int k = -5; k <= 5; ++k) alphas.push_back(std::pow(10.0, k));
    return alphas;
}

std::vector<CellParams> GridSpec::enumerate() const {
    std::vector<CellParams> cells;
    if (family == ModelFamily::Logistic || family == ModelFamily::Svm) {
        const auto& grid = alphas.empty() ? default_alpha_grid() : alphas;
        for (Penalty pen : penalties)
            for (double a : grid) {
                CellParams c;
                c.family = family;
                c.penalty = pen;
                c.alpha = a;
                cells.push_back(c);
            }
    } else if (family == ModelFamily::MlpLinear) {
        CellParams c;
        c.family = family;
        c.dropout = 0.0;  // no hidden layer to drop
        c.l2_alpha = mlp_l2_alpha;
        cells.push_back(c);
    } else {
        for (size_t n1 : hidden1)
            for (size_t n2 : hidden2) {
                CellParams c;
                c.family = family;
                c.n1 = n1;
                c.n2 = n2;
                c.dropout = dropout;
                c.l2_alpha = mlp_l2_alpha;
                cells.push_back(c);
            }
    }
    if (cells.empty()) fail("grid_search: empty hyperparameter grid");
    return cells;
}

namespace {

double objective_value(const GridCell& cell, Objective objective) {
    return objective == Objective::AUC ? cell.val_report.auc : cell.val_report.recall_macro;
}

TrainedModel train_cell(const GridSpec& spec, const CellParams& cell, const DesignMatrix& fit,
                        const std::vector<double>& fit_weights, const DesignMatrix& val) {
    TrainedModel model;
    model.family = cell.family;
    if (cell.family == ModelFamily::Logistic || cell.family == ModelFamily::Svm) {
        const LinearKind kind =
            cell.family == ModelFamily::Logistic ? LinearKind::Logistic : LinearKind::HingeSVM;
        model.linear = train_linear(kind, cell.penalty, cell.alpha, fit.X, fit.labels,
                                    fit_weights, spec.train, val.X, val.labels)
                           .params;
    } else {
        std::vector<size_t> sizes;
        if (cell.family == ModelFamily::MlpLinear) sizes = {fit.X.cols, 1};
        else sizes = {fit.X.cols, cell.n1, cell.n2, 1};
        model.mlp = train_mlp(sizes, cell.dropout, cell.l2_alpha, fit.X, fit.labels, fit_weights,
                              spec.train, val.X, val.labels)
                        .params;
    }
    return model;
}

}  // namespace

size_t select_best(const std::vector<GridCell>& cells, Objective objective) {
    bool found = false;
    size_t best = 0;
    double best_value = 0.0, best_alpha = -1.0;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].failed) continue;
        const double v = objective_value(cells[i], objective);
        const double a = cells[i].params.alpha;
        // ties prefer stronger regularization, then enumeration order
        if (!found || v > best_value || (v == best_value && a > best_alpha)) {
            found = true;
            best = i;
            best_value = v;
            best_alpha = a;
        }
    }
    if (!found) fail("grid_search: every grid cell failed");
    return best;
}

GridResult grid_search(const GridSpec& spec, const DesignMatrix& fit,
                       const std::vector<double>& fit_weights, const DesignMatrix& val,
                       Objective objective) {
    GridResult result;
    result.objective = objective;
    for (const CellParams& params : spec.enumerate()) {
        GridCell cell;
        cell.params = params;
        try {
            cell.model = train_cell(spec, params, fit, fit_weights, val);
            const double thr = cell.model.threshold();
            cell.fit_report =
                recall_report(cell.model.scores(fit.X), fit.labels, thr, "fit", params.label());
            cell.val_report = recall_report(cell.model.scores(val.X), val.labels, thr,
                                            "validation", params.label());
        } catch (const Error& e) {
            cell.failed = true;
            cell.error = e.what();
        }
        result.cells.push_back(std::move(cell));
    }
    result.best = select_best(result.cells, objective);
    return result;
}

ObjectiveComparison compare_objectives(const GridResult& grid) {
    ObjectiveComparison cmp;
    for (Objective o : {Objective::RecallMacro, Objective::AUC}) {
        const size_t idx = select_best(grid.cells, o);
        cmp.choices.push_back({o, idx, grid.cells[idx].params, grid.cells[idx].val_report});
    }
    cmp.selections_differ = cmp.choices[0].cell_index != cmp.choices[1].cell_index;
    return cmp;
}

std::string GridResult::to_json() const {
    ordered_json j;
    j["objective"] = to_string(objective);
    j["best"] = best;
    j["best_label"] = cells.at(best).params.label();
    ordered_json arr = ordered_json::array();
    for (const auto& cell : cells) {
        ordered_json c;
        c["params"] = cell_params_json(cell.params);
        c["failed"] = cell.failed;
        if (cell.failed) c["error"] = cell.error;
        else {
            c["fit"] = report_json(cell.fit_report);
            c["validation"] = report_json(cell.val_report);
        }
        arr.push_back(c);
    }
    j["cells"] = arr;
    return j.dump(2) + "\n";
}

std::string GridResult::cells_csv() const {
    std::ostringstream os;
    os << "cell,family,penalty,alpha,n1,n2,failed,"
          "fit_auc,fit_recall0,fit_recall1,fit_recall_macro,"
          "val_auc,val_recall0,val_recall1,val_recall_macro\n";
    for (size_t i = 0; i < cells.size(); ++i) {
        const GridCell& c = cells[i];
        const bool linear =
            c.params.family == ModelFamily::Logistic || c.params.family == ModelFamily::Svm;
        os << i << ',' << to_string(c.params.family) << ','
           << (linear ? to_string(c.params.penalty) : "") << ','
           << (linear ? format_double(c.params.alpha) : "") << ','
           << (c.params.family == ModelFamily::MlpDeep ? std::to_string(c.params.n1) : "") << ','
           << (c.params.family == ModelFamily::MlpDeep ? std::to_string(c.params.n2) : "") << ','
           << (c.failed ? "1" : "0") << ',';
        if (c.failed) {
            os << ",,,,,,,\n";
            continue;
        }
        os << format_double(c.fit_report.auc) << ',' << format_double(c.fit_report.recall_class0)
           << ',' << format_double(c.fit_report.recall_class1) << ','
           << format_double(c.fit_report.recall_macro) << ',' << format_double(c.val_report.auc)
           << ',' << format_double(c.val_report.recall_class0) << ','
           << format_double(c.val_report.recall_class1) << ','
           << format_double(c.val_report.recall_macro) << "\n";
    }
    return os.str();
}

std::string ObjectiveComparison::to_json() const {
    ordered_json j;
    ordered_json arr = ordered_json::array();
    for (const auto& choice : choices) {
        ordered_json c;
        c["objective"] = to_string(choice.objective);
        c["cell_index"] = choice.cell_index;
        c["params"] = cell_params_json(choice.params);
        c["validation"] = report_json(choice.val_report);
        arr.push_back(c);
    }
    j["choices"] = arr;
    j["selections_differ"] = selections_differ;
    return j.dump(2) + "\n";
}

}  // namespace lendml
