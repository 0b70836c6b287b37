#include "lendml/artifact.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lendml {

namespace {
using ordered_json = nlohmann::ordered_json;

ordered_json matrix_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (size_t r = 0; r < m.rows; ++r) {
        ordered_json row = ordered_json::array();
        for (size_t c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
    Matrix m;
    m.rows = j.size();
    m.cols = m.rows == 0 ? 0 : j.at(0).size();
    m.data.reserve(m.rows * m.cols);
    for (const auto& row : j) {
        if (row.size() != m.cols) fail("artifact: ragged weight matrix");
        for (const auto& v : row) m.data.push_back(v.get<double>());
    }
    return m;
}

ordered_json model_json(const TrainedModel& model) {
    ordered_json j;
    j["family"] = to_string(model.family);
    if (model.family == ModelFamily::Logistic || model.family == ModelFamily::Svm) {
        j["penalty"] = to_string(model.linear.penalty);
        j["alpha"] = model.linear.alpha;
        j["weights"] = model.linear.weights;
        j["bias"] = model.linear.bias;
    } else {
        j["layer_sizes"] = model.mlp.layer_sizes;
        j["dropout_rate"] = model.mlp.dropout_rate;
        j["l2_alpha"] = model.mlp.l2_alpha;
        ordered_json ws = ordered_json::array(), bs = ordered_json::array();
        for (const auto& W : model.mlp.weights) ws.push_back(matrix_json(W));
        for (const auto& b : model.mlp.biases) bs.push_back(b);
        j["weights"] = ws;
        j["biases"] = bs;
    }
    return j;
}

}  // namespace

std::string ModelArtifact::id() const { return hex64(fnv1a64(model_json(model).dump())); }

std::string ModelArtifact::to_json() const {
    ordered_json j;
    j["schema"] = "model-artifact/1";
    j["id"] = id();
    j["phase"] = phase;
    j["preprocess_state_id"] = preprocess_state_id;
    j["preprocess_state_file"] = preprocess_state_file;
    j["model"] = model_json(model);
    return j.dump(2) + "\n";
}

ModelArtifact ModelArtifact::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    if (j.value("schema", "") != "model-artifact/1") fail("unrecognized model artifact schema");
    ModelArtifact a;
    a.phase = j.at("phase").get<int>();
    a.preprocess_state_id = j.at("preprocess_state_id").get<std::string>();
    a.preprocess_state_file = j.at("preprocess_state_file").get<std::string>();
    const auto& m = j.at("model");
    a.model.family = model_family_from_string(m.at("family").get<std::string>());
    if (a.model.family == ModelFamily::Logistic || a.model.family == ModelFamily::Svm) {
        a.model.linear.model_kind =
            a.model.family == ModelFamily::Logistic ? LinearKind::Logistic : LinearKind::HingeSVM;
        a.model.linear.penalty = penalty_from_string(m.at("penalty").get<std::string>());
        a.model.linear.alpha = m.at("alpha").get<double>();
        a.model.linear.weights = m.at("weights").get<std::vector<double>>();
        a.model.linear.bias = m.at("bias").get<double>();
    } else {
        a.model.mlp.layer_sizes = m.at("layer_sizes").get<std::vector<size_t>>();
        a.model.mlp.dropout_rate = m.at("dropout_rate").get<double>();
        a.model.mlp.l2_alpha = m.at("l2_alpha").get<double>();
        for (const auto& W : m.at("weights")) a.model.mlp.weights.push_back(matrix_from_json(W));
        for (const auto& b : m.at("biases"))
            a.model.mlp.biases.push_back(b.get<std::vector<double>>());
        a.model.mlp.validate();
    }
    return a;
}

void ModelArtifact::save(const std::string& path) const { write_text_file(path, to_json()); }

ModelArtifact ModelArtifact::load(const std::string& path) {
    return from_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail("cannot open file for writing: " + path);
    f << content;
}

}  // namespace lendml
