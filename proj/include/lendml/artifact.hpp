#pragma once

#include <string>

#include "lendml/grid.hpp"
#include "lendml/preprocess.hpp"

namespace lendml {

// Saved model: parameters at full decimal round-trip precision plus the
// hyperparameters and the id of the preprocess state it was trained with.
// The state file is referenced by bare name and resolved next to the
// artifact, so a (model, state) pair moves as a unit.
struct ModelArtifact {
    TrainedModel model;
    int phase = 1;  // 1 scores loan requests, 2 scores accepted loans
    std::string preprocess_state_id;
    std::string preprocess_state_file;

    std::string id() const;  // content hash over parameters
    std::string to_json() const;
    static ModelArtifact from_json(const std::string& text);

    void save(const std::string& path) const;
    static ModelArtifact load(const std::string& path);
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lendml
