#pragma once

#include "cfceval/dimensions.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cfceval {

/// One generated output from a sidecar per-model outputs file, keyed by
/// instance id.
struct ModelOutput {
    std::string id;
    std::string model;
    std::optional<std::string> generated;
};

/// A per-instance judgment score (human or LLM), keyed by (instance, model).
struct Judgment {
    std::string id;
    std::string model;
    double score = 0.0;
};

/// Load a line-delimited dataset: one JSON instance per line with fields
/// id, language, cwe, transform, function, vulnerable_code, references and
/// optional generated. Malformed lines and duplicate ids raise InputError
/// with the offending line number.
std::vector<EvalInstance> load_dataset(const std::filesystem::path& path);

/// Records: {"id", "model", "generated"} per line; generated may be null.
std::vector<ModelOutput> load_outputs(const std::filesystem::path& path);

/// Records: {"id", "model", "score"} per line.
std::vector<Judgment> load_judgments(const std::filesystem::path& path);

void save_dataset(std::ostream& out, const std::vector<EvalInstance>& instances);
void save_dataset(const std::filesystem::path& path, const std::vector<EvalInstance>& instances);

} // namespace cfceval
