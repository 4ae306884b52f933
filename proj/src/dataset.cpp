#include "cfceval/dataset.hpp"

#include "cfceval/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <unordered_set>

namespace cfceval {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json parse_line_or_throw(const std::filesystem::path& path, std::size_t lineno,
                         const std::string& line) {
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object())
        throw InputError(path.string() + ":" + std::to_string(lineno) + ": malformed JSON record");
    return record;
}

std::string require_string(const json& record, const char* field,
                           const std::filesystem::path& path, std::size_t lineno) {
    if (!record.contains(field) || !record[field].is_string())
        throw InputError(path.string() + ":" + std::to_string(lineno) + ": missing string field '" +
                         field + "'");
    return record[field].get<std::string>();
}

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        fn(lineno, line);
    }
}

} // namespace

std::vector<EvalInstance> load_dataset(const std::filesystem::path& path) {
    std::vector<EvalInstance> instances;
    std::unordered_set<std::string> ids;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        const json record = parse_line_or_throw(path, lineno, line);
        EvalInstance inst;
        inst.id = require_string(record, "id", path, lineno);
        if (inst.id.empty())
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": empty id");
        if (!ids.insert(inst.id).second)
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": duplicate id '" +
                             inst.id + "'");

        const std::string lang_name = require_string(record, "language", path, lineno);
        const auto lang = language_from_string(lang_name);
        if (!lang)
            throw InputError(path.string() + ":" + std::to_string(lineno) +
                             ": unknown language tag '" + lang_name + "'");
        inst.language = *lang;

        inst.cwe = record.value("cwe", std::string{});
        const std::string transform_name = record.value("transform", std::string{"original"});
        const auto tag = transform_from_string(transform_name);
        if (!tag)
            throw InputError(path.string() + ":" + std::to_string(lineno) +
                             ": unknown transform tag '" + transform_name + "'");
        inst.transform = *tag;

        inst.function_source = record.value("function", std::string{});
        inst.vulnerable_code = record.value("vulnerable_code", std::string{});

        if (!record.contains("references") || !record["references"].is_array() ||
            record["references"].empty())
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": instance '" +
                             inst.id + "' needs a non-empty references array");
        for (const auto& ref : record["references"]) {
            if (!ref.is_string())
                throw InputError(path.string() + ":" + std::to_string(lineno) +
                                 ": references must be strings");
            inst.references.push_back(ref.get<std::string>());
        }
        if (record.contains("generated") && record["generated"].is_string())
            inst.generated = record["generated"].get<std::string>();
        instances.push_back(std::move(inst));
    });
    return instances;
}

std::vector<ModelOutput> load_outputs(const std::filesystem::path& path) {
    std::vector<ModelOutput> outputs;
    std::unordered_set<std::string> keys;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        const json record = parse_line_or_throw(path, lineno, line);
        ModelOutput out;
        out.id = require_string(record, "id", path, lineno);
        out.model = require_string(record, "model", path, lineno);
        if (!keys.insert(out.id + "\x1F" + out.model).second)
            throw InputError(path.string() + ":" + std::to_string(lineno) +
                             ": duplicate output for id '" + out.id + "' and model '" + out.model +
                             "'");
        if (record.contains("generated") && record["generated"].is_string())
            out.generated = record["generated"].get<std::string>();
        outputs.push_back(std::move(out));
    });
    return outputs;
}

std::vector<Judgment> load_judgments(const std::filesystem::path& path) {
    std::vector<Judgment> judgments;
    for_each_line(path, [&](std::size_t lineno, const std::string& line) {
        const json record = parse_line_or_throw(path, lineno, line);
        Judgment j;
        j.id = require_string(record, "id", path, lineno);
        j.model = require_string(record, "model", path, lineno);
        if (!record.contains("score") || !record["score"].is_number())
            throw InputError(path.string() + ":" + std::to_string(lineno) +
                             ": missing numeric field 'score'");
        j.score = record["score"].get<double>();
        judgments.push_back(std::move(j));
    });
    return judgments;
}

void save_dataset(std::ostream& out, const std::vector<EvalInstance>& instances) {
    for (const EvalInstance& inst : instances) {
        ordered_json record;
        record["id"] = inst.id;
        record["language"] = to_string(inst.language);
        record["cwe"] = inst.cwe;
        record["transform"] = to_string(inst.transform);
        record["function"] = inst.function_source;
        record["vulnerable_code"] = inst.vulnerable_code;
        record["references"] = inst.references;
        if (inst.generated) record["generated"] = *inst.generated;
        out << record.dump() << "\n";
    }
}

void save_dataset(const std::filesystem::path& path, const std::vector<EvalInstance>& instances) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path.string());
    save_dataset(out, instances);
}

} // namespace cfceval
