#include "cfceval/dataset.hpp"
#include "cfceval/elrm.hpp"
#include "cfceval/errors.hpp"
#include "cfceval/harness.hpp"
#include "cfceval/judge.hpp"
#include "cfceval/lang_tables.hpp"
#include "cfceval/report.hpp"
#include "cfceval/transforms.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_map>

namespace {

using namespace cfceval;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

LanguageId parse_language(const std::string& name) {
    const auto lang = language_from_string(name);
    if (!lang) throw ConfigError("unknown language '" + name + "'");
    return *lang;
}

std::ostream& open_sink(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw InputError("cannot write file: " + path);
    return file;
}

std::vector<Dimension> parse_dimensions(const std::vector<std::string>& names) {
    if (names.empty())
        return {Dimension::PLanQul, Dimension::FixCap, Dimension::PTFixCap, Dimension::ELeRelv};
    std::vector<Dimension> out;
    for (const std::string& name : names) {
        if (name == "planqul") out.push_back(Dimension::PLanQul);
        else if (name == "fixcap") out.push_back(Dimension::FixCap);
        else if (name == "ptfixcap") out.push_back(Dimension::PTFixCap);
        else if (name == "elerelv") out.push_back(Dimension::ELeRelv);
        else throw ConfigError("unknown dimension '" + name + "'");
    }
    return out;
}

struct CommonArgs {
    std::string config_path;
    std::string format = "table";
    std::uint64_t seed = 0; // reserved
    std::string data_dir;
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg;
    if (!args.config_path.empty()) cfg = RunConfig::from_json_file(args.config_path);
    if (!args.data_dir.empty()) LangTables::set_data_dir(args.data_dir);
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--format", args.format, "Output format: table, json or csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    cmd->add_option("--seed", args.seed, "Reserved for future randomized features");
    cmd->add_option("--data-dir", args.data_dir, "Override the bundled language tables");
}

int run_score(const CommonArgs& common, const std::string& lang_name,
              const std::string& cand_path, const std::vector<std::string>& ref_paths) {
    const RunConfig cfg = load_config(common);
    const LanguageId lang = parse_language(lang_name);
    std::vector<std::string> references;
    references.reserve(ref_paths.size());
    for (const std::string& p : ref_paths) references.push_back(read_file(p));
    const MetricBreakdown breakdown =
        elrm_score(read_file(cand_path), references, lang, cfg.metric);
    emit_breakdown(breakdown, report_format_from_string(common.format), std::cout);
    return 0;
}

int run_eval_cmd(const CommonArgs& common, const std::string& dataset_path,
                 const std::vector<std::string>& output_paths, const std::string& records_path,
                 const std::string& report_path, int parallel_override) {
    RunConfig cfg = load_config(common);
    if (parallel_override > 0) cfg.parallelism = parallel_override;

    const std::vector<EvalInstance> instances = load_dataset(dataset_path);
    std::vector<ModelOutput> outputs;
    for (const std::string& path : output_paths) {
        std::vector<ModelOutput> part = load_outputs(path);
        outputs.insert(outputs.end(), part.begin(), part.end());
    }
    const std::vector<InstanceRecord> records = run_eval(instances, outputs, cfg);

    std::ofstream records_file;
    write_records_jsonl(records, open_sink(records_file, records_path));

    const AggregateReport report = aggregate(records, {}, cfg);
    std::ofstream report_file;
    emit_report(report, report_format_from_string(common.format),
                open_sink(report_file, report_path));
    return 0;
}

int run_transform(const CommonArgs& common, const std::string& dataset_path,
                  const std::string& out_path, const std::vector<std::string>& preserve_names) {
    load_config(common);
    const std::set<std::string> preserve(preserve_names.begin(), preserve_names.end());
    std::vector<EvalInstance> transformed;
    for (const EvalInstance& inst : load_dataset(dataset_path))
        transformed.push_back(transform_instance(inst, preserve));
    if (out_path.empty() || out_path == "-")
        save_dataset(std::cout, transformed);
    else
        save_dataset(std::filesystem::path(out_path), transformed);
    return 0;
}

int run_judge(const CommonArgs& common, const std::string& dataset_path,
              const std::string& outputs_path, const std::string& fixture_path,
              const std::string& kind_name, const std::string& mode_name,
              const std::vector<std::string>& dim_names, const std::string& model_label_arg,
              const std::string& log_path) {
    const RunConfig cfg = load_config(common);

    std::vector<EvalInstance> instances = load_dataset(dataset_path);
    std::string model_label = model_label_arg.empty() ? "inline" : model_label_arg;
    if (!outputs_path.empty()) {
        std::unordered_map<std::string, EvalInstance*> by_id;
        for (EvalInstance& inst : instances) by_id.emplace(inst.id, &inst);
        std::set<std::string> models;
        for (const ModelOutput& out : load_outputs(outputs_path)) {
            models.insert(out.model);
            if (auto it = by_id.find(out.id); it != by_id.end())
                it->second->generated = out.generated;
        }
        if (model_label_arg.empty() && models.size() == 1) model_label = *models.begin();
    }

    const JudgeKind kind = kind_name == "scorer" ? JudgeKind::Scorer : JudgeKind::Tagger;
    const JudgeMode mode =
        mode_name == "reference_free" ? JudgeMode::ReferenceFree : JudgeMode::ReferenceBased;

    std::unique_ptr<Transport> transport;
    if (!fixture_path.empty()) {
        transport = std::make_unique<ReplayTransport>(ReplayTransport::from_file(fixture_path));
    } else {
        if (cfg.judge_endpoint.empty() || cfg.judge_model.empty())
            throw ConfigError("judge needs either --fixture or judge.endpoint/judge.model in the "
                              "config");
        HttpTransport::Options opts;
        opts.endpoint_url = cfg.judge_endpoint;
        opts.model = cfg.judge_model;
        opts.api_key_env = cfg.judge_api_key_env;
        transport = std::make_unique<HttpTransport>(opts);
    }

    JudgeOptions options;
    options.retries = cfg.judge_retries;
    options.concurrency = cfg.judge_concurrency;
    options.scorer_negative_max = cfg.scorer_negative_max;
    options.model_id = cfg.judge_model.empty() ? "replay" : cfg.judge_model;

    const JudgeSummary summary =
        judge_batch(instances, parse_dimensions(dim_names), kind, mode, *transport, options);
    emit_judge_summary(summary, model_label, report_format_from_string(common.format), std::cout);
    if (!log_path.empty()) {
        std::ofstream log_file;
        write_judge_log_jsonl(summary, open_sink(log_file, log_path));
    }
    return 0;
}

int run_report(const CommonArgs& common, const std::string& records_path,
               const std::vector<std::string>& judgment_paths, const std::string& out_path) {
    const RunConfig cfg = load_config(common);
    const std::vector<InstanceRecord> records = load_records(records_path);
    std::vector<std::vector<Judgment>> judgment_sets;
    for (const std::string& path : judgment_paths) judgment_sets.push_back(load_judgments(path));
    const AggregateReport report = aggregate(records, judgment_sets, cfg);
    std::ofstream out_file;
    emit_report(report, report_format_from_string(common.format), open_sink(out_file, out_path));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cfceval: code-relevance metrics and batch evaluation for generated "
                 "vulnerability fixes"};
    app.require_subcommand(1);

    CommonArgs common;

    auto* score = app.add_subcommand("score", "Score one candidate against reference fixes");
    std::string score_lang, score_cand;
    std::vector<std::string> score_refs;
    score->add_option("--lang", score_lang, "Language: python, java, cpp or ruby")->required();
    score->add_option("--cand", score_cand, "Candidate file")->required();
    score->add_option("--ref", score_refs, "Reference file (repeatable)")->required();
    add_common(score, common);

    auto* eval = app.add_subcommand("eval", "Evaluate a dataset batch");
    std::string eval_dataset, eval_records, eval_report;
    std::vector<std::string> eval_outputs;
    int eval_parallel = 0;
    eval->add_option("--dataset", eval_dataset, "Dataset JSONL file")->required();
    eval->add_option("--outputs", eval_outputs, "Per-model outputs JSONL file (repeatable)");
    eval->add_option("--records", eval_records, "Write per-instance records here ('-' = stdout)");
    eval->add_option("--report", eval_report, "Write the aggregate report here ('-' = stdout)");
    eval->add_option("--parallel", eval_parallel, "Worker threads (overrides config)");
    add_common(eval, common);

    auto* transform = app.add_subcommand("transform", "Emit identifier-renamed variants");
    std::string tr_dataset, tr_output;
    std::vector<std::string> tr_preserve;
    transform->add_option("--dataset", tr_dataset, "Dataset JSONL file")->required();
    transform->add_option("--output,-o", tr_output, "Output dataset file (default: stdout)");
    transform->add_option("--preserve", tr_preserve, "Identifier to keep unrenamed (repeatable)");
    add_common(transform, common);

    auto* judge = app.add_subcommand("judge", "Run the LLM judge over a dataset");
    std::string j_dataset, j_outputs, j_fixture, j_kind = "tagger", j_mode = "reference_based";
    std::string j_model_label, j_log;
    std::vector<std::string> j_dims;
    judge->add_option("--dataset", j_dataset, "Dataset JSONL file")->required();
    judge->add_option("--outputs", j_outputs, "Per-model outputs JSONL file");
    judge->add_option("--fixture", j_fixture, "Replay fixture (request/response JSONL)");
    judge->add_option("--kind", j_kind, "tagger or scorer")
        ->check(CLI::IsMember({"tagger", "scorer"}));
    judge->add_option("--mode", j_mode, "reference_based or reference_free")
        ->check(CLI::IsMember({"reference_based", "reference_free"}));
    judge->add_option("--dimensions", j_dims, "Dimensions to judge (default: all four)");
    judge->add_option("--model-label", j_model_label, "Label for the judged model");
    judge->add_option("--log", j_log, "Write the request/response log here");
    add_common(judge, common);

    auto* report = app.add_subcommand("report", "Aggregate a records file");
    std::string rep_records, rep_out;
    std::vector<std::string> rep_judgments;
    report->add_option("--records", rep_records, "Records JSONL file")->required();
    report->add_option("--judgments", rep_judgments,
                       "Judgment scores JSONL file (repeatable; two files add a kappa row)");
    report->add_option("--output,-o", rep_out, "Write the report here ('-' = stdout)");
    add_common(report, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (score->parsed()) return run_score(common, score_lang, score_cand, score_refs);
        if (eval->parsed())
            return run_eval_cmd(common, eval_dataset, eval_outputs, eval_records, eval_report,
                                eval_parallel);
        if (transform->parsed()) return run_transform(common, tr_dataset, tr_output, tr_preserve);
        if (judge->parsed())
            return run_judge(common, j_dataset, j_outputs, j_fixture, j_kind, j_mode, j_dims,
                             j_model_label, j_log);
        if (report->parsed()) return run_report(common, rep_records, rep_judgments, rep_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
