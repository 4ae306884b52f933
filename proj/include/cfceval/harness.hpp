#pragma once

#include "cfceval/dataset.hpp"
#include "cfceval/dimensions.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cfceval {

/// Everything a batch run needs, validated up front and serialized verbatim
/// into every report for provenance.
struct RunConfig {
    MetricConfig metric;
    double elerelv_threshold = 50.0;
    int parallelism = 1;

    // judge settings
    std::string judge_endpoint;
    std::string judge_model;
    std::string judge_api_key_env = "CFCEVAL_API_KEY";
    int judge_concurrency = 1;
    int judge_retries = 2;
    int scorer_negative_max = 2;

    void validate() const; // throws ConfigError
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_json_file(const std::string& path);
    nlohmann::ordered_json to_json() const;
};

/// One evaluated (instance, model output) pair. The breakdown and baselines
/// are present whenever the generation passed the quality gate and lexed;
/// per-instance failures land in `error` and never abort a batch.
struct InstanceRecord {
    std::string instance_id;
    std::string model;
    LanguageId language = LanguageId::Python;
    std::string cwe;
    TransformTag transform = TransformTag::Original;
    std::optional<DimensionReport> report;
    std::optional<MetricBreakdown> breakdown;
    std::optional<double> bleu_coarse;
    std::optional<double> bleu_fine;
    std::optional<std::string> error;
};

/// Evaluate every output against its instance. With an empty outputs list the
/// dataset's inline generations are evaluated as model "inline". Instance
/// order and parallelism never change the result.
std::vector<InstanceRecord> run_eval(const std::vector<EvalInstance>& instances,
                                     const std::vector<ModelOutput>& outputs,
                                     const RunConfig& config);

/// Read back a records file produced by an eval run.
std::vector<InstanceRecord> load_records(const std::string& path);

struct ModelSummary {
    std::string model;
    std::size_t n = 0; // scored records
    double mean = 0.0;
    double stddev = 0.0;
    /// Chained comparison: this model paired against the previous row (the
    /// first row pairs against the last).
    std::string compared_with;
    std::optional<double> t;
    std::optional<double> p;
};

struct CorrelationRow {
    std::string metric;
    std::optional<double> r;
    std::size_t n = 0;
};

struct DimensionPercentRow {
    std::string model;
    Dimension dimension = Dimension::PLanQul;
    std::size_t counted = 0;
    double negative_pct = 0.0;
    double positive_pct = 0.0;
};

struct GroupRow {
    std::string key;
    std::size_t count = 0;       // all records in the group
    std::size_t scored = 0;      // records with a breakdown
    double mean_elrm = 0.0;      // over scored records
};

struct AggregateReport {
    std::size_t total_records = 0;
    std::vector<ModelSummary> models;
    std::vector<CorrelationRow> correlations;
    std::optional<double> judge_kappa;
    std::size_t kappa_n = 0;
    std::vector<DimensionPercentRow> dimension_rows;
    std::vector<GroupRow> by_language;
    std::vector<GroupRow> by_cwe;
    std::vector<GroupRow> by_transform;
    std::vector<std::string> excluded_judgment_keys;
    nlohmann::ordered_json run_config;
    std::string version;
};

/// Aggregate per-model summaries, chained paired t-tests in record order,
/// metric-vs-judgment correlations (first judgment set, or the average of two
/// sets plus their inter-rater kappa), dimension percentage tables and
/// group-by breakdowns.
AggregateReport aggregate(const std::vector<InstanceRecord>& records,
                          const std::vector<std::vector<Judgment>>& judgment_sets,
                          const RunConfig& config);

} // namespace cfceval
