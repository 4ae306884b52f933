#include "cfceval/harness.hpp"

#include "cfceval/errors.hpp"
#include "cfceval/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <thread>
#include <unordered_map>

namespace cfceval {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

SmoothingScheme smoothing_from_string(const std::string& name) {
    if (name == "none") return SmoothingScheme::None;
    if (name == "epsilon") return SmoothingScheme::Epsilon;
    throw ConfigError("unknown smoothing scheme '" + name + "'");
}

const char* to_string(SmoothingScheme s) {
    return s == SmoothingScheme::None ? "none" : "epsilon";
}

WeightedMode weighted_mode_from_string(const std::string& name) {
    if (name == "recall_full") return WeightedMode::RecallFullRange;
    if (name == "precision_full") return WeightedMode::PrecisionFullRange;
    if (name == "precision_unigram") return WeightedMode::PrecisionUnigram;
    throw ConfigError("unknown weighted mode '" + name + "'");
}

const char* to_string(WeightedMode m) {
    switch (m) {
    case WeightedMode::RecallFullRange: return "recall_full";
    case WeightedMode::PrecisionFullRange: return "precision_full";
    case WeightedMode::PrecisionUnigram: return "precision_unigram";
    }
    return "recall_full";
}

EffectiveRefMode effective_ref_from_string(const std::string& name) {
    if (name == "shortest") return EffectiveRefMode::Shortest;
    if (name == "closest") return EffectiveRefMode::Closest;
    throw ConfigError("unknown effective_ref mode '" + name + "'");
}

const char* to_string(EffectiveRefMode m) {
    return m == EffectiveRefMode::Shortest ? "shortest" : "closest";
}

} // namespace

void RunConfig::validate() const {
    metric.validate();
    if (elerelv_threshold < 0.0 || elerelv_threshold > 100.0)
        throw ConfigError("elerelv_threshold must be in [0, 100]");
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
    if (judge_concurrency < 1) throw ConfigError("judge_concurrency must be >= 1");
    if (judge_retries < 0) throw ConfigError("judge_retries must be >= 0");
    if (scorer_negative_max < 1 || scorer_negative_max > 4)
        throw ConfigError("scorer_negative_max must be in [1, 4]");
}

RunConfig RunConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "max_n") {
                cfg.metric.ngram.max_n = value.get<int>();
                if (cfg.metric.ngram.max_n < 1) throw ConfigError("max_n must be >= 1");
                cfg.metric.ngram.order_weights.assign(
                    static_cast<std::size_t>(cfg.metric.ngram.max_n),
                    1.0 / cfg.metric.ngram.max_n);
            } else if (key == "order_weights") {
                cfg.metric.ngram.order_weights = value.get<std::vector<double>>();
            } else if (key == "smoothing") {
                cfg.metric.ngram.smoothing.scheme =
                    smoothing_from_string(value.at("scheme").get<std::string>());
                if (value.contains("epsilon"))
                    cfg.metric.ngram.smoothing.epsilon = value["epsilon"].get<double>();
            } else if (key == "weighted_mode") {
                cfg.metric.ngram.weighted_mode =
                    weighted_mode_from_string(value.get<std::string>());
            } else if (key == "effective_ref") {
                cfg.metric.ngram.effective_ref =
                    effective_ref_from_string(value.get<std::string>());
            } else if (key == "empty_kwop_score") {
                cfg.metric.ngram.empty_kwop_score = value.get<double>();
            } else if (key == "keyword_weight") {
                cfg.metric.token_weights.keyword_weight = value.get<double>();
            } else if (key == "default_weight") {
                cfg.metric.token_weights.default_weight = value.get<double>();
            } else if (key == "elrm_weights") {
                cfg.metric.elrm_weights.alpha = value.at("alpha").get<double>();
                cfg.metric.elrm_weights.beta = value.at("beta").get<double>();
                cfg.metric.elrm_weights.lambda = value.at("lambda").get<double>();
                cfg.metric.elrm_weights.mu = value.at("mu").get<double>();
            } else if (key == "vacuous_literal_score") {
                cfg.metric.vacuous_literal_score = value.get<double>();
            } else if (key == "elerelv_threshold") {
                cfg.elerelv_threshold = value.get<double>();
            } else if (key == "parallelism") {
                cfg.parallelism = value.get<int>();
            } else if (key == "judge") {
                cfg.judge_endpoint = value.value("endpoint", cfg.judge_endpoint);
                cfg.judge_model = value.value("model", cfg.judge_model);
                cfg.judge_api_key_env = value.value("api_key_env", cfg.judge_api_key_env);
                cfg.judge_concurrency = value.value("concurrency", cfg.judge_concurrency);
                cfg.judge_retries = value.value("retries", cfg.judge_retries);
                cfg.scorer_negative_max =
                    value.value("scorer_negative_max", cfg.scorer_negative_max);
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        } catch (const json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
    return from_json(j);
}

ordered_json RunConfig::to_json() const {
    ordered_json j;
    j["max_n"] = metric.ngram.max_n;
    j["order_weights"] = metric.ngram.order_weights;
    j["smoothing"] = {{"scheme", to_string(metric.ngram.smoothing.scheme)},
                      {"epsilon", metric.ngram.smoothing.epsilon}};
    j["weighted_mode"] = to_string(metric.ngram.weighted_mode);
    j["effective_ref"] = to_string(metric.ngram.effective_ref);
    j["empty_kwop_score"] = metric.ngram.empty_kwop_score;
    j["keyword_weight"] = metric.token_weights.keyword_weight;
    j["default_weight"] = metric.token_weights.default_weight;
    j["elrm_weights"] = {{"alpha", metric.elrm_weights.alpha},
                         {"beta", metric.elrm_weights.beta},
                         {"lambda", metric.elrm_weights.lambda},
                         {"mu", metric.elrm_weights.mu}};
    j["vacuous_literal_score"] = metric.vacuous_literal_score;
    j["elerelv_threshold"] = elerelv_threshold;
    // parallelism is an execution knob with no effect on results, so it stays
    // out of the provenance block: runs at any worker count emit identical
    // reports.
    j["judge"] = {{"endpoint", judge_endpoint},
                  {"model", judge_model},
                  {"api_key_env", judge_api_key_env},
                  {"concurrency", judge_concurrency},
                  {"retries", judge_retries},
                  {"scorer_negative_max", scorer_negative_max}};
    return j;
}

namespace {

InstanceRecord evaluate_one(const EvalInstance& base, const std::string& model,
                            const std::optional<std::string>& generated,
                            const RunConfig& config) {
    InstanceRecord rec;
    rec.instance_id = base.id;
    rec.model = model;
    rec.language = base.language;
    rec.cwe = base.cwe;
    rec.transform = base.transform;

    EvalInstance inst = base;
    inst.generated = generated;
    try {
        DimensionConfig dim_cfg{config.metric, config.elerelv_threshold};
        rec.report = evaluate_instance(inst, dim_cfg);
        if (rec.report->planqul == PlanQulVerdict::Good) {
            rec.breakdown = rec.report->breakdown
                                ? *rec.report->breakdown
                                : elrm_score(*inst.generated, inst.references, inst.language,
                                             config.metric);
            const auto [coarse, fine] = baseline_bleu_scores(*inst.generated, inst.references,
                                                             inst.language, config.metric.ngram);
            rec.bleu_coarse = coarse;
            rec.bleu_fine = fine;
        }
    } catch (const InputError& e) {
        rec.report.reset();
        rec.breakdown.reset();
        rec.bleu_coarse.reset();
        rec.bleu_fine.reset();
        rec.error = e.what();
    }
    return rec;
}

} // namespace

std::vector<InstanceRecord> run_eval(const std::vector<EvalInstance>& instances,
                                     const std::vector<ModelOutput>& outputs,
                                     const RunConfig& config) {
    config.validate();

    std::unordered_map<std::string, const EvalInstance*> by_id;
    for (const EvalInstance& inst : instances) by_id.emplace(inst.id, &inst);

    struct Task {
        const EvalInstance* instance; // null when the output id is unknown
        std::string id;
        std::string model;
        std::optional<std::string> generated;
    };
    std::vector<Task> tasks;
    if (outputs.empty()) {
        tasks.reserve(instances.size());
        for (const EvalInstance& inst : instances)
            tasks.push_back({&inst, inst.id, "inline", inst.generated});
    } else {
        tasks.reserve(outputs.size());
        for (const ModelOutput& out : outputs) {
            auto it = by_id.find(out.id);
            tasks.push_back(
                {it == by_id.end() ? nullptr : it->second, out.id, out.model, out.generated});
        }
    }

    std::vector<InstanceRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];
            if (!task.instance) {
                records[i].instance_id = task.id;
                records[i].model = task.model;
                records[i].error = "output references unknown instance id '" + task.id + "'";
                continue;
            }
            records[i] = evaluate_one(*task.instance, task.model, task.generated, config);
        }
    };
    const std::size_t n_workers = std::min<std::size_t>(config.parallelism, tasks.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::stable_sort(records.begin(), records.end(),
                     [](const InstanceRecord& a, const InstanceRecord& b) {
                         if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
                         return a.model < b.model;
                     });
    return records;
}

std::vector<InstanceRecord> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open records file: " + path);
    std::vector<InstanceRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw InputError(path + ":" + std::to_string(lineno) + ": malformed record");
        InstanceRecord rec;
        try {
            rec.instance_id = j.at("id").get<std::string>();
            rec.model = j.at("model").get<std::string>();
            if (auto lang = language_from_string(j.value("language", std::string{"python"})))
                rec.language = *lang;
            rec.cwe = j.value("cwe", std::string{});
            if (auto tag = transform_from_string(j.value("transform", std::string{"original"})))
                rec.transform = *tag;
            if (j.contains("report")) {
                DimensionReport report;
                const json& r = j["report"];
                report.planqul = r.value("planqul", std::string{"poor"}) == "good"
                                     ? PlanQulVerdict::Good
                                     : PlanQulVerdict::Poor;
                if (r.contains("fixcap"))
                    report.fixcap = r["fixcap"].get<std::string>() == "fixed"
                                        ? FixVerdict::Fixed
                                        : FixVerdict::NotFixed;
                if (r.contains("ptfixcap"))
                    report.ptfixcap = r["ptfixcap"].get<std::string>() == "resolved"
                                          ? ResolveVerdict::Resolved
                                          : ResolveVerdict::Unresolved;
                if (r.contains("elerelv"))
                    report.elerelv = r["elerelv"].get<std::string>() == "relevant"
                                         ? RelevanceVerdict::Relevant
                                         : RelevanceVerdict::Irrelevant;
                rec.report = report;
            }
            if (j.contains("breakdown")) {
                MetricBreakdown b;
                const json& bd = j["breakdown"];
                b.bleu = bd.value("bleu", 0.0);
                b.weighted_bleu = bd.value("weighted_bleu", 0.0);
                b.kwop_bleu = bd.value("kwop_bleu", 0.0);
                b.literal_sim = bd.value("literal_sim", 0.0);
                b.elrm = bd.value("elrm", 0.0);
                b.lex_failed = bd.value("lex_failed", false);
                rec.breakdown = b;
                if (rec.report && rec.report->elerelv) rec.report->breakdown = b;
            }
            if (j.contains("bleu_coarse")) rec.bleu_coarse = j["bleu_coarse"].get<double>();
            if (j.contains("bleu_fine")) rec.bleu_fine = j["bleu_fine"].get<double>();
            if (j.contains("error")) rec.error = j["error"].get<std::string>();
        } catch (const json::exception& e) {
            throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

struct SeriesKey {
    std::string id;
    std::string model;
    bool operator<(const SeriesKey& other) const {
        if (id != other.id) return id < other.id;
        return model < other.model;
    }
};

std::vector<GroupRow> group_rows(const std::vector<InstanceRecord>& records,
                                 const std::function<std::string(const InstanceRecord&)>& key_of) {
    std::vector<GroupRow> rows;
    std::map<std::string, std::size_t> index;
    std::map<std::string, double> sums;
    for (const InstanceRecord& rec : records) {
        const std::string key = key_of(rec);
        auto [it, inserted] = index.try_emplace(key, rows.size());
        if (inserted) rows.push_back({key, 0, 0, 0.0});
        GroupRow& row = rows[it->second];
        ++row.count;
        if (rec.breakdown) {
            ++row.scored;
            sums[key] += rec.breakdown->elrm;
        }
    }
    for (GroupRow& row : rows)
        if (row.scored > 0) row.mean_elrm = sums[row.key] / static_cast<double>(row.scored);
    std::sort(rows.begin(), rows.end(),
              [](const GroupRow& a, const GroupRow& b) { return a.key < b.key; });
    return rows;
}

} // namespace

AggregateReport aggregate(const std::vector<InstanceRecord>& records,
                          const std::vector<std::vector<Judgment>>& judgment_sets,
                          const RunConfig& config) {
    if (records.empty()) throw InputError("aggregate requires at least one record");

    AggregateReport report;
    report.total_records = records.size();
    report.run_config = config.to_json();
    report.version = CFCEVAL_VERSION;

    // Models in first-appearance order.
    std::vector<std::string> models;
    for (const InstanceRecord& rec : records)
        if (std::find(models.begin(), models.end(), rec.model) == models.end())
            models.push_back(rec.model);

    std::map<std::string, std::map<std::string, double>> elrm_by_model; // model -> id -> score
    for (const InstanceRecord& rec : records)
        if (rec.breakdown) elrm_by_model[rec.model][rec.instance_id] = rec.breakdown->elrm;

    for (std::size_t m = 0; m < models.size(); ++m) {
        ModelSummary summary;
        summary.model = models[m];
        std::vector<double> scores;
        for (const auto& [id, score] : elrm_by_model[models[m]]) scores.push_back(score);
        if (!scores.empty()) {
            const SummaryStats s = summarize(scores);
            summary.n = s.n;
            summary.mean = s.mean;
            summary.stddev = s.stddev;
        }
        if (models.size() > 1) {
            const std::string& other = models[m == 0 ? models.size() - 1 : m - 1];
            summary.compared_with = other;
            std::vector<double> xs, ys;
            for (const auto& [id, score] : elrm_by_model[models[m]]) {
                auto it = elrm_by_model[other].find(id);
                if (it != elrm_by_model[other].end()) {
                    xs.push_back(score);
                    ys.push_back(it->second);
                }
            }
            if (xs.size() >= 2) {
                const TTestResult t = paired_t(xs, ys);
                summary.t = t.t;
                summary.p = t.p;
            }
        }
        report.models.push_back(std::move(summary));
    }

    // Judgment series: one set is used as-is; two sets are averaged per key
    // (and compared with kappa); extra sets are ignored beyond the first two.
    std::map<SeriesKey, double> judgment;
    if (!judgment_sets.empty()) {
        std::map<SeriesKey, double> first;
        for (const Judgment& j : judgment_sets[0]) first[{j.id, j.model}] = j.score;
        if (judgment_sets.size() >= 2) {
            std::map<SeriesKey, double> second;
            for (const Judgment& j : judgment_sets[1]) second[{j.id, j.model}] = j.score;
            std::vector<std::string> a, b;
            for (const auto& [key, score] : first) {
                auto it = second.find(key);
                if (it == second.end()) continue;
                judgment[key] = (score + it->second) / 2.0;
                a.push_back(std::to_string(static_cast<long>(std::llround(score))));
                b.push_back(std::to_string(static_cast<long>(std::llround(it->second))));
            }
            if (!a.empty()) {
                report.judge_kappa = cohens_kappa(a, b);
                report.kappa_n = a.size();
            }
        } else {
            judgment = std::move(first);
        }

        std::map<SeriesKey, const InstanceRecord*> scored;
        for (const InstanceRecord& rec : records)
            if (rec.breakdown) scored[{rec.instance_id, rec.model}] = &rec;
        for (const auto& [key, score] : judgment)
            if (!scored.count(key))
                report.excluded_judgment_keys.push_back(key.id + "/" + key.model);

        const auto correlation_row = [&](const std::string& name, auto metric_of) {
            CorrelationRow row;
            row.metric = name;
            std::vector<double> xs, ys;
            for (const auto& [key, rec] : scored) {
                auto it = judgment.find(key);
                if (it == judgment.end()) continue;
                const std::optional<double> value = metric_of(*rec);
                if (!value) continue;
                xs.push_back(*value);
                ys.push_back(it->second);
            }
            row.n = xs.size();
            if (xs.size() >= 2) {
                try {
                    row.r = pearson(xs, ys);
                } catch (const InputError&) {
                    row.r.reset(); // constant series: correlation undefined
                }
            }
            return row;
        };
        report.correlations.push_back(correlation_row("elrm", [](const InstanceRecord& r) {
            return r.breakdown ? std::optional<double>(r.breakdown->elrm) : std::nullopt;
        }));
        report.correlations.push_back(
            correlation_row("bleu_coarse", [](const InstanceRecord& r) { return r.bleu_coarse; }));
        report.correlations.push_back(
            correlation_row("bleu_fine", [](const InstanceRecord& r) { return r.bleu_fine; }));
    }

    // Dimension percentage tables, one row per (model, dimension).
    for (const std::string& model : models) {
        const auto row_for = [&](Dimension d, auto counter) {
            DimensionPercentRow row;
            row.model = model;
            row.dimension = d;
            std::size_t negative = 0, positive = 0;
            for (const InstanceRecord& rec : records) {
                if (rec.model != model || !rec.report) continue;
                const auto bucket = counter(*rec.report);
                if (!bucket) continue;
                (*bucket ? positive : negative) += 1;
            }
            row.counted = negative + positive;
            if (row.counted > 0) {
                row.negative_pct = 100.0 * static_cast<double>(negative) / row.counted;
                row.positive_pct = 100.0 * static_cast<double>(positive) / row.counted;
            }
            return row;
        };
        report.dimension_rows.push_back(
            row_for(Dimension::PLanQul, [](const DimensionReport& r) {
                return std::optional<bool>(r.planqul == PlanQulVerdict::Good);
            }));
        report.dimension_rows.push_back(row_for(Dimension::FixCap, [](const DimensionReport& r) {
            return r.fixcap ? std::optional<bool>(*r.fixcap == FixVerdict::Fixed) : std::nullopt;
        }));
        report.dimension_rows.push_back(
            row_for(Dimension::PTFixCap, [](const DimensionReport& r) {
                return r.ptfixcap ? std::optional<bool>(*r.ptfixcap == ResolveVerdict::Resolved)
                                  : std::nullopt;
            }));
        report.dimension_rows.push_back(
            row_for(Dimension::ELeRelv, [](const DimensionReport& r) {
                return r.elerelv ? std::optional<bool>(*r.elerelv == RelevanceVerdict::Relevant)
                                 : std::nullopt;
            }));
    }

    report.by_language = group_rows(
        records, [](const InstanceRecord& r) { return std::string(to_string(r.language)); });
    report.by_cwe =
        group_rows(records, [](const InstanceRecord& r) { return r.cwe.empty() ? "-" : r.cwe; });
    report.by_transform = group_rows(
        records, [](const InstanceRecord& r) { return std::string(to_string(r.transform)); });

    return report;
}

} // namespace cfceval
