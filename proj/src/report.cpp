#include "cfceval/report.hpp"

#include "cfceval/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace cfceval {

using nlohmann::ordered_json;

namespace {

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

double rounded(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

std::string score2(double v) { return fixed(v, 2); }
std::string stat4(double v) { return fixed(v, 4); }

ordered_json breakdown_json(const MetricBreakdown& b) {
    ordered_json j;
    j["bleu"] = rounded(b.bleu, 2);
    j["weighted_bleu"] = rounded(b.weighted_bleu, 2);
    j["kwop_bleu"] = rounded(b.kwop_bleu, 2);
    j["literal_sim"] = rounded(b.literal_sim, 2);
    j["elrm"] = rounded(b.elrm, 2);
    if (b.lex_failed) j["lex_failed"] = true;
    return j;
}

ordered_json report_json(const DimensionReport& r) {
    ordered_json j;
    j["planqul"] = to_string(r.planqul);
    if (r.fixcap) j["fixcap"] = to_string(*r.fixcap);
    if (r.ptfixcap) j["ptfixcap"] = to_string(*r.ptfixcap);
    if (r.elerelv) j["elerelv"] = to_string(*r.elerelv);
    return j;
}

ordered_json aggregate_json(const AggregateReport& report) {
    ordered_json j;
    j["version"] = report.version;
    j["total_records"] = report.total_records;
    j["models"] = ordered_json::array();
    for (const ModelSummary& m : report.models) {
        ordered_json row;
        row["model"] = m.model;
        row["n"] = m.n;
        row["mean"] = rounded(m.mean, 2);
        row["stddev"] = rounded(m.stddev, 2);
        if (m.t) {
            row["compared_with"] = m.compared_with;
            row["t"] = rounded(*m.t, 4);
            row["p"] = rounded(*m.p, 4);
        }
        j["models"].push_back(row);
    }
    if (!report.correlations.empty()) {
        j["correlations"] = ordered_json::array();
        for (const CorrelationRow& c : report.correlations) {
            ordered_json row;
            row["metric"] = c.metric;
            row["n"] = c.n;
            if (c.r)
                row["pearson_r"] = rounded(*c.r, 4);
            else
                row["pearson_r"] = nullptr;
            j["correlations"].push_back(row);
        }
    }
    if (report.judge_kappa) {
        j["judgment_kappa"] = rounded(*report.judge_kappa, 4);
        j["judgment_kappa_n"] = report.kappa_n;
    }
    j["dimensions"] = ordered_json::array();
    for (const DimensionPercentRow& d : report.dimension_rows) {
        ordered_json row;
        row["model"] = d.model;
        row["dimension"] = to_string(d.dimension);
        row["counted"] = d.counted;
        row["negative_pct"] = rounded(d.negative_pct, 1);
        row["positive_pct"] = rounded(d.positive_pct, 1);
        j["dimensions"].push_back(row);
    }
    const auto groups_json = [](const std::vector<GroupRow>& rows) {
        ordered_json arr = ordered_json::array();
        for (const GroupRow& g : rows) {
            ordered_json row;
            row["key"] = g.key;
            row["count"] = g.count;
            row["scored"] = g.scored;
            row["mean_elrm"] = rounded(g.mean_elrm, 2);
            arr.push_back(row);
        }
        return arr;
    };
    j["by_language"] = groups_json(report.by_language);
    j["by_cwe"] = groups_json(report.by_cwe);
    j["by_transform"] = groups_json(report.by_transform);
    if (!report.excluded_judgment_keys.empty())
        j["excluded_judgment_keys"] = report.excluded_judgment_keys;
    j["run_config"] = report.run_config;
    return j;
}

void emit_aggregate_table(const AggregateReport& report, std::ostream& out) {
    out << "cfceval " << report.version << " | records: " << report.total_records << "\n\n";
    out << "model summaries (elrm)\n";
    out << "  model                 n      mean    stddev  vs              t         p\n";
    for (const ModelSummary& m : report.models) {
        char line[256];
        std::snprintf(line, sizeof line, "  %-20s %-6zu %-9s %-7s", m.model.c_str(), m.n,
                      score2(m.mean).c_str(), score2(m.stddev).c_str());
        out << line;
        if (m.t) {
            std::snprintf(line, sizeof line, " %-15s %-9s %-9s", m.compared_with.c_str(),
                          stat4(*m.t).c_str(), stat4(*m.p).c_str());
            out << line;
        }
        out << "\n";
    }
    if (!report.correlations.empty()) {
        out << "\ncorrelation with judgments\n";
        out << "  metric         n      pearson_r\n";
        for (const CorrelationRow& c : report.correlations) {
            char line[128];
            std::snprintf(line, sizeof line, "  %-14s %-6zu %s\n", c.metric.c_str(), c.n,
                          c.r ? stat4(*c.r).c_str() : "n/a");
            out << line;
        }
    }
    if (report.judge_kappa)
        out << "\ninter-rater kappa: " << stat4(*report.judge_kappa) << " (n=" << report.kappa_n
            << ")\n";
    out << "\ndimension percentages (negative/positive over counted)\n";
    for (const DimensionPercentRow& d : report.dimension_rows) {
        if (d.counted == 0) continue;
        const auto [neg, pos] = dimension_column_labels(d.dimension);
        char line[192];
        std::snprintf(line, sizeof line, "  %-20s %-9s %s %.1f / %s %.1f (n=%zu)\n",
                      d.model.c_str(), to_string(d.dimension), neg, d.negative_pct, pos,
                      d.positive_pct, d.counted);
        out << line;
    }
    const auto emit_groups = [&](const char* title, const std::vector<GroupRow>& rows) {
        out << "\nby " << title << "\n";
        for (const GroupRow& g : rows) {
            char line[160];
            std::snprintf(line, sizeof line, "  %-24s count=%-5zu scored=%-5zu mean_elrm=%s\n",
                          g.key.c_str(), g.count, g.scored, score2(g.mean_elrm).c_str());
            out << line;
        }
    };
    emit_groups("language", report.by_language);
    emit_groups("cwe", report.by_cwe);
    emit_groups("transform", report.by_transform);
    if (!report.excluded_judgment_keys.empty()) {
        out << "\nexcluded judgment keys:";
        for (const std::string& key : report.excluded_judgment_keys) out << " " << key;
        out << "\n";
    }
    out << "\nrun_config: " << report.run_config.dump() << "\n";
}

void emit_aggregate_csv(const AggregateReport& report, std::ostream& out) {
    out << "section,key,n,mean,stddev,compared_with,t,p\n";
    for (const ModelSummary& m : report.models) {
        out << "model," << m.model << "," << m.n << "," << score2(m.mean) << ","
            << score2(m.stddev) << "," << m.compared_with << ","
            << (m.t ? stat4(*m.t) : "") << "," << (m.p ? stat4(*m.p) : "") << "\n";
    }
    for (const CorrelationRow& c : report.correlations)
        out << "correlation," << c.metric << "," << c.n << "," << (c.r ? stat4(*c.r) : "")
            << ",,,,\n";
    for (const DimensionPercentRow& d : report.dimension_rows)
        out << "dimension," << d.model << ":" << to_string(d.dimension) << "," << d.counted << ","
            << fixed(d.negative_pct, 1) << "," << fixed(d.positive_pct, 1) << ",,,\n";
    const auto rows = [&](const char* name, const std::vector<GroupRow>& groups) {
        for (const GroupRow& g : groups)
            out << name << "," << g.key << "," << g.count << "," << score2(g.mean_elrm) << ","
                << g.scored << ",,,\n";
    };
    rows("by_language", report.by_language);
    rows("by_cwe", report.by_cwe);
    rows("by_transform", report.by_transform);
}

} // namespace

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "table") return ReportFormat::Table;
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw ConfigError("unknown format '" + name + "' (expected table, json or csv)");
}

void emit_report(const AggregateReport& report, ReportFormat format, std::ostream& out) {
    switch (format) {
    case ReportFormat::Table: emit_aggregate_table(report, out); break;
    case ReportFormat::Json: out << aggregate_json(report).dump(2) << "\n"; break;
    case ReportFormat::Csv: emit_aggregate_csv(report, out); break;
    }
}

void emit_breakdown(const MetricBreakdown& breakdown, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Json) {
        out << breakdown_json(breakdown).dump(2) << "\n";
        return;
    }
    if (format == ReportFormat::Csv) {
        out << "bleu,weighted_bleu,kwop_bleu,literal_sim,elrm\n"
            << score2(breakdown.bleu) << "," << score2(breakdown.weighted_bleu) << ","
            << score2(breakdown.kwop_bleu) << "," << score2(breakdown.literal_sim) << ","
            << score2(breakdown.elrm) << "\n";
        return;
    }
    out << "bleu:          " << score2(breakdown.bleu) << "\n";
    out << "weighted_bleu: " << score2(breakdown.weighted_bleu) << "\n";
    out << "kwop_bleu:     " << score2(breakdown.kwop_bleu) << "\n";
    out << "literal_sim:   " << score2(breakdown.literal_sim) << "\n";
    out << "elrm:          " << score2(breakdown.elrm) << "\n";
    if (breakdown.lex_failed) out << "lex_failed:    true\n";
}

void emit_judge_summary(const JudgeSummary& summary, const std::string& model_label,
                        ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Json) {
        ordered_json j;
        j["model"] = model_label;
        j["dimensions"] = ordered_json::array();
        for (const DimensionTally& t : summary.tallies) {
            ordered_json row;
            row["dimension"] = to_string(t.dimension);
            row["negative"] = t.negative;
            row["positive"] = t.positive;
            row["unjudged"] = t.unjudged;
            row["negative_pct"] = rounded(t.negative_pct, 1);
            row["positive_pct"] = rounded(t.positive_pct, 1);
            j["dimensions"].push_back(row);
        }
        out << j.dump(2) << "\n";
        return;
    }
    if (format == ReportFormat::Csv) {
        out << "model,dimension,negative_label,negative_pct,positive_label,positive_pct,"
               "unjudged\n";
        for (const DimensionTally& t : summary.tallies) {
            const auto [neg, pos] = dimension_column_labels(t.dimension);
            out << model_label << "," << to_string(t.dimension) << "," << neg << ","
                << fixed(t.negative_pct, 1) << "," << pos << "," << fixed(t.positive_pct, 1) << ","
                << t.unjudged << "\n";
        }
        return;
    }
    out << "judge summary for " << model_label << "\n";
    for (const DimensionTally& t : summary.tallies) {
        const auto [neg, pos] = dimension_column_labels(t.dimension);
        char line[192];
        std::snprintf(line, sizeof line, "  %-9s %s %.1f / %s %.1f", to_string(t.dimension), neg,
                      t.negative_pct, pos, t.positive_pct);
        out << line;
        if (t.unjudged > 0) out << "  (unjudged: " << t.unjudged << ")";
        out << "\n";
    }
}

void write_records_jsonl(const std::vector<InstanceRecord>& records, std::ostream& out) {
    for (const InstanceRecord& rec : records) {
        ordered_json j;
        j["id"] = rec.instance_id;
        j["model"] = rec.model;
        j["language"] = to_string(rec.language);
        j["cwe"] = rec.cwe;
        j["transform"] = to_string(rec.transform);
        if (rec.report) j["report"] = report_json(*rec.report);
        if (rec.breakdown) j["breakdown"] = breakdown_json(*rec.breakdown);
        if (rec.bleu_coarse) j["bleu_coarse"] = rounded(*rec.bleu_coarse, 2);
        if (rec.bleu_fine) j["bleu_fine"] = rounded(*rec.bleu_fine, 2);
        if (rec.error) j["error"] = *rec.error;
        out << j.dump() << "\n";
    }
}

void write_judge_log_jsonl(const JudgeSummary& summary, std::ostream& out) {
    for (const JudgeCallLog& log : summary.log) {
        ordered_json j;
        j["instance_id"] = log.instance_id;
        j["dimension"] = to_string(log.dimension);
        j["model_id"] = log.model_id;
        j["timestamp"] = log.timestamp;
        j["judged"] = log.judged;
        j["request"] = log.request;
        j["response"] = log.response;
        out << j.dump() << "\n";
    }
}

} // namespace cfceval
