#pragma once

#include "cfceval/harness.hpp"
#include "cfceval/judge.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cfceval {

enum class ReportFormat { Table, Json, Csv };
ReportFormat report_format_from_string(const std::string& name); // throws ConfigError

/// Scores print with 2 decimals, statistics with 4; output is locale-free and
/// byte-stable for identical inputs.
void emit_report(const AggregateReport& report, ReportFormat format, std::ostream& out);

void emit_breakdown(const MetricBreakdown& breakdown, ReportFormat format, std::ostream& out);

void emit_judge_summary(const JudgeSummary& summary, const std::string& model_label,
                        ReportFormat format, std::ostream& out);

/// One JSON object per record, scores rounded to 2 decimals, sorted by
/// (instance id, model) upstream.
void write_records_jsonl(const std::vector<InstanceRecord>& records, std::ostream& out);

void write_judge_log_jsonl(const JudgeSummary& summary, std::ostream& out);

} // namespace cfceval
