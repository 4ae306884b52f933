#pragma once

#include "cfceval/dimensions.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfceval {

enum class JudgeKind { Tagger, Scorer };
enum class JudgeMode { ReferenceBased, ReferenceFree };

const char* to_string(JudgeKind kind);
const char* to_string(JudgeMode mode);

struct JudgePrompt {
    Dimension dimension = Dimension::PLanQul;
    JudgeMode mode = JudgeMode::ReferenceBased;
    JudgeKind kind = JudgeKind::Tagger;
    std::string text;
};

struct JudgeVerdict {
    JudgeKind kind = JudgeKind::Tagger;
    std::optional<std::string> tag; // Tagger: canonical dimension category
    std::optional<int> score;       // Scorer: 1..5
    std::string raw;
};

class TransportError : public std::runtime_error {
  public:
    explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

class VerdictParseError : public std::runtime_error {
  public:
    explicit VerdictParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Request text in, response text out. Implementations: ReplayTransport for
/// recorded fixtures, HttpTransport for a live endpoint.
class Transport {
  public:
    virtual ~Transport() = default;
    virtual std::string send(const std::string& request) = 0; // throws TransportError
};

/// Replays recorded responses keyed by exact request text. Fixture files are
/// line-delimited JSON records: {"request": "...", "response": "..."}.
class ReplayTransport : public Transport {
  public:
    static ReplayTransport from_file(const std::string& path); // throws InputError
    void add(std::string request, std::string response);
    std::string send(const std::string& request) override;

  private:
    std::map<std::string, std::string> responses_;
};

/// Minimal chat-completions client. The API key is read from the named
/// environment variable at send time.
class HttpTransport : public Transport {
  public:
    struct Options {
        std::string endpoint_url; // e.g. http://localhost:8080/v1/chat/completions
        std::string model;
        std::string api_key_env = "CFCEVAL_API_KEY";
        int timeout_seconds = 60;
    };

    explicit HttpTransport(Options options) : options_(std::move(options)) {}
    std::string send(const std::string& request) override;

  private:
    Options options_;
};

/// Deterministic prompt rendering: identical inputs produce byte-identical
/// text. Reference-based prompts embed every reference; reference-free
/// prompts embed none.
JudgePrompt build_prompt(const EvalInstance& instance, Dimension dimension, JudgeKind kind,
                         JudgeMode mode);

/// Extract the first valid label (Tagger) or 1-5 score (Scorer) from a
/// response. Throws VerdictParseError when no valid answer is present or a
/// score is out of range.
JudgeVerdict parse_verdict(const std::string& response, JudgeKind kind, Dimension dimension);

struct JudgeOptions {
    int retries = 2;
    int concurrency = 1;
    /// Scorer-to-category cut: scores <= this count toward the negative
    /// column, the rest toward the positive one.
    int scorer_negative_max = 2;
    std::string model_id = "unknown";
    /// Overrides wall-clock timestamps in the call log, for reproducible
    /// replay runs.
    std::optional<std::string> fixed_timestamp;
};

struct DimensionTally {
    Dimension dimension = Dimension::PLanQul;
    std::size_t negative = 0;
    std::size_t positive = 0;
    std::size_t unjudged = 0;
    double negative_pct = 0.0; // over judged instances
    double positive_pct = 0.0;
};

struct JudgeCallLog {
    std::string instance_id;
    Dimension dimension = Dimension::PLanQul;
    std::string model_id;
    std::string timestamp;
    std::string request;
    std::string response; // or error text for unjudged calls
    bool judged = false;
};

struct JudgeSummary {
    std::vector<DimensionTally> tallies;
    std::vector<JudgeCallLog> log;
};

/// Judge every instance on every requested dimension through the transport.
/// Calls may run concurrently up to options.concurrency; results are
/// aggregated in deterministic (instance, dimension) order. Transport
/// failures after all retries mark the call unjudged; unjudged calls are
/// excluded from percentages.
JudgeSummary judge_batch(const std::vector<EvalInstance>& instances,
                         const std::vector<Dimension>& dimensions, JudgeKind kind, JudgeMode mode,
                         Transport& transport, const JudgeOptions& options);

/// Negative/positive column labels per dimension (Table-style reports).
std::pair<const char*, const char*> dimension_column_labels(Dimension d);

} // namespace cfceval
