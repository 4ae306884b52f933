#include "cfceval/judge.hpp"

#include "cfceval/errors.hpp"

#include <json.hpp>

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#ifndef CFCEVAL_NO_HTTP
#include <httplib.h>
#endif

namespace cfceval {

using nlohmann::json;

const char* to_string(JudgeKind kind) { return kind == JudgeKind::Tagger ? "tagger" : "scorer"; }
const char* to_string(JudgeMode mode) {
    return mode == JudgeMode::ReferenceBased ? "reference_based" : "reference_free";
}

ReplayTransport ReplayTransport::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open fixture file: " + path);
    ReplayTransport t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.contains("request") || !record.contains("response"))
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": fixture record needs request and response fields");
        t.add(record["request"].get<std::string>(), record["response"].get<std::string>());
    }
    return t;
}

void ReplayTransport::add(std::string request, std::string response) {
    responses_[std::move(request)] = std::move(response);
}

std::string ReplayTransport::send(const std::string& request) {
    auto it = responses_.find(request);
    if (it == responses_.end()) throw TransportError("no recorded response for request");
    return it->second;
}

std::string HttpTransport::send(const std::string& request) {
#ifdef CFCEVAL_NO_HTTP
    (void)request;
    throw TransportError("http transport disabled at build time");
#else
    const auto scheme_end = options_.endpoint_url.find("://");
    if (scheme_end == std::string::npos)
        throw TransportError("endpoint url must include a scheme: " + options_.endpoint_url);
    const auto path_start = options_.endpoint_url.find('/', scheme_end + 3);
    const std::string host = options_.endpoint_url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : options_.endpoint_url.substr(path_start);

    httplib::Client client(host);
    client.set_connection_timeout(options_.timeout_seconds);
    client.set_read_timeout(options_.timeout_seconds);

    httplib::Headers headers;
    if (const char* key = std::getenv(options_.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    json body = {
        {"model", options_.model},
        {"messages", json::array({json{{"role", "user"}, {"content", request}}})},
    };
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw TransportError("endpoint returned status " + std::to_string(res->status));
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) throw TransportError("endpoint returned invalid JSON");
    try {
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw TransportError("unexpected response shape from endpoint");
    }
#endif
}

namespace {

struct LabelSet {
    const char* negative;          // canonical negative tag
    const char* positive;          // canonical positive tag
    const char* negative_display;  // as rendered in prompts
    const char* positive_display;
};

LabelSet label_set(Dimension d) {
    switch (d) {
    case Dimension::PLanQul: return {"poor", "good", "Poor", "Good"};
    case Dimension::FixCap: return {"not_fixed", "fixed", "Not Fixed", "Fixed"};
    case Dimension::PTFixCap: return {"unresolved", "resolved", "Unresolved", "Resolved"};
    case Dimension::ELeRelv: return {"irrelevant", "relevant", "Irrelevant", "Relevant"};
    }
    return {"poor", "good", "Poor", "Good"};
}

const char* dimension_question(Dimension d) {
    switch (d) {
    case Dimension::PLanQul:
        return "Assess the programming-language quality of the generated code: syntax errors "
               "such as unbalanced brackets or quotes, incorrect starting or ending characters, "
               "or invalid terminal characters make it poor.";
    case Dimension::FixCap:
        return "Assess whether the generated code fixes the vulnerable code in the function.";
    case Dimension::PTFixCap:
        return "The function below was transformed while preserving its semantics. Assess "
               "whether the generated code resolves the transformed vulnerable code.";
    case Dimension::ELeRelv:
        return "Assess how relevant the generated code is to the secure reference fix: shared "
               "identifiers, operators, keywords, literals and API calls all count.";
    }
    return "";
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool word_boundary(const std::string& text, std::size_t pos, std::size_t len) {
    const auto is_word = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    if (pos > 0 && is_word(text[pos - 1])) return false;
    if (pos + len < text.size() && is_word(text[pos + len])) return false;
    return true;
}

std::optional<std::size_t> find_label(const std::string& haystack, const std::string& needle) {
    std::size_t from = 0;
    while (true) {
        const std::size_t pos = haystack.find(needle, from);
        if (pos == std::string::npos) return std::nullopt;
        if (word_boundary(haystack, pos, needle.size())) return pos;
        from = pos + 1;
    }
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm utc{};
    gmtime_r(&tt, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

} // namespace

JudgePrompt build_prompt(const EvalInstance& instance, Dimension dimension, JudgeKind kind,
                         JudgeMode mode) {
    if (mode == JudgeMode::ReferenceBased && instance.references.empty())
        throw ConfigError("reference-based prompt requires at least one reference");

    const LabelSet labels = label_set(dimension);
    std::ostringstream out;
    out << "You are reviewing code produced by a code-generation model for a security fix "
           "task.\n\n";
    out << dimension_question(dimension) << "\n\n";
    out << "Vulnerable function (" << to_string(instance.language) << "):\n"
        << instance.function_source << "\n\n";
    out << "Vulnerable code:\n" << instance.vulnerable_code << "\n\n";
    if (instance.generated) {
        out << "Generated code:\n" << *instance.generated << "\n\n";
    } else {
        out << "Generated code:\n(the model produced no code)\n\n";
    }
    if (mode == JudgeMode::ReferenceBased) {
        for (std::size_t i = 0; i < instance.references.size(); ++i)
            out << "Reference fix " << i + 1 << ":\n" << instance.references[i] << "\n\n";
    }
    if (kind == JudgeKind::Tagger) {
        out << "Answer with exactly one label: " << labels.negative_display << " or "
            << labels.positive_display << ".";
        if (!instance.generated)
            out << " If no code was generated, answer " << labels.negative_display << ".";
    } else {
        out << "Rate the generated code on a 5-point scale (1=very poor, 5=excellent). "
               "Answer with a single digit from 1 to 5.";
    }

    JudgePrompt prompt;
    prompt.dimension = dimension;
    prompt.mode = mode;
    prompt.kind = kind;
    prompt.text = out.str();
    return prompt;
}

JudgeVerdict parse_verdict(const std::string& response, JudgeKind kind, Dimension dimension) {
    JudgeVerdict verdict;
    verdict.kind = kind;
    verdict.raw = response;

    if (kind == JudgeKind::Scorer) {
        for (std::size_t i = 0; i < response.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(response[i]))) continue;
            std::size_t end = i;
            while (end < response.size() && std::isdigit(static_cast<unsigned char>(response[end])))
                ++end;
            const long value = std::stol(response.substr(i, end - i));
            if (value < 1 || value > 5)
                throw VerdictParseError("score " + std::to_string(value) + " outside 1-5");
            verdict.score = static_cast<int>(value);
            return verdict;
        }
        throw VerdictParseError("no score found in response");
    }

    const LabelSet labels = label_set(dimension);
    const std::string haystack = lower(response);
    // Negative spellings first: "not fixed" must win over its "fixed" suffix.
    struct Pattern {
        std::string text;
        const char* canonical;
    };
    std::vector<Pattern> patterns = {
        {lower(labels.negative_display), labels.negative},
        {lower(labels.negative), labels.negative},
        {lower(labels.positive_display), labels.positive},
        {lower(labels.positive), labels.positive},
    };
    std::optional<std::size_t> best_pos;
    const char* best_tag = nullptr;
    for (const Pattern& p : patterns) {
        const auto pos = find_label(haystack, p.text);
        if (pos && (!best_pos || *pos < *best_pos)) {
            best_pos = pos;
            best_tag = p.canonical;
        }
    }
    if (!best_tag) throw VerdictParseError("no valid label found in response");
    verdict.tag = best_tag;
    return verdict;
}

std::pair<const char*, const char*> dimension_column_labels(Dimension d) {
    const LabelSet labels = label_set(d);
    return {labels.negative_display, labels.positive_display};
}

JudgeSummary judge_batch(const std::vector<EvalInstance>& instances,
                         const std::vector<Dimension>& dimensions, JudgeKind kind, JudgeMode mode,
                         Transport& transport, const JudgeOptions& options) {
    if (instances.empty()) throw ConfigError("judge_batch requires at least one instance");
    if (dimensions.empty()) throw ConfigError("judge_batch requires at least one dimension");
    if (options.concurrency < 1) throw ConfigError("judge concurrency must be >= 1");
    if (mode == JudgeMode::ReferenceBased) {
        for (const EvalInstance& inst : instances)
            if (inst.references.empty())
                throw ConfigError("instance '" + inst.id +
                                  "' has no references for reference-based judging");
    }

    struct Task {
        const EvalInstance* instance;
        Dimension dimension;
    };
    std::vector<Task> tasks;
    tasks.reserve(instances.size() * dimensions.size());
    for (const EvalInstance& inst : instances)
        for (Dimension d : dimensions) tasks.push_back({&inst, d});

    struct Outcome {
        JudgeCallLog log;
        std::optional<JudgeVerdict> verdict;
    };
    std::vector<Outcome> outcomes(tasks.size());

    // Transports must tolerate concurrent send() calls: ReplayTransport is
    // read-only during a batch and HttpTransport opens a client per call.
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];
            Outcome& out = outcomes[i];
            out.log.instance_id = task.instance->id;
            out.log.dimension = task.dimension;
            out.log.model_id = options.model_id;
            out.log.timestamp =
                options.fixed_timestamp ? *options.fixed_timestamp : iso8601_now();
            const JudgePrompt prompt = build_prompt(*task.instance, task.dimension, kind, mode);
            out.log.request = prompt.text;

            std::string response;
            std::string last_error;
            bool sent = false;
            for (int attempt = 0; attempt <= options.retries && !sent; ++attempt) {
                try {
                    response = transport.send(prompt.text);
                    sent = true;
                } catch (const TransportError& e) {
                    last_error = e.what();
                }
            }
            if (!sent) {
                out.log.response = "transport error: " + last_error;
                continue;
            }
            out.log.response = response;
            try {
                out.verdict = parse_verdict(response, kind, task.dimension);
                out.log.judged = true;
            } catch (const VerdictParseError& e) {
                out.log.response += "\nparse error: " + std::string(e.what());
            }
        }
    };

    const std::size_t n_workers =
        std::min<std::size_t>(options.concurrency, tasks.size());
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    JudgeSummary summary;
    summary.log.reserve(outcomes.size());
    for (Dimension d : dimensions) {
        DimensionTally tally;
        tally.dimension = d;
        summary.tallies.push_back(tally);
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Outcome& out = outcomes[i];
        summary.log.push_back(out.log);
        DimensionTally* tally = nullptr;
        for (DimensionTally& t : summary.tallies)
            if (t.dimension == tasks[i].dimension) tally = &t;
        if (!out.verdict) {
            ++tally->unjudged;
            continue;
        }
        bool negative = false;
        if (kind == JudgeKind::Tagger) {
            negative = *out.verdict->tag == label_set(tasks[i].dimension).negative;
        } else {
            negative = *out.verdict->score <= options.scorer_negative_max;
        }
        if (negative)
            ++tally->negative;
        else
            ++tally->positive;
    }
    for (DimensionTally& t : summary.tallies) {
        const std::size_t judged = t.negative + t.positive;
        if (judged > 0) {
            t.negative_pct = 100.0 * static_cast<double>(t.negative) / judged;
            t.positive_pct = 100.0 * static_cast<double>(t.positive) / judged;
        }
    }
    return summary;
}

} // namespace cfceval
