#include "revsem/toxicity.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "revsem/errors.hpp"

namespace revsem {

Credentials Credentials::from_env() {
    const char* key = std::getenv("PERSPECTIVE_API_KEY");
    if (!key || !*key)
        throw ConfigError("PERSPECTIVE_API_KEY is not set");
    return Credentials{key};
}

namespace {

std::string trim_copy(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

struct ToxicityClient::Impl {
    std::string base_url;
    Credentials credentials;
    httplib::Client http;
    std::mutex mutex;
    std::chrono::steady_clock::time_point next_slot = std::chrono::steady_clock::now();
    std::vector<std::chrono::steady_clock::time_point> requests;

    explicit Impl(std::string url, Credentials creds)
        : base_url(std::move(url)), credentials(std::move(creds)), http(base_url) {}

    // Token-bucket slot shared by all callers; records the issue time.
    void wait_for_slot(double qps) {
        std::chrono::steady_clock::time_point slot;
        {
            std::lock_guard<std::mutex> lock(mutex);
            auto now = std::chrono::steady_clock::now();
            slot = std::max(next_slot, now);
            next_slot = slot + std::chrono::microseconds(
                                   static_cast<long long>(1e6 / qps));
            requests.push_back(slot);
        }
        std::this_thread::sleep_until(slot);
    }
};

ToxicityClient::ToxicityClient(std::string base_url, Credentials credentials,
                               RateLimitPolicy policy)
    : impl_(std::make_unique<Impl>(std::move(base_url), std::move(credentials))),
      policy_(policy) {
    double timeout_s = std::chrono::duration<double>(policy_.request_timeout).count();
    impl_->http.set_connection_timeout(timeout_s);
    impl_->http.set_read_timeout(timeout_s);
    impl_->http.set_write_timeout(timeout_s);
}

ToxicityClient::~ToxicityClient() = default;

std::vector<std::chrono::steady_clock::time_point> ToxicityClient::request_times() const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    return impl_->requests;
}

ToxicityScore ToxicityClient::score_comment(const std::string& text) {
    if (trim_copy(text).empty()) return ToxicityScore::missing(MissingReason::empty_text);

    nlohmann::json body = {
        {"comment", {{"text", text}}},
        {"requestedAttributes", {{"TOXICITY", nlohmann::json::object()}}},
    };
    std::string path = "/v1alpha1/comments:analyze?key=" + impl_->credentials.api_key;
    std::string payload = body.dump();

    auto backoff = policy_.initial_backoff;
    bool saw_timeout = false;
    for (int attempt = 0; attempt <= policy_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds(static_cast<long long>(
                backoff.count() * policy_.backoff_multiplier));
        }
        impl_->wait_for_slot(policy_.max_requests_per_second);
        httplib::Result res = impl_->http.Post(path, payload, "application/json");
        if (!res) {  // connection failure / timeout
            saw_timeout = true;
            continue;
        }
        if (res->status == 200) {
            try {
                auto json = nlohmann::json::parse(res->body);
                double value =
                    json.at("attributeScores").at("TOXICITY").at("summaryScore").at("value");
                return ToxicityScore::present(std::clamp(value, 0.0, 1.0));
            } catch (const std::exception&) {
                return ToxicityScore::missing(MissingReason::api_error);
            }
        }
        std::string body_text = res->body;
        if (body_text.find("LANGUAGE_NOT_SUPPORTED") != std::string::npos ||
            body_text.find("languageNotSupported") != std::string::npos)
            return ToxicityScore::missing(MissingReason::unsupported_language);
        if (body_text.find("API_KEY_INVALID") != std::string::npos ||
            res->status == 401 || res->status == 403)
            throw ConfigError("toxicity service rejected the API key (HTTP " +
                              std::to_string(res->status) + ")");
        if (res->status == 429 || res->status >= 500) continue;  // transient
        return ToxicityScore::missing(MissingReason::api_error);
    }
    return ToxicityScore::missing(saw_timeout ? MissingReason::timeout
                                              : MissingReason::api_error);
}

double estimate_eta_seconds(std::size_t n_remaining, double seconds_per_request) {
    return static_cast<double>(n_remaining) * seconds_per_request;
}

std::vector<std::pair<std::size_t, ToxicityScore>> load_checkpoint(const std::string& path) {
    std::vector<std::pair<std::size_t, ToxicityScore>> out;
    std::ifstream in(path);
    if (!in) return out;  // absent checkpoint is a fresh run
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        bool ok = tab != std::string::npos;
        std::size_t index = 0;
        ToxicityScore score = ToxicityScore::missing(MissingReason::api_error);
        if (ok) {
            try {
                index = std::stoul(line.substr(0, tab));
                std::string value = line.substr(tab + 1);
                if (value.rfind("NA:", 0) == 0) {
                    std::string reason = value.substr(3);
                    if (reason == "api_error") score = ToxicityScore::missing(MissingReason::api_error);
                    else if (reason == "unsupported_language")
                        score = ToxicityScore::missing(MissingReason::unsupported_language);
                    else if (reason == "empty_text")
                        score = ToxicityScore::missing(MissingReason::empty_text);
                    else if (reason == "timeout")
                        score = ToxicityScore::missing(MissingReason::timeout);
                    else ok = false;
                } else {
                    double v = std::stod(value);
                    if (v < 0.0 || v > 1.0) ok = false;
                    else score = ToxicityScore::present(v);
                }
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok) {
            std::ostringstream msg;
            msg << "checkpoint file " << path << " is corrupt at line " << lineno
                << "; delete the file (all rows will be re-scored) or remove the bad line "
                << "to resume";
            throw DataError(msg.str());
        }
        out.emplace_back(index, score);
    }
    return out;
}

void append_checkpoint(std::ostream& out, std::size_t index, const ToxicityScore& score) {
    out << index << "\t";
    if (score.is_missing()) out << "NA:" << to_string(score.reason);
    else {
        out.precision(17);
        out << *score.value;
    }
    out << "\n" << std::flush;
}

std::vector<ToxicityScore> stream_scores(const std::vector<ReviewRecord>& records,
                                         ToxicityClient& client, const StreamOptions& options) {
    std::vector<std::optional<ToxicityScore>> slots(records.size());
    if (!options.checkpoint_path.empty())
        for (const auto& [index, score] : load_checkpoint(options.checkpoint_path))
            if (index < slots.size()) slots[index] = score;

    std::size_t remaining = 0;
    for (const auto& slot : slots)
        if (!slot) ++remaining;
    if (options.progress) {
        double per_request = options.seconds_per_request_estimate.value_or(
            1.0 / client.policy().max_requests_per_second);
        double eta = estimate_eta_seconds(remaining, per_request);
        *options.progress << "toxicity: " << remaining << " request(s) to issue, estimated "
                          << eta << " s (" << eta / 3600.0 << " h)\n";
    }

    std::ofstream checkpoint;
    if (!options.checkpoint_path.empty()) {
        checkpoint.open(options.checkpoint_path, std::ios::app);
        if (!checkpoint)
            throw DataError("cannot open checkpoint file: " + options.checkpoint_path);
    }

    // Partition by appId, preserving first-appearance order of apps.
    std::vector<std::string> apps;
    std::map<std::string, std::vector<std::size_t>> partition;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!partition.count(records[i].appId)) apps.push_back(records[i].appId);
        partition[records[i].appId].push_back(i);
    }

    for (const auto& app : apps) {
        for (std::size_t i : partition[app]) {
            if (slots[i]) continue;
            ToxicityScore score = client.score_comment(records[i].content);
            slots[i] = score;
            if (checkpoint.is_open()) append_checkpoint(checkpoint, i, score);
        }
    }

    std::vector<ToxicityScore> out;
    out.reserve(records.size());
    for (const auto& slot : slots) out.push_back(*slot);
    return out;
}

}  // namespace revsem
