#pragma once

#include <chrono>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "revsem/records.hpp"

namespace revsem {

struct RateLimitPolicy {
    double max_requests_per_second = 1.0;
    int max_retries = 3;  // retries on transient failures only
    std::chrono::milliseconds initial_backoff{200};
    double backoff_multiplier = 2.0;
    std::chrono::milliseconds request_timeout{10000};
};

struct Credentials {
    std::string api_key;
    /// Reads PERSPECTIVE_API_KEY; throws ConfigError when unset.
    static Credentials from_env();
};

/// HTTP client for the comment-toxicity scoring service. Only the TOXICITY
/// attribute is requested. Per-row failures come back as MISSING scores;
/// an invalid API key is a fatal ConfigError.
class ToxicityClient {
public:
    ToxicityClient(std::string base_url, Credentials credentials, RateLimitPolicy policy);
    ~ToxicityClient();

    ToxicityScore score_comment(const std::string& text);

    const RateLimitPolicy& policy() const { return policy_; }
    /// Timestamps of issued requests, for rate-limit verification.
    std::vector<std::chrono::steady_clock::time_point> request_times() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    RateLimitPolicy policy_;
};

struct StreamOptions {
    std::string checkpoint_path;  // empty disables checkpointing
    std::ostream* progress = nullptr;
    /// Per-request wall-time estimate used for the pre-run ETA; defaults
    /// to the rate-limit interval when unset.
    std::optional<double> seconds_per_request_estimate;
};

double estimate_eta_seconds(std::size_t n_remaining, double seconds_per_request);

/// One score per record, input order, processed in per-appId partitions.
/// Rows already present in the checkpoint are never re-requested.
std::vector<ToxicityScore> stream_scores(const std::vector<ReviewRecord>& records,
                                         ToxicityClient& client, const StreamOptions& options);

/// Append-only checkpoint: "rowIndex<TAB>score" or "rowIndex<TAB>NA:reason".
std::vector<std::pair<std::size_t, ToxicityScore>> load_checkpoint(const std::string& path);
void append_checkpoint(std::ostream& out, std::size_t index, const ToxicityScore& score);

}  // namespace revsem
