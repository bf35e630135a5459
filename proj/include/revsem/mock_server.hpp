#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace revsem {

/// Deterministic local stand-in for the toxicity scoring service. Scores
/// are a pure function of the comment text; text containing non-ASCII
/// bytes gets the unsupported-language error, mirroring how foreign-
/// language reviews end up MISSING.
class MockToxicityServer {
public:
    MockToxicityServer();
    ~MockToxicityServer();

    /// Binds to a free port and serves on a background thread.
    int start();
    void stop();
    std::string base_url() const;
    int port() const { return port_; }

    void set_fixed_score(std::optional<double> score);
    /// The next `n` requests answer with the given HTTP status.
    void fail_next(int n, int status);

    std::vector<std::chrono::steady_clock::time_point> request_times() const;
    std::size_t request_count() const;

    /// FNV-1a hash of the text mapped into [0, 1).
    static double deterministic_score(const std::string& text);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace revsem
