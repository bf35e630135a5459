#include "revsem/mock_server.hpp"

#include <cstdint>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "revsem/errors.hpp"

namespace revsem {

struct MockToxicityServer::Impl {
    httplib::Server server;
    std::thread thread;
    mutable std::mutex mutex;
    std::optional<double> fixed_score;
    int fail_remaining = 0;
    int fail_status = 500;
    std::vector<std::chrono::steady_clock::time_point> requests;
};

double MockToxicityServer::deterministic_score(const std::string& text) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    // top 53 bits -> [0, 1)
    return static_cast<double>(hash >> 11) / 9007199254740992.0;
}

MockToxicityServer::MockToxicityServer() : impl_(std::make_unique<Impl>()) {
    impl_->server.Post("/v1alpha1/comments:analyze",
                       [this](const httplib::Request& req, httplib::Response& res) {
        {
            std::lock_guard<std::mutex> lock(impl_->mutex);
            impl_->requests.push_back(std::chrono::steady_clock::now());
            if (impl_->fail_remaining > 0) {
                --impl_->fail_remaining;
                res.status = impl_->fail_status;
                res.set_content(R"({"error":{"message":"injected failure"}})",
                                "application/json");
                return;
            }
        }
        std::string key = req.get_param_value("key");
        if (key == "invalid-key") {
            res.status = 400;
            res.set_content(
                R"({"error":{"code":400,"message":"API key not valid","status":"INVALID_ARGUMENT","details":[{"reason":"API_KEY_INVALID"}]}})",
                "application/json");
            return;
        }
        std::string text;
        try {
            auto body = nlohmann::json::parse(req.body);
            text = body.at("comment").at("text").get<std::string>();
        } catch (const std::exception&) {
            res.status = 400;
            res.set_content(R"({"error":{"message":"bad request"}})", "application/json");
            return;
        }
        bool non_ascii = false;
        for (unsigned char c : text)
            if (c >= 0x80) non_ascii = true;
        if (non_ascii) {
            res.status = 400;
            res.set_content(
                R"({"error":{"code":400,"message":"Attribute TOXICITY does not support request languages","status":"INVALID_ARGUMENT","details":[{"errorType":"LANGUAGE_NOT_SUPPORTED_BY_ATTRIBUTE"}]}})",
                "application/json");
            return;
        }
        double score;
        {
            std::lock_guard<std::mutex> lock(impl_->mutex);
            score = impl_->fixed_score.value_or(deterministic_score(text));
        }
        nlohmann::json out = {
            {"attributeScores",
             {{"TOXICITY",
               {{"summaryScore", {{"value", score}, {"type", "PROBABILITY"}}}}}}}};
        res.set_content(out.dump(), "application/json");
    });
}

MockToxicityServer::~MockToxicityServer() { stop(); }

int MockToxicityServer::start() {
    port_ = impl_->server.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw NetworkError("mock server: cannot bind a port");
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port_;
}

void MockToxicityServer::stop() {
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

std::string MockToxicityServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
}

void MockToxicityServer::set_fixed_score(std::optional<double> score) {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->fixed_score = score;
}

void MockToxicityServer::fail_next(int n, int status) {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->fail_remaining = n;
    impl_->fail_status = status;
}

std::vector<std::chrono::steady_clock::time_point> MockToxicityServer::request_times() const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    return impl_->requests;
}

std::size_t MockToxicityServer::request_count() const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    return impl_->requests.size();
}

}  // namespace revsem
