#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "revsem/errors.hpp"
#include "revsem/srr.hpp"

using namespace revsem;

TEST_CASE("reviewer credit boundary") {
    CHECK(reviewer_credit(2'000'000) == 2);
    CHECK(reviewer_credit(999'999) == 1);
    CHECK(reviewer_credit(1'000'000) == 1);  // strictly-greater rule
    CHECK(reviewer_credit(1'000'001) == 2);
    CHECK(reviewer_credit(0) == 1);
    // flipped boundary convention
    CHECK(reviewer_credit(1'000'000, true) == 2);
    CHECK(reviewer_credit(999'999, true) == 1);
}

TEST_CASE("identical products split the budget evenly") {
    std::vector<PlayerRating> players;
    for (int i = 0; i < 6; ++i) players.push_back({"app" + std::to_string(i), 4.0, 100});
    auto srr = compute_srr(players);
    for (const auto& [app, v] : srr) CHECK(v == doctest::Approx(10.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("single player gets the whole budget") {
    auto srr = compute_srr({{"only", 3.7, 50}});
    CHECK(srr.at("only") == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("six-player worked example") {
    // products R_p * R_c: 9.0, 4.0, 8.4, 3.8, 9.2, 4.4 (sum 38.8)
    std::vector<PlayerRating> players = {
        {"p1", 4.5, 2'000'000},  // 9.0
        {"p2", 4.0, 500},        // 4.0
        {"p3", 4.2, 1'200'000},  // 8.4
        {"p4", 3.8, 100},        // 3.8
        {"p5", 4.6, 3'000'000},  // 9.2
        {"p6", 4.4, 999'999},    // 4.4
    };
    auto srr = compute_srr(players);
    CHECK(srr.at("p1") == doctest::Approx(9.0 / 3.88).epsilon(1e-9));
    CHECK(srr.at("p1") == doctest::Approx(2.3196).epsilon(1e-4));
}

TEST_CASE("empty player list is an error") {
    CHECK_THROWS_AS(compute_srr({}), DataError);
}

TEST_CASE("properties over random player tables") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_real_distribution<double> rating(2.0, 5.0);  // keeps 0.5x in [1, 5]
    std::uniform_int_distribution<long> count(0, 5'000'000);

    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<PlayerRating> players;
        int n = size(rng);
        for (int i = 0; i < n; ++i)
            players.push_back({"app" + std::to_string(i), rating(rng), count(rng)});
        auto srr = compute_srr(players);

        // per-sector values sum to 10
        double total = 0.0;
        for (const auto& [app, v] : srr) {
            total += v;
            CHECK(v > 0.0);
            CHECK(v <= 10.0 + 1e-9);
        }
        CHECK(total == doctest::Approx(10.0).epsilon(1e-9));

        // argmax over srr equals argmax over raw R_p * R_c
        auto product = [](const PlayerRating& p) {
            return p.overall_rating * reviewer_credit(p.reviewer_count);
        };
        const auto& best = *std::max_element(
            players.begin(), players.end(),
            [&](const PlayerRating& a, const PlayerRating& b) { return product(a) < product(b); });
        for (const auto& p : players) CHECK(srr.at(best.appId) >= srr.at(p.appId) - 1e-12);

        // scale covariance: scaling every rating by c > 0 leaves srr unchanged
        std::vector<PlayerRating> scaled = players;
        for (auto& p : scaled) p.overall_rating *= 0.5;
        auto srr2 = compute_srr(scaled);
        for (const auto& [app, v] : srr)
            CHECK(srr2.at(app) == doctest::Approx(v).epsilon(1e-9));
    }
}
