#include "revsem/srr.hpp"

#include <cassert>

#include "revsem/errors.hpp"

namespace revsem {

int reviewer_credit(long reviewer_count, bool boundary_is_high) {
    if (reviewer_count < 0) throw DataError("negative reviewer count");
    if (reviewer_count > 1000000) return 2;
    if (reviewer_count == 1000000) return boundary_is_high ? 2 : 1;
    return 1;
}

std::map<std::string, double> compute_srr(const std::vector<PlayerRating>& players,
                                          bool boundary_is_high) {
    if (players.empty()) throw DataError("compute_srr: empty player list");
    double total = 0.0;
    std::vector<double> weighted;
    weighted.reserve(players.size());
    for (const auto& p : players) {
        if (p.overall_rating < 1.0 || p.overall_rating > 5.0)
            throw DataError("overall rating outside [1, 5] for app " + p.appId);
        double w = p.overall_rating * reviewer_credit(p.reviewer_count, boundary_is_high);
        weighted.push_back(w);
        total += w;
    }
    assert(total > 0.0);  // Rp >= 1 and Rc >= 1 guarantee a positive sum
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < players.size(); ++i)
        out[players[i].appId] = weighted[i] / (total / 10.0);
    return out;
}

}  // namespace revsem
