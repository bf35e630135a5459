#pragma once

#include <map>
#include <string>
#include <vector>

namespace revsem {

struct PlayerRating {
    std::string appId;
    double overall_rating = 0.0;  // play-store product rating in [1, 5]
    long reviewer_count = 0;
};

/// 2 when the player has strictly more than a million reviewers, else 1.
/// `boundary_is_high` flips the exact-million boundary to 2.
int reviewer_credit(long reviewer_count, bool boundary_is_high = false);

/// Sector-wise weighted rating: srr_i = (Rp*Rc)_i / ((1/10) * sum(Rp*Rc)).
/// Values within one sector sum to 10.
std::map<std::string, double> compute_srr(const std::vector<PlayerRating>& players,
                                          bool boundary_is_high = false);

}  // namespace revsem
