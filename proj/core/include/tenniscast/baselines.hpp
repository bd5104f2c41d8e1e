#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tenniscast/types.hpp"

namespace tenniscast::baselines {

/// P(A beats B) under the logistic Elo curve.
double elo_win_probability(double rating_a, double rating_b);

/// Dynamic K-factor 250 / (n + 5)^0.4 with n prior matches.
double elo_k_factor(int prior_matches);

/// Standard and games-share-weighted Elo over one player pool. Ratings
/// start at 1500; updates must be fed in match-date order.
class EloTable {
public:
    explicit EloTable(size_t num_players, bool weighted) : weighted_(weighted) {
        ratings_.assign(num_players, 1500.0);
        counts_.assign(num_players, 0);
    }

    double predict(PlayerId a, PlayerId b) const {
        return elo_win_probability(ratings_[static_cast<size_t>(a)],
                                   ratings_[static_cast<size_t>(b)]);
    }
    void update(const MatchRecord& m);

    double rating(PlayerId p) const { return ratings_[static_cast<size_t>(p)]; }
    int match_count(PlayerId p) const { return counts_[static_cast<size_t>(p)]; }

private:
    bool weighted_;
    std::vector<double> ratings_;
    std::vector<int> counts_;
};

/// Games-share multiplier of the weighted variant: 1 + 2 (g - 0.5).
double welo_multiplier(double winner_games_share);

struct IlsrResult {
    std::vector<double> strengths;  // normalised so the reference player is 1
    bool converged = true;
    int iterations = 0;
};

/// Regularised Bradley-Terry fit via iterative Luce spectral ranking.
/// `wins` are (winner, loser) index pairs over players 0..n-1. The
/// regulariser is a virtual tie of weight `reg` against a reference
/// player whose strength is pinned at 1.
IlsrResult ilsr_fit(const std::vector<std::pair<int, int>>& wins, int num_players,
                    double reg = 0.01, double tol = 1e-6, int max_iter = 10000,
                    const std::vector<double>* warm_start = nullptr);

inline double bt_probability(double strength_a, double strength_b) {
    return strength_a / (strength_a + strength_b);
}

/// Rolling Bradley-Terry over a trailing two-year window, re-fit per
/// distinct as-of date (strengths depend only on prior matches).
class RollingBradleyTerry {
public:
    RollingBradleyTerry(const std::vector<MatchRecord>& matches, size_t num_players)
        : matches_(&matches), num_players_(num_players) {}

    /// P(a beats b) using matches dated in [as_of - 2 years, as_of).
    double predict(PlayerId a, PlayerId b, Date as_of);

private:
    const std::vector<MatchRecord>* matches_;
    size_t num_players_;
    int32_t cached_serial_ = INT32_MIN;
    std::vector<double> cached_strengths_;
};

struct ShinResult {
    double prob_a = 0.5;
    double prob_b = 0.5;
    double insider_fraction = 0.0;  // the solved z
    bool arb_flagged = false;       // booksum < 1: returned raw normalised probs
};

/// Two-outcome Shin de-margining of decimal odds via bisection on the
/// insider fraction.
ShinResult shin_probabilities(double odds_a, double odds_b);

}  // namespace tenniscast::baselines
