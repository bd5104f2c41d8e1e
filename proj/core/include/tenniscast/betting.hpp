#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tenniscast/types.hpp"

namespace tenniscast::betting {

/// Kelly stake fraction (p*o - 1) / (o - 1), floored at zero.
double kelly_fraction(double prob, double decimal_odds);

enum class Staking : uint8_t { kelly, unit };

struct StrategyConfig {
    Staking staking = Staking::kelly;
    std::optional<double> gamma;  // minimum intransitivity filter
};

/// One bettable match: two sides with odds and a model probability for
/// side A (side B gets the complement).
struct BettingRow {
    int64_t match_id = -1;
    Date date;
    double prob_a = 0.5;
    std::optional<double> odds_a, odds_b;
    double istar = 0.0;
    int outcome_a = 0;  // 1 if side A won
};

struct BetRecord {
    int64_t match_id = -1;
    Date date;
    int side = 0;  // 0 = A, 1 = B
    double stake = 0.0;
    double odds = 1.0;
    double prob = 0.5;   // bettor's probability for the backed side
    double istar = 0.0;
    double payout = 0.0;
    double profit = 0.0;
};

struct SimulationResult {
    std::vector<BetRecord> bets;
    double staked = 0.0;
    double returned = 0.0;
    double profit = 0.0;
    double roi = 0.0;  // profit / staked, 0 when nothing staked
    long long skipped_no_odds = 0;
    std::optional<double> sharpe;  // absent when undefined (fewer than 2
                                   // betting days or zero variance)
};

/// Bankroll resets to 1 before every bet, so results are order-invariant;
/// rows are processed in canonical (date, match_id) order internally.
SimulationResult simulate(std::span<const BettingRow> rows, const StrategyConfig& strategy);

/// Annualised Sharpe of per-day profits: mean/std * sqrt(365.25).
std::optional<double> sharpe_ratio(std::span<const std::pair<Date, double>> daily_profits);

struct ThresholdPoint {
    double gamma = 0.0;
    double kelly_roi = 0.0;
    double unit_roi = 0.0;
    long long kelly_bets = 0;
    long long unit_bets = 0;
};

struct ThresholdSearchResult {
    double best_gamma = 0.0;
    std::vector<ThresholdPoint> grid;
};

/// Grid over [0, max observed score] at 0.05 resolution, maximising the
/// mean of Kelly and unit ROI; ties resolve to the smallest threshold.
ThresholdSearchResult threshold_search(std::span<const BettingRow> rows);

/// Monte-Carlo probability that random bets (uniform match and side, the
/// strategy's staking rule) reach the observed ROI.
double significance_mc(const SimulationResult& observed, std::span<const BettingRow> universe,
                       Staking staking, int trials, uint64_t seed);

}  // namespace tenniscast::betting
