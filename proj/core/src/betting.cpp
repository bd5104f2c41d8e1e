#include "tenniscast/betting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tenniscast/magnet.hpp"  // Rng

namespace tenniscast::betting {

double kelly_fraction(double prob, double decimal_odds) {
    double f = (prob * decimal_odds - 1.0) / (decimal_odds - 1.0);
    return f > 0.0 ? f : 0.0;
}

namespace {

/// Stake and side for one row under a staking rule; nullopt = no bet.
std::optional<BetRecord> place_bet(const BettingRow& row, Staking staking) {
    BetRecord bet;
    bet.match_id = row.match_id;
    bet.date = row.date;
    bet.istar = row.istar;
    if (staking == Staking::unit) {
        // 1 unit on the model's favoured side, tie going to side B.
        bet.side = row.prob_a > 0.5 ? 0 : 1;
        bet.stake = 1.0;
    } else {
        double fa = kelly_fraction(row.prob_a, *row.odds_a);
        double fb = kelly_fraction(1.0 - row.prob_a, *row.odds_b);
        if (fa <= 0.0 && fb <= 0.0) return std::nullopt;
        bet.side = fa >= fb ? 0 : 1;
        bet.stake = std::max(fa, fb);
    }
    bet.odds = bet.side == 0 ? *row.odds_a : *row.odds_b;
    bet.prob = bet.side == 0 ? row.prob_a : 1.0 - row.prob_a;
    const bool won = (bet.side == 0) == (row.outcome_a == 1);
    bet.payout = won ? bet.stake * bet.odds : 0.0;
    bet.profit = won ? bet.stake * (bet.odds - 1.0) : -bet.stake;
    return bet;
}

}  // namespace

SimulationResult simulate(std::span<const BettingRow> rows, const StrategyConfig& strategy) {
    // Canonical order makes totals independent of input permutation.
    std::vector<const BettingRow*> ordered;
    ordered.reserve(rows.size());
    SimulationResult result;
    for (const auto& r : rows) {
        if (strategy.gamma && r.istar < *strategy.gamma) continue;
        if (!r.odds_a || !r.odds_b) {
            ++result.skipped_no_odds;
            continue;
        }
        ordered.push_back(&r);
    }
    std::sort(ordered.begin(), ordered.end(), [](const BettingRow* a, const BettingRow* b) {
        return std::make_pair(a->date, a->match_id) < std::make_pair(b->date, b->match_id);
    });

    for (const BettingRow* row : ordered) {
        auto bet = place_bet(*row, strategy.staking);
        if (!bet) continue;
        result.staked += bet->stake;
        result.returned += bet->payout;
        result.profit += bet->profit;
        result.bets.push_back(*bet);
    }
    result.roi = result.staked > 0.0 ? result.profit / result.staked : 0.0;

    std::map<Date, double> daily;
    for (const auto& b : result.bets) daily[b.date] += b.profit;
    std::vector<std::pair<Date, double>> series(daily.begin(), daily.end());
    result.sharpe = sharpe_ratio(series);
    return result;
}

std::optional<double> sharpe_ratio(std::span<const std::pair<Date, double>> daily_profits) {
    if (daily_profits.size() < 2) return std::nullopt;
    double n = static_cast<double>(daily_profits.size());
    double mean = 0.0;
    for (const auto& [d, p] : daily_profits) mean += p;
    mean /= n;
    double var = 0.0;
    for (const auto& [d, p] : daily_profits) var += (p - mean) * (p - mean);
    var /= (n - 1.0);
    if (var <= 0.0) return std::nullopt;
    return mean / std::sqrt(var) * std::sqrt(365.25);
}

ThresholdSearchResult threshold_search(std::span<const BettingRow> rows) {
    double max_istar = 0.0;
    for (const auto& r : rows) max_istar = std::max(max_istar, r.istar);
    ThresholdSearchResult result;
    double best_mean = -1e300;
    const long long steps = static_cast<long long>(std::ceil(max_istar / 0.05)) + 1;
    for (long long i = 0; i < steps; ++i) {
        double gamma = 0.05 * static_cast<double>(i);
        StrategyConfig kelly{Staking::kelly, gamma};
        StrategyConfig unit{Staking::unit, gamma};
        SimulationResult rk = simulate(rows, kelly);
        SimulationResult ru = simulate(rows, unit);
        ThresholdPoint point{gamma, rk.roi, ru.roi, static_cast<long long>(rk.bets.size()),
                             static_cast<long long>(ru.bets.size())};
        result.grid.push_back(point);
        double mean = 0.5 * (rk.roi + ru.roi);
        if (mean > best_mean) {  // strict: ties keep the smaller gamma
            best_mean = mean;
            result.best_gamma = gamma;
        }
    }
    return result;
}

double significance_mc(const SimulationResult& observed, std::span<const BettingRow> universe,
                       Staking staking, int trials, uint64_t seed) {
    std::vector<const BettingRow*> pool;
    for (const auto& r : universe)
        if (r.odds_a && r.odds_b) pool.push_back(&r);
    if (pool.empty() || observed.bets.empty()) return 1.0;

    const size_t n_bets = observed.bets.size();
    long long at_least = 0;
    for (int t = 0; t < trials; ++t) {
        magnet::Rng rng(seed + static_cast<uint64_t>(t));  // derived per-trial seed
        double staked = 0.0, profit = 0.0;
        for (size_t b = 0; b < n_bets; ++b) {
            const BettingRow& row = *pool[static_cast<size_t>(rng.next_u64() % pool.size())];
            int side = static_cast<int>(rng.next_u64() & 1);
            double odds = side == 0 ? *row.odds_a : *row.odds_b;
            double prob = side == 0 ? row.prob_a : 1.0 - row.prob_a;
            double stake = staking == Staking::unit ? 1.0 : kelly_fraction(prob, odds);
            if (stake <= 0.0) continue;
            const bool won = (side == 0) == (row.outcome_a == 1);
            staked += stake;
            profit += won ? stake * (odds - 1.0) : -stake;
        }
        double roi = staked > 0.0 ? profit / staked : 0.0;
        if (roi >= observed.roi) ++at_least;
    }
    return static_cast<double>(at_least) / static_cast<double>(trials);
}

}  // namespace tenniscast::betting
