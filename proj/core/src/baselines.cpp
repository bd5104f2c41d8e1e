#include "tenniscast/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace tenniscast::baselines {

double elo_win_probability(double rating_a, double rating_b) {
    return 1.0 / (1.0 + std::pow(10.0, (rating_b - rating_a) / 400.0));
}

double elo_k_factor(int prior_matches) {
    return 250.0 / std::pow(prior_matches + 5.0, 0.4);
}

double welo_multiplier(double winner_games_share) {
    return 1.0 + 2.0 * (winner_games_share - 0.5);
}

void EloTable::update(const MatchRecord& m) {
    const auto w = static_cast<size_t>(m.winner);
    const auto l = static_cast<size_t>(m.loser);
    const double p_w = elo_win_probability(ratings_[w], ratings_[l]);
    const double k_w = elo_k_factor(counts_[w]);
    const double k_l = elo_k_factor(counts_[l]);
    const double f = weighted_ ? welo_multiplier(m.winner_games_share()) : 1.0;
    ratings_[w] += k_w * (1.0 - p_w) * f;
    ratings_[l] += k_l * (0.0 - (1.0 - p_w)) * f;
    ++counts_[w];
    ++counts_[l];
}

IlsrResult ilsr_fit(const std::vector<std::pair<int, int>>& wins, int num_players, double reg,
                    double tol, int max_iter, const std::vector<double>* warm_start) {
    if (num_players <= 0) throw std::invalid_argument("ilsr_fit: empty player set");
    const int n = num_players + 1;  // last state is the reference player
    const int ref = num_players;

    // Aggregate win counts per directed pair; the regulariser adds a
    // virtual tie (one win each way, weight reg) between every player and
    // the reference.
    std::map<std::pair<int, int>, double> counts;
    for (const auto& [winner, loser] : wins) counts[{winner, loser}] += 1.0;
    for (int i = 0; i < num_players; ++i) {
        counts[{i, ref}] += reg;
        counts[{ref, i}] += reg;
    }
    struct Edge {
        int winner, loser;
        double count;
    };
    std::vector<Edge> edges;
    edges.reserve(counts.size());
    for (const auto& [pair, count] : counts) edges.push_back({pair.first, pair.second, count});

    std::vector<double> pi(static_cast<size_t>(n), 1.0);
    if (warm_start && warm_start->size() == static_cast<size_t>(num_players))
        std::copy(warm_start->begin(), warm_start->end(), pi.begin());

    std::vector<double> rate(edges.size());
    std::vector<double> out_rate(static_cast<size_t>(n));
    std::vector<double> p(static_cast<size_t>(n)), next(static_cast<size_t>(n));

    IlsrResult result;
    for (int iter = 0; iter < max_iter; ++iter) {
        // Chain rates at the current iterate: each win (i over j) adds
        // flow j -> i of count / (pi_i + pi_j).
        std::fill(out_rate.begin(), out_rate.end(), 0.0);
        double scale = 0.0;
        for (size_t e = 0; e < edges.size(); ++e) {
            const Edge& edge = edges[e];
            rate[e] = edge.count /
                      (pi[static_cast<size_t>(edge.winner)] + pi[static_cast<size_t>(edge.loser)]);
            out_rate[static_cast<size_t>(edge.loser)] += rate[e];
        }
        for (int i = 0; i < n; ++i) scale = std::max(scale, out_rate[static_cast<size_t>(i)]);
        if (scale <= 0.0) break;  // no comparisons at all

        // Uniformised power iteration for the stationary distribution,
        // warm-started from the current iterate.
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += pi[static_cast<size_t>(i)];
        for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = pi[static_cast<size_t>(i)] / total;
        for (int inner = 0; inner < 50000; ++inner) {
            for (int i = 0; i < n; ++i)
                next[static_cast<size_t>(i)] =
                    p[static_cast<size_t>(i)] * (1.0 - out_rate[static_cast<size_t>(i)] / scale);
            for (size_t e = 0; e < edges.size(); ++e)
                next[static_cast<size_t>(edges[e].winner)] +=
                    p[static_cast<size_t>(edges[e].loser)] * (rate[e] / scale);
            double delta = 0.0;
            for (int i = 0; i < n; ++i)
                delta = std::max(delta,
                                 std::abs(next[static_cast<size_t>(i)] - p[static_cast<size_t>(i)]));
            p.swap(next);
            if (delta < 1e-12) break;
        }

        // Pin the reference strength at 1.
        double ref_mass = p[static_cast<size_t>(ref)];
        if (ref_mass <= 0.0) break;
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            double v = p[static_cast<size_t>(i)] / ref_mass;
            delta = std::max(delta, std::abs(v - pi[static_cast<size_t>(i)]) /
                                        std::max(pi[static_cast<size_t>(i)], 1e-12));
            pi[static_cast<size_t>(i)] = v;
        }
        result.iterations = iter + 1;
        if (delta < tol) {
            result.converged = true;
            result.strengths.assign(pi.begin(), pi.end() - 1);
            return result;
        }
    }
    result.converged = false;  // last iterate is still used
    result.strengths.assign(pi.begin(), pi.end() - 1);
    return result;
}

double RollingBradleyTerry::predict(PlayerId a, PlayerId b, Date as_of) {
    if (as_of.serial() != cached_serial_) {
        Date window_start = as_of.plus_years(-2);
        std::vector<std::pair<int, int>> wins;
        for (const MatchRecord& m : *matches_) {
            if (m.date >= as_of) break;  // matches_ is date-sorted
            if (m.date < window_start) continue;
            wins.emplace_back(m.winner, m.loser);
        }
        const std::vector<double>* warm =
            cached_strengths_.empty() ? nullptr : &cached_strengths_;
        cached_strengths_ = ilsr_fit(wins, static_cast<int>(num_players_), 0.01, 1e-6, 10000,
                                     warm).strengths;
        cached_serial_ = as_of.serial();
    }
    return bt_probability(cached_strengths_[static_cast<size_t>(a)],
                          cached_strengths_[static_cast<size_t>(b)]);
}

namespace {

/// Shin fair probability of one outcome given insider fraction z.
double shin_fair(double z, double pi_sq_over_total) {
    return (std::sqrt(z * z + 4.0 * (1.0 - z) * pi_sq_over_total) - z) / (2.0 * (1.0 - z));
}

}  // namespace

ShinResult shin_probabilities(double odds_a, double odds_b) {
    if (odds_a <= 1.0 || odds_b <= 1.0)
        throw std::invalid_argument("shin_probabilities: decimal odds must exceed 1");
    const double pi_a = 1.0 / odds_a;
    const double pi_b = 1.0 / odds_b;
    const double total = pi_a + pi_b;

    ShinResult r;
    if (total < 1.0) {  // arbitrage odds: no insider fraction exists
        r.prob_a = pi_a / total;
        r.prob_b = pi_b / total;
        r.arb_flagged = true;
        return r;
    }
    const double a = pi_a * pi_a / total;
    const double b = pi_b * pi_b / total;
    auto excess = [&](double z) { return shin_fair(z, a) + shin_fair(z, b) - 1.0; };

    // The root can sit marginally above booksum - 1, so the bracket grows
    // until it straddles; excess() is decreasing and negative as z -> 1.
    double lo = 0.0;
    double hi = std::max(total - 1.0, 1e-12);
    while (excess(hi) > 0.0 && hi < 1.0 - 1e-9) hi = std::min(1.0 - 1e-9, hi * 2.0 + 1e-9);
    if (excess(lo) < 0.0) {
        r.prob_a = shin_fair(0.0, a);
        r.prob_b = shin_fair(0.0, b);
        return r;  // booksum == 1: z = 0 exactly
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (excess(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-10) break;
    }
    double z = 0.5 * (lo + hi);
    double pa = shin_fair(z, a);
    double pb = shin_fair(z, b);
    double norm = pa + pb;
    r.prob_a = pa / norm;
    r.prob_b = pb / norm;
    r.insider_fraction = z;
    return r;
}

}  // namespace tenniscast::baselines
