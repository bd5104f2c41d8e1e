#include "tenniscast/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tenniscast/magnet.hpp"  // Rng

namespace tenniscast::eval {

double accuracy(std::span<const double> probs, std::span<const int> outcomes) {
    if (probs.empty() || probs.size() != outcomes.size())
        throw std::invalid_argument("accuracy: empty or mismatched inputs");
    long long correct = 0;
    for (size_t i = 0; i < probs.size(); ++i) {
        int predicted = probs[i] > 0.5 ? 1 : 0;
        if (predicted == outcomes[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(probs.size());
}

double brier(std::span<const double> probs, std::span<const int> outcomes) {
    if (probs.empty() || probs.size() != outcomes.size())
        throw std::invalid_argument("brier: empty or mismatched inputs");
    double sum = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        double d = probs[i] - outcomes[i];
        sum += d * d;
    }
    return sum / static_cast<double>(probs.size());
}

std::vector<CalibrationBin> calibration_curve(std::span<const double> probs,
                                              std::span<const int> outcomes) {
    if (probs.empty() || probs.size() != outcomes.size())
        throw std::invalid_argument("calibration_curve: empty or mismatched inputs");
    // Halving depth 4 at the extremes; [1/4, 1/2) and [1/2, 3/4) are each
    // split once more by the explicit mid-range bins.
    static const double edges[] = {0.0,       1.0 / 16, 1.0 / 8, 1.0 / 4, 3.0 / 8, 0.5,
                                   5.0 / 8,   3.0 / 4,  7.0 / 8, 15.0 / 16, 1.0};
    constexpr int num_bins = 10;
    std::vector<CalibrationBin> bins(num_bins);
    for (int b = 0; b < num_bins; ++b) {
        bins[static_cast<size_t>(b)].lo = edges[b];
        bins[static_cast<size_t>(b)].hi = edges[b + 1];
    }
    std::vector<double> sum_p(num_bins, 0.0), sum_o(num_bins, 0.0);
    for (size_t i = 0; i < probs.size(); ++i) {
        double p = probs[i];
        int b = num_bins - 1;
        for (int j = 0; j < num_bins; ++j) {
            if (p < edges[j + 1] || (j == num_bins - 1)) {
                b = j;
                break;
            }
        }
        auto idx = static_cast<size_t>(b);
        ++bins[idx].count;
        sum_p[idx] += p;
        sum_o[idx] += outcomes[i];
    }
    for (int b = 0; b < num_bins; ++b) {
        auto idx = static_cast<size_t>(b);
        if (bins[idx].count > 0) {
            bins[idx].mean_predicted = sum_p[idx] / static_cast<double>(bins[idx].count);
            bins[idx].observed_frequency = sum_o[idx] / static_cast<double>(bins[idx].count);
        }
    }
    return bins;
}

std::vector<RobustnessRow> robustness_bins(std::vector<RobustnessInput> rows) {
    std::vector<size_t> zero_rows, nonzero_rows;
    for (size_t i = 0; i < rows.size(); ++i)
        (rows[i].istar == 0.0 ? zero_rows : nonzero_rows).push_back(i);
    if (nonzero_rows.size() < 3)
        throw std::invalid_argument("robustness_bins: need at least 3 rows with nonzero scores");

    // Stable sort keeps ledger order among tied scores.
    std::stable_sort(nonzero_rows.begin(), nonzero_rows.end(), [&](size_t a, size_t b) {
        return rows[a].istar < rows[b].istar;
    });

    auto make_row = [&](int bin, const std::vector<size_t>& idx) {
        RobustnessRow r;
        r.bin = bin;
        r.count = static_cast<long long>(idx.size());
        if (!idx.empty()) {
            r.lo = rows[idx.front()].istar;
            r.hi = rows[idx.back()].istar;
            double bm = 0.0, bs = 0.0, bw = 0.0;
            for (size_t i : idx) {
                auto sq = [](double p, int o) { return (p - o) * (p - o); };
                bm += sq(rows[i].p_model, rows[i].outcome);
                bs += sq(rows[i].p_shin, rows[i].outcome);
                bw += sq(rows[i].p_welo, rows[i].outcome);
            }
            double n = static_cast<double>(idx.size());
            r.brier_model = bm / n;
            r.brier_shin = bs / n;
            r.brier_welo = bw / n;
            r.diff_shin = r.brier_model - r.brier_shin;
            r.diff_welo = r.brier_model - r.brier_welo;
        }
        return r;
    };

    std::vector<RobustnessRow> out;
    out.push_back(make_row(0, zero_rows));
    const size_t n = nonzero_rows.size();
    // Tertile sizes differ by at most one; earlier bins take the remainder.
    size_t base = n / 3, rem = n % 3, start = 0;
    for (int t = 0; t < 3; ++t) {
        size_t size = base + (static_cast<size_t>(t) < rem ? 1 : 0);
        std::vector<size_t> idx(nonzero_rows.begin() + static_cast<long>(start),
                                nonzero_rows.begin() + static_cast<long>(start + size));
        out.push_back(make_row(t + 1, idx));
        start += size;
    }
    return out;
}

BootstrapCi cluster_bootstrap_ci(
    std::span<const std::pair<PlayerId, PlayerId>> match_players,
    const std::function<double(const std::vector<size_t>&)>& statistic, int resamples,
    uint64_t seed) {
    std::vector<PlayerId> players;
    for (const auto& [a, b] : match_players) {
        players.push_back(a);
        players.push_back(b);
    }
    std::sort(players.begin(), players.end());
    players.erase(std::unique(players.begin(), players.end()), players.end());

    std::vector<size_t> all(match_players.size());
    std::iota(all.begin(), all.end(), 0);
    BootstrapCi ci;
    ci.point = statistic(all);

    PlayerId max_player = players.empty() ? 0 : players.back();
    std::vector<uint8_t> selected(static_cast<size_t>(max_player) + 1);
    std::vector<double> stats;
    stats.reserve(static_cast<size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        magnet::Rng rng(seed + static_cast<uint64_t>(r));  // derived per-resample seed
        std::fill(selected.begin(), selected.end(), 0);
        for (size_t i = 0; i < players.size(); ++i) {
            size_t pick = static_cast<size_t>(rng.next_u64() % players.size());
            selected[static_cast<size_t>(players[pick])] = 1;
        }
        std::vector<size_t> rows;
        for (size_t i = 0; i < match_players.size(); ++i) {
            if (selected[static_cast<size_t>(match_players[i].first)] ||
                selected[static_cast<size_t>(match_players[i].second)])
                rows.push_back(i);
        }
        stats.push_back(statistic(rows));
    }
    std::sort(stats.begin(), stats.end());
    auto percentile = [&](double q) {
        if (stats.empty()) return 0.0;
        double pos = q * static_cast<double>(stats.size() - 1);
        size_t lo = static_cast<size_t>(pos);
        size_t hi = std::min(lo + 1, stats.size() - 1);
        double frac = pos - static_cast<double>(lo);
        return stats[lo] * (1.0 - frac) + stats[hi] * frac;
    };
    ci.lo = percentile(0.025);
    ci.hi = percentile(0.975);
    return ci;
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("spearman_trend: an input is constant");
    return sxy / std::sqrt(sxx * syy);
}

double beta_cont_fraction(double a, double b, double x) {
    // Lentz's algorithm for the incomplete beta continued fraction.
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-14;
    constexpr double kTiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cont_fraction(a, b, x) / a;
    return 1.0 - front * beta_cont_fraction(b, a, 1.0 - x) / b;
}

SpearmanResult spearman_trend(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 10)
        throw std::invalid_argument("spearman_trend: need at least 10 paired values");
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    SpearmanResult r;
    r.rho = pearson(rx, ry);
    const double n = static_cast<double>(x.size());
    if (std::abs(r.rho) >= 1.0) {
        r.p_value = 0.0;
        return r;
    }
    double t = r.rho * std::sqrt((n - 2.0) / (1.0 - r.rho * r.rho));
    double df = n - 2.0;
    // Two-sided tail of Student's t.
    r.p_value = incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    return r;
}

}  // namespace tenniscast::eval
