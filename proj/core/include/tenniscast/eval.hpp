#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tenniscast/types.hpp"

namespace tenniscast::eval {

/// Mean of 1[predicted winner == actual]; p = 0.5 predicts outcome 0.
double accuracy(std::span<const double> probs, std::span<const int> outcomes);

/// Mean squared error between probabilities and binary outcomes.
double brier(std::span<const double> probs, std::span<const int> outcomes);

struct CalibrationBin {
    double lo, hi;
    long long count = 0;
    double mean_predicted = 0.0;
    double observed_frequency = 0.0;
};

/// Recursive-halving bins refined at the extremes, plus the two explicit
/// mid-range bins [0.375, 0.5) and [0.5, 0.625). All bins appear in the
/// output even when empty.
std::vector<CalibrationBin> calibration_curve(std::span<const double> probs,
                                              std::span<const int> outcomes);

struct RobustnessRow {
    int bin = 0;  // 0 = no head-to-head evidence, 1..3 = tertiles
    double lo = 0.0, hi = 0.0;
    long long count = 0;
    double brier_model = 0.0, brier_shin = 0.0, brier_welo = 0.0;
    double diff_shin = 0.0, diff_welo = 0.0;  // model minus benchmark
};

struct RobustnessInput {
    double istar;
    double p_model, p_shin, p_welo;
    int outcome;
};

/// Bin 0 = rows with zero intransitivity; the rest split into tertiles
/// by score (stable order breaks ties).
std::vector<RobustnessRow> robustness_bins(std::vector<RobustnessInput> rows);

struct BootstrapCi {
    double point = 0.0;
    double lo = 0.0, hi = 0.0;
};

/// Player-cluster bootstrap: each resample draws players with
/// replacement and keeps every match involving any sampled player.
/// `statistic` maps the selected row indices to a scalar.
BootstrapCi cluster_bootstrap_ci(
    std::span<const std::pair<PlayerId, PlayerId>> match_players,
    const std::function<double(const std::vector<size_t>&)>& statistic, int resamples,
    uint64_t seed);

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 1.0;
};

/// Spearman rank correlation with average ranks for ties; p-value from
/// the large-sample t approximation.
SpearmanResult spearman_trend(std::span<const double> x, std::span<const double> y);

/// Regularised incomplete beta function (used for the Student-t tail).
double incomplete_beta(double a, double b, double x);

}  // namespace tenniscast::eval
