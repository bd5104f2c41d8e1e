#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tenniscast/graphs.hpp"
#include "tenniscast/magnet.hpp"
#include "tenniscast/types.hpp"

namespace tenniscast::pipeline {

struct WalkForwardConfig {
    Date history_start = Date::from_ymd(2014, 1, 1);
    Date validation_start = Date::from_ymd(2019, 8, 29);
    Date validation_end = Date::from_ymd(2022, 11, 20);
    Date test_start = Date::from_ymd(2023, 1, 1);
    Date test_end = Date::from_ymd(2025, 6, 8);
    double train_fraction = 0.15;  // most recent share used as labels
    uint64_t seed = 7;
    bool model_enabled = true;     // off: model column degenerates to 0.5
    bool baselines_enabled = true; // off: Elo/BT/Shin columns stay at 0.5
                                   // (used by the intransitivity-only sweep)
    graphs::GraphParams graph_params;
    magnet::MagnetHyperparams hyper;
};

/// One predicted match. Side A is the lower-indexed player, fixed before
/// the outcome is known.
struct PredictionRow {
    int64_t match_id = -1;
    int snapshot_index = -1;
    Tour tour = Tour::men;
    Date date;
    Surface surface = Surface::hard;
    int best_of = 3;
    PlayerId player_a = -1, player_b = -1;
    std::string a_id, b_id;  // external ids for the ledger file
    int outcome_a = 0;
    double model_set_prob_a = 0.5;
    double model_prob_a = 0.5;  // match-level, after best-of conversion
    double elo_prob_a = 0.5;
    double welo_prob_a = 0.5;
    double bt_prob_a = 0.5;
    std::optional<double> shin_prob_a;
    std::optional<double> odds_a, odds_b;
    double istar = 0.0;
    int common_opponents = 0;
};

struct TrainEvent {
    int snapshot_index = -1;       // absolute snapshot index
    int prediction_ordinal = -1;   // 0-based index among predicted snapshots
    int epochs = 0;
    std::vector<double> loss_trace;
};

struct WalkForwardResult {
    std::vector<PredictionRow> rows;
    std::vector<TrainEvent> train_events;
    std::optional<magnet::ModelState> final_state;
};

struct RunHooks {
    /// Called once per predicted snapshot with the full-history graphs
    /// and node features (used by the graph-dump option).
    std::function<void(const graphs::SnapshotGraphs&, const Eigen::MatrixXd&)> on_snapshot;
};

/// Walk-forward sweep over all snapshots whose timestamp falls inside
/// [predict_start, predict_end]: causal graph construction, scheduled
/// (re)training, model + baseline + intransitivity scoring.
WalkForwardResult walk_forward_run(const TourData& data, const WalkForwardConfig& config,
                                   Date predict_start, Date predict_end,
                                   const RunHooks* hooks = nullptr);

/// Indices of trials not dominated in the minimisation of both
/// objectives; equal trials are all kept.
std::vector<size_t> pareto_front(const std::vector<std::array<double, 2>>& objectives);

void write_prediction_ledger(const std::vector<PredictionRow>& rows, const std::string& path);
std::vector<PredictionRow> read_prediction_ledger(const std::string& path);

}  // namespace tenniscast::pipeline
