#include "tenniscast/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "tenniscast/baselines.hpp"
#include "tenniscast/csv.hpp"
#include "tenniscast/ingest.hpp"
#include "tenniscast/intransitivity.hpp"

namespace tenniscast::pipeline {

WalkForwardResult walk_forward_run(const TourData& input, const WalkForwardConfig& config,
                                   Date predict_start, Date predict_end,
                                   const RunHooks* hooks) {
    // Work on the history window only; snapshot indices are run-relative.
    TourData data;
    data.tour = input.tour;
    data.player_ids = input.player_ids;
    data.attributes = input.attributes;
    for (const auto& m : input.matches)
        if (m.date >= config.history_start) data.matches.push_back(m);
    data.snapshots = ingest::build_snapshots(data.matches, data.tour);

    const int n = static_cast<int>(data.num_players());
    const auto& params = config.graph_params;

    // Ledger and baselines only ever see matches dated strictly before
    // the snapshot being predicted: the ledger filters at query time, the
    // Elo pointer sweeps in date order, Bradley-Terry windows by date.
    graphs::DominanceLedger ledger;
    for (const auto& m : data.matches) ledger.add_match(m);
    baselines::EloTable elo(data.num_players(), /*weighted=*/false);
    baselines::EloTable welo(data.num_players(), /*weighted=*/true);
    baselines::RollingBradleyTerry bt(data.matches, data.num_players());
    size_t elo_cursor = 0;

    WalkForwardResult result;
    std::optional<magnet::ModelState> model;
    int prediction_ordinal = -1;

    for (const Snapshot& snap : data.snapshots) {
        const Date tau = snap.timestamp;
        if (tau > predict_end) break;
        if (tau < predict_start) continue;

        // Baseline states advance to all matches played before tau.
        while (config.baselines_enabled && elo_cursor < data.matches.size() &&
               data.matches[elo_cursor].date < tau) {
            elo.update(data.matches[elo_cursor]);
            welo.update(data.matches[elo_cursor]);
            ++elo_cursor;
        }
        size_t history_count = 0;
        while (history_count < data.matches.size() && data.matches[history_count].date < tau)
            ++history_count;

        ++prediction_ordinal;
        const bool retrain_due =
            prediction_ordinal == 0 ||
            (config.hyper.retrain_interval > 0 &&
             prediction_ordinal % config.hyper.retrain_interval == 0);

        if (config.model_enabled && retrain_due) {
            if (history_count == 0)
                throw std::runtime_error(
                    "walk_forward_run: no history before the first prediction snapshot");
            // Graphs from the earliest share of history; the most recent
            // matches supply the labelled training edges.
            const size_t graph_count = static_cast<size_t>(
                (1.0 - config.train_fraction) * static_cast<double>(history_count));
            graphs::DominanceLedger train_ledger;
            for (size_t i = 0; i < graph_count; ++i) train_ledger.add_match(data.matches[i]);
            auto train_graphs =
                graphs::build_surface_graphs(snap.index, tau, train_ledger, params, n);
            Eigen::MatrixXd train_x = graphs::node_features(train_graphs, data.attributes);

            std::vector<size_t> label_rows;
            for (size_t i = graph_count; i < history_count; ++i) label_rows.push_back(i);
            auto samples = magnet::build_training_samples(data.matches, label_rows);
            if (!samples.empty()) {
                magnet::SurfaceBundles bundles;
                for (size_t s = 0; s < static_cast<size_t>(kNumSurfaces); ++s)
                    bundles[s] = magnet::make_bundle(
                        train_graphs.by_surface[s], config.hyper.q);
                if (!model)
                    model = magnet::init_model(config.hyper, graphs::kNodeFeatureDim,
                                               config.seed);
                TrainEvent event;
                event.snapshot_index = snap.index;
                event.prediction_ordinal = prediction_ordinal;
                event.epochs = prediction_ordinal == 0 ? config.hyper.initial_epochs
                                                       : config.hyper.retrain_epochs;
                magnet::train(*model, bundles, train_x, samples, event.epochs,
                              &event.loss_trace);
                result.train_events.push_back(std::move(event));
            }
        }

        // Prediction inputs: graphs over the full history before tau.
        auto snapshot_graphs = graphs::build_surface_graphs(snap.index, tau, ledger, params, n);
        Eigen::MatrixXd x = graphs::node_features(snapshot_graphs, data.attributes);
        if (hooks && hooks->on_snapshot) hooks->on_snapshot(snapshot_graphs, x);

        // Embeddings on demand per surface (a snapshot is one round, so
        // normally a single surface is touched).
        std::array<std::optional<magnet::RMat>, kNumSurfaces> embeddings;
        auto embeddings_for = [&](Surface s) -> const magnet::RMat& {
            auto idx = static_cast<size_t>(s);
            if (!embeddings[idx]) {
                auto bundle = magnet::make_bundle(snapshot_graphs.surface(s), config.hyper.q);
                embeddings[idx] = magnet::forward(*model, bundle, x);
            }
            return *embeddings[idx];
        };

        for (size_t row_index : snap.match_rows) {
            const MatchRecord& m = data.matches[row_index];
            PredictionRow row;
            row.match_id = m.match_id;
            row.snapshot_index = snap.index;
            row.tour = m.tour;
            row.date = m.date;
            row.surface = m.surface;
            row.best_of = m.best_of;
            row.player_a = std::min(m.winner, m.loser);
            row.player_b = std::max(m.winner, m.loser);
            row.a_id = data.player_ids[static_cast<size_t>(row.player_a)];
            row.b_id = data.player_ids[static_cast<size_t>(row.player_b)];

            if (config.model_enabled && model) {
                row.model_set_prob_a = magnet::set_win_probability(
                    embeddings_for(m.surface), row.player_a, row.player_b, *model);
                row.model_prob_a =
                    magnet::match_win_probability(row.model_set_prob_a, m.best_of);
            }
            if (m.has_odds()) {
                row.odds_a = m.winner == row.player_a ? m.odds_winner : m.odds_loser;
                row.odds_b = m.winner == row.player_a ? m.odds_loser : m.odds_winner;
            }
            if (config.baselines_enabled) {
                row.elo_prob_a = elo.predict(row.player_a, row.player_b);
                row.welo_prob_a = welo.predict(row.player_a, row.player_b);
                row.bt_prob_a = bt.predict(row.player_a, row.player_b, tau);
                if (row.odds_a)
                    row.shin_prob_a =
                        baselines::shin_probabilities(*row.odds_a, *row.odds_b).prob_a;
            }
            auto score = intransitivity::weighted_intransitivity(
                row.player_a, row.player_b, m.surface, snapshot_graphs, ledger, params);
            row.istar = score.weighted;
            row.common_opponents = score.neighbourhood_size;

            // Outcome lands only after every prediction input is frozen.
            row.outcome_a = m.winner == row.player_a ? 1 : 0;
            result.rows.push_back(std::move(row));
        }
    }

    result.final_state = std::move(model);
    return result;
}

std::vector<size_t> pareto_front(const std::vector<std::array<double, 2>>& objectives) {
    if (objectives.empty()) return {};
    std::vector<size_t> order(objectives.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return std::make_pair(objectives[a][0], objectives[a][1]) <
               std::make_pair(objectives[b][0], objectives[b][1]);
    });

    // Sweep in ascending first objective; a point is dominated iff some
    // strictly better-or-equal point beats it somewhere. Duplicates of a
    // kept point are kept too.
    std::vector<size_t> kept;
    double best_second = std::numeric_limits<double>::infinity();
    std::array<double, 2> last_kept{std::numeric_limits<double>::quiet_NaN(),
                                    std::numeric_limits<double>::quiet_NaN()};
    for (size_t idx : order) {
        const auto& p = objectives[idx];
        if (p[1] < best_second || (p[0] == last_kept[0] && p[1] == last_kept[1])) {
            kept.push_back(idx);
            best_second = std::min(best_second, p[1]);
            last_kept = p;
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

namespace {

const std::vector<std::string> kLedgerHeader = {
    "tour",       "match_id",   "snapshot_index", "date",        "surface",
    "best_of",    "player_a",   "player_b",       "outcome_a",   "odds_a",
    "odds_b",     "set_prob_model_a", "prob_model_a", "prob_elo_a", "prob_welo_a",
    "prob_bt_a",  "prob_shin_a", "istar",         "common_opponents"};

}  // namespace

void write_prediction_ledger(const std::vector<PredictionRow>& rows, const std::string& path) {
    csv::Writer w(path);
    w.write_row(kLedgerHeader);
    for (const auto& r : rows) {
        w.write_row({to_string(r.tour), std::to_string(r.match_id),
                     std::to_string(r.snapshot_index), r.date.iso(), to_string(r.surface),
                     std::to_string(r.best_of), r.a_id, r.b_id, std::to_string(r.outcome_a),
                     r.odds_a ? csv::format_double(*r.odds_a) : "",
                     r.odds_b ? csv::format_double(*r.odds_b) : "",
                     csv::format_double(r.model_set_prob_a), csv::format_double(r.model_prob_a),
                     csv::format_double(r.elo_prob_a), csv::format_double(r.welo_prob_a),
                     csv::format_double(r.bt_prob_a),
                     r.shin_prob_a ? csv::format_double(*r.shin_prob_a) : "",
                     csv::format_double(r.istar), std::to_string(r.common_opponents)});
    }
    w.close();
}

std::vector<PredictionRow> read_prediction_ledger(const std::string& path) {
    csv::Table t = csv::Table::read_file(path);
    std::vector<PredictionRow> rows;
    rows.reserve(t.rows());
    std::unordered_map<std::string, PlayerId> interned;
    auto intern = [&](const std::string& id) {
        return interned.emplace(id, static_cast<PlayerId>(interned.size())).first->second;
    };
    for (size_t i = 0; i < t.rows(); ++i) {
        PredictionRow r;
        auto tour = tour_from_string(t.cell(i, "tour"));
        auto date = Date::parse(t.cell(i, "date"));
        auto surface = surface_from_string(t.cell(i, "surface"));
        if (!tour || !date || !surface)
            throw std::runtime_error(path + ": bad ledger row " + std::to_string(i + 2));
        r.tour = *tour;
        r.date = *date;
        r.surface = *surface;
        r.match_id = csv::to_int(t.cell(i, "match_id")).value_or(-1);
        r.snapshot_index =
            static_cast<int>(csv::to_int(t.cell(i, "snapshot_index")).value_or(-1));
        r.best_of = static_cast<int>(csv::to_int(t.cell(i, "best_of")).value_or(3));
        r.a_id = t.cell(i, "player_a");
        r.b_id = t.cell(i, "player_b");
        r.player_a = intern(r.a_id);
        r.player_b = intern(r.b_id);
        r.outcome_a = static_cast<int>(csv::to_int(t.cell(i, "outcome_a")).value_or(0));
        r.odds_a = csv::to_double(t.cell(i, "odds_a"));
        r.odds_b = csv::to_double(t.cell(i, "odds_b"));
        r.model_set_prob_a = csv::to_double(t.cell(i, "set_prob_model_a")).value_or(0.5);
        r.model_prob_a = csv::to_double(t.cell(i, "prob_model_a")).value_or(0.5);
        r.elo_prob_a = csv::to_double(t.cell(i, "prob_elo_a")).value_or(0.5);
        r.welo_prob_a = csv::to_double(t.cell(i, "prob_welo_a")).value_or(0.5);
        r.bt_prob_a = csv::to_double(t.cell(i, "prob_bt_a")).value_or(0.5);
        r.shin_prob_a = csv::to_double(t.cell(i, "prob_shin_a"));
        r.istar = csv::to_double(t.cell(i, "istar")).value_or(0.0);
        r.common_opponents =
            static_cast<int>(csv::to_int(t.cell(i, "common_opponents")).value_or(0));
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace tenniscast::pipeline
