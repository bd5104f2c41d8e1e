#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tenniscast/betting.hpp"
#include "tenniscast/config.hpp"
#include "tenniscast/csv.hpp"
#include "tenniscast/eval.hpp"
#include "tenniscast/ingest.hpp"
#include "tenniscast/intransitivity.hpp"
#include "tenniscast/pipeline.hpp"
#include "tenniscast/selftest.hpp"

namespace fs = std::filesystem;
using namespace tenniscast;

namespace {

// Exit codes: 0 ok, 2 usage, 3 config, 4 missing input, 5 data error.
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitMissingInput = 4;
constexpr int kExitDataError = 5;

struct MissingInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

config::RunConfig load_config(const std::string& path) {
    config::RunConfig cfg;
    if (!path.empty()) {
        if (!fs::exists(path)) throw ConfigError("config file not found: " + path);
        try {
            cfg = config::RunConfig::load(path);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    cfg.apply_environment();
    return cfg;
}

std::vector<std::string> list_csv_files(const std::string& dir) {
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) return files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

std::string ledger_path(const config::RunConfig& cfg, Tour tour) {
    return cfg.data.out_dir + "/canonical/matches_" + to_string(tour) + ".csv";
}
std::string players_path(const config::RunConfig& cfg, Tour tour) {
    return cfg.data.out_dir + "/canonical/players_" + to_string(tour) + ".csv";
}
std::string predictions_path(const config::RunConfig& cfg, const std::string& window, Tour tour) {
    return cfg.data.out_dir + "/predictions_" + window + "_" + to_string(tour) + ".csv";
}

TourData load_canonical_or_die(const config::RunConfig& cfg, Tour tour) {
    std::string ledger = ledger_path(cfg, tour);
    std::string players = players_path(cfg, tour);
    if (!fs::exists(ledger))
        throw MissingInput("canonical match ledger not found: " + ledger +
                           " (run `tenniscast ingest` first)");
    if (!fs::exists(players))
        throw MissingInput("canonical player table not found: " + players +
                           " (run `tenniscast ingest` first)");
    return ingest::read_canonical(ledger, players, tour);
}

std::vector<Tour> tours_from_flag(const std::string& tour_flag) {
    if (tour_flag == "men") return {Tour::men};
    if (tour_flag == "women") return {Tour::women};
    return {Tour::men, Tour::women};
}

std::pair<Date, Date> window_dates(const config::RunConfig& cfg, const std::string& window) {
    if (window == "validation")
        return {cfg.walkforward.validation_start, cfg.walkforward.validation_end};
    return {cfg.walkforward.test_start, cfg.walkforward.test_end};
}

std::string fmt(double v) { return csv::format_double(v); }

// ---------------------------------------------------------------------- ingest

int cmd_ingest(const config::RunConfig& cfg) {
    fs::create_directories(cfg.data.out_dir + "/canonical");

    if (!fs::exists(cfg.data.attributes))
        throw MissingInput("attribute file not found: " + cfg.data.attributes);
    auto attributes = ingest::read_attribute_csv(cfg.data.attributes);
    std::vector<config::ManifestInput> manifest_inputs{
        {cfg.data.attributes, config::fnv1a64_file(cfg.data.attributes)}};

    for (Tour tour : {Tour::men, Tour::women}) {
        std::string dir = cfg.data.raw_dir + "/" + to_string(tour);
        auto files = list_csv_files(dir);
        if (files.empty())
            throw MissingInput("no raw match files found under " + dir +
                               " (expected <raw_dir>/" + to_string(tour) + "/*.csv)");
        for (const auto& f : files) manifest_inputs.push_back({f, config::fnv1a64_file(f)});

        auto result = ingest::build_tour_data(files, tour, attributes);
        ingest::write_match_ledger(result.data, ledger_path(cfg, tour));
        ingest::write_player_table(result.data, players_path(cfg, tour));

        std::string unmatched =
            cfg.data.out_dir + "/canonical/unmatched_names_" + to_string(tour) + ".csv";
        csv::Writer w(unmatched);
        w.write_row({"name"});
        for (const auto& n : result.unmatched_names) w.write_row({n});
        w.close();

        std::printf(
            "%s: %lld rows read, %lld kept, %lld incomplete dropped, %lld bad scores, "
            "%lld odds discarded, %zu players (%zu without attribute rows)\n",
            to_string(tour), result.stats.rows_total, result.stats.rows_kept,
            result.stats.dropped_incomplete, result.stats.dropped_bad_scores,
            result.stats.dropped_odds, result.data.num_players(),
            result.unmatched_names.size());
        std::printf("%s: ledger %s (%zu matches, %zu snapshots)\n", to_string(tour),
                    ledger_path(cfg, tour).c_str(), result.data.matches.size(),
                    result.data.snapshots.size());
    }
    config::write_manifest(cfg.data.out_dir + "/manifest_ingest.json", "ingest", cfg,
                           manifest_inputs);
    return 0;
}

// ------------------------------------------------------------------ walkforward

int cmd_walkforward(const config::RunConfig& cfg, const std::string& tour_flag,
                    const std::string& window, const std::string& dump_graphs_dir) {
    auto [predict_start, predict_end] = window_dates(cfg, window);
    fs::create_directories(cfg.data.out_dir + "/loss_traces");
    fs::create_directories(cfg.data.out_dir + "/checkpoints");

    std::vector<config::ManifestInput> manifest_inputs;
    for (Tour tour : tours_from_flag(tour_flag)) {
        TourData data = load_canonical_or_die(cfg, tour);
        manifest_inputs.push_back(
            {ledger_path(cfg, tour), config::fnv1a64_file(ledger_path(cfg, tour))});
        manifest_inputs.push_back(
            {players_path(cfg, tour), config::fnv1a64_file(players_path(cfg, tour))});

        pipeline::RunHooks hooks;
        if (!dump_graphs_dir.empty()) {
            fs::create_directories(dump_graphs_dir);
            hooks.on_snapshot = [&dump_graphs_dir, tour](const graphs::SnapshotGraphs& g,
                                                         const Eigen::MatrixXd& x) {
                char stem[64];
                std::snprintf(stem, sizeof stem, "/%s_snap_%05d", to_string(tour),
                              g.snapshot_index);
                csv::Writer edges(dump_graphs_dir + stem + "_edges.csv");
                edges.write_row({"from", "to", "surface", "weight"});
                for (const auto& sg : g.by_surface)
                    for (const auto& e : sg.edges)
                        edges.write_row({std::to_string(e.from), std::to_string(e.to),
                                         to_string(sg.surface), fmt(e.weight)});
                edges.close();
                csv::Writer feats(dump_graphs_dir + stem + "_features.csv");
                std::vector<std::string> row;
                for (Eigen::Index i = 0; i < x.rows(); ++i) {
                    row.clear();
                    row.push_back(std::to_string(i));
                    for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back(fmt(x(i, j)));
                    feats.write_row(row);
                }
                feats.close();
            };
        }

        auto result = pipeline::walk_forward_run(data, cfg.walkforward, predict_start,
                                                 predict_end,
                                                 dump_graphs_dir.empty() ? nullptr : &hooks);
        std::string out = predictions_path(cfg, window, tour);
        pipeline::write_prediction_ledger(result.rows, out);

        for (const auto& event : result.train_events) {
            char name[512];
            std::snprintf(name, sizeof name, "%s/loss_traces/%s_%s_snap%05d.csv",
                          cfg.data.out_dir.c_str(), window.c_str(), to_string(tour),
                          event.snapshot_index);
            csv::Writer w(name);
            w.write_row({"epoch", "loss"});
            for (size_t e = 0; e < event.loss_trace.size(); ++e)
                w.write_row({std::to_string(e), fmt(event.loss_trace[e])});
            w.close();
        }
        if (result.final_state) {
            std::string ckpt = cfg.data.out_dir + "/checkpoints/model_" + window + "_" +
                               to_string(tour) + ".ckpt";
            magnet::save_checkpoint(*result.final_state, ckpt);
        }
        std::printf("%s/%s: %zu predictions, %zu training runs -> %s\n", to_string(tour),
                    window.c_str(), result.rows.size(), result.train_events.size(),
                    out.c_str());
    }
    config::write_manifest(cfg.data.out_dir + "/manifest_walkforward_" + window + ".json",
                           "walkforward --window " + window, cfg, manifest_inputs);
    return 0;
}

// --------------------------------------------------------------------- evaluate

struct LedgerSlice {
    std::vector<double> model, elo, welo, bt;
    std::vector<double> shin;  // aligned with shin_outcomes
    std::vector<int> outcomes, shin_outcomes;
};

LedgerSlice slice(const std::vector<pipeline::PredictionRow>& rows,
                  const std::function<bool(const pipeline::PredictionRow&)>& keep) {
    LedgerSlice s;
    for (const auto& r : rows) {
        if (!keep(r)) continue;
        s.model.push_back(r.model_prob_a);
        s.elo.push_back(r.elo_prob_a);
        s.welo.push_back(r.welo_prob_a);
        s.bt.push_back(r.bt_prob_a);
        s.outcomes.push_back(r.outcome_a);
        if (r.shin_prob_a) {
            s.shin.push_back(*r.shin_prob_a);
            s.shin_outcomes.push_back(r.outcome_a);
        }
    }
    return s;
}

int cmd_evaluate(const config::RunConfig& cfg, const std::vector<std::string>& prediction_files,
                 bool with_bootstrap) {
    std::vector<pipeline::PredictionRow> rows;
    std::vector<config::ManifestInput> manifest_inputs;
    for (const auto& f : prediction_files) {
        if (!fs::exists(f)) throw MissingInput("prediction ledger not found: " + f);
        auto part = pipeline::read_prediction_ledger(f);
        rows.insert(rows.end(), part.begin(), part.end());
        manifest_inputs.push_back({f, config::fnv1a64_file(f)});
    }
    if (rows.empty()) throw MissingInput("prediction ledgers are empty");
    fs::create_directories(cfg.data.out_dir);

    // Accuracy/Brier per tour x surface plus aggregate rows.
    csv::Writer summary(cfg.data.out_dir + "/metrics_summary.csv");
    summary.write_row({"tour", "surface", "count", "acc_model", "brier_model", "acc_elo",
                       "brier_elo", "acc_welo", "brier_welo", "acc_bt", "brier_bt",
                       "count_shin", "acc_shin", "brier_shin"});
    auto emit = [&](const std::string& tour_label, const std::string& surface_label,
                    const std::function<bool(const pipeline::PredictionRow&)>& keep) {
        LedgerSlice s = slice(rows, keep);
        if (s.outcomes.empty()) return;
        std::vector<std::string> out{tour_label, surface_label,
                                     std::to_string(s.outcomes.size())};
        for (auto* probs : {&s.model, &s.elo, &s.welo, &s.bt}) {
            out.push_back(fmt(eval::accuracy(*probs, s.outcomes)));
            out.push_back(fmt(eval::brier(*probs, s.outcomes)));
        }
        out.push_back(std::to_string(s.shin_outcomes.size()));
        if (!s.shin_outcomes.empty()) {
            out.push_back(fmt(eval::accuracy(s.shin, s.shin_outcomes)));
            out.push_back(fmt(eval::brier(s.shin, s.shin_outcomes)));
        } else {
            out.push_back("");
            out.push_back("");
        }
        summary.write_row(out);
    };
    for (Tour tour : {Tour::men, Tour::women}) {
        for (Surface surface : kAllSurfaces)
            emit(to_string(tour), to_string(surface), [&](const pipeline::PredictionRow& r) {
                return r.tour == tour && r.surface == surface;
            });
        emit(to_string(tour), "all",
             [&](const pipeline::PredictionRow& r) { return r.tour == tour; });
    }
    emit("both", "all", [](const pipeline::PredictionRow&) { return true; });
    summary.close();

    // Calibration plot data per tour and combined.
    auto write_calibration = [&](const std::string& label,
                                 const std::function<bool(const pipeline::PredictionRow&)>&
                                     keep) {
        LedgerSlice s = slice(rows, keep);
        if (s.outcomes.empty()) return;
        auto bins = eval::calibration_curve(s.model, s.outcomes);
        csv::Writer w(cfg.data.out_dir + "/calibration_" + label + ".csv");
        w.write_row({"lo", "hi", "count", "mean_predicted", "observed_frequency"});
        for (const auto& b : bins)
            w.write_row({fmt(b.lo), fmt(b.hi), std::to_string(b.count), fmt(b.mean_predicted),
                         fmt(b.observed_frequency)});
        w.close();
    };
    write_calibration("men",
                      [](const pipeline::PredictionRow& r) { return r.tour == Tour::men; });
    write_calibration("women",
                      [](const pipeline::PredictionRow& r) { return r.tour == Tour::women; });
    write_calibration("both", [](const pipeline::PredictionRow&) { return true; });

    // Intransitivity-stratified robustness (rows with bookmaker odds only,
    // since the comparison needs the de-margined benchmark).
    std::vector<eval::RobustnessInput> robust;
    std::vector<std::pair<PlayerId, PlayerId>> robust_players;
    std::vector<double> istar_values, brier_gap;
    for (const auto& r : rows) {
        if (!r.shin_prob_a) continue;
        robust.push_back({r.istar, r.model_prob_a, *r.shin_prob_a, r.welo_prob_a, r.outcome_a});
        robust_players.emplace_back(r.player_a, r.player_b);
        istar_values.push_back(r.istar);
        auto sq = [&](double p) { return (p - r.outcome_a) * (p - r.outcome_a); };
        brier_gap.push_back(sq(r.model_prob_a) - sq(*r.shin_prob_a));
    }
    if (robust.size() >= 10) {
        auto bins = eval::robustness_bins(robust);
        csv::Writer w(cfg.data.out_dir + "/robustness_bins.csv");
        w.write_row({"bin", "istar_lo", "istar_hi", "count", "brier_model", "brier_shin",
                     "brier_welo", "model_minus_shin", "model_minus_welo"});
        for (const auto& b : bins)
            w.write_row({std::to_string(b.bin), fmt(b.lo), fmt(b.hi), std::to_string(b.count),
                         fmt(b.brier_model), fmt(b.brier_shin), fmt(b.brier_welo),
                         fmt(b.diff_shin), fmt(b.diff_welo)});
        w.close();

        auto trend = eval::spearman_trend(istar_values, brier_gap);
        csv::Writer stats(cfg.data.out_dir + "/robustness_stats.csv");
        stats.write_row({"statistic", "value"});
        stats.write_row({"spearman_rho_istar_vs_model_minus_shin", fmt(trend.rho)});
        stats.write_row({"spearman_p_value", fmt(trend.p_value)});
        if (with_bootstrap) {
            // Player-cluster CI for the overall model-minus-Shin Brier gap.
            auto statistic = [&](const std::vector<size_t>& idx) {
                double sum = 0.0;
                for (size_t i : idx) sum += brier_gap[i];
                return idx.empty() ? 0.0 : sum / static_cast<double>(idx.size());
            };
            auto ci = eval::cluster_bootstrap_ci(robust_players, statistic,
                                                 cfg.eval.bootstrap_resamples,
                                                 cfg.eval.bootstrap_seed);
            stats.write_row({"model_minus_shin_mean", fmt(ci.point)});
            stats.write_row({"model_minus_shin_ci_lo", fmt(ci.lo)});
            stats.write_row({"model_minus_shin_ci_hi", fmt(ci.hi)});
        }
        stats.close();
        std::printf("robustness: %zu rows with odds, spearman rho=%s p=%s\n", robust.size(),
                    fmt(trend.rho).c_str(), fmt(trend.p_value).c_str());
    }

    config::write_manifest(cfg.data.out_dir + "/manifest_evaluate.json", "evaluate", cfg,
                           manifest_inputs);
    std::printf("evaluate: %zu rows -> %s/metrics_summary.csv\n", rows.size(),
                cfg.data.out_dir.c_str());
    return 0;
}

// --------------------------------------------------------------- intransitivity

int cmd_intransitivity(const config::RunConfig& cfg, const std::string& tour_flag,
                       const std::string& window) {
    auto [predict_start, predict_end] = window_dates(cfg, window);
    fs::create_directories(cfg.data.out_dir);

    struct Summary {
        long long n = 0;
        double sum = 0.0;
    };
    std::map<std::pair<std::string, std::string>, Summary> by_surface;  // (tour, surface)
    std::map<std::string, Summary> by_tour;
    std::vector<config::ManifestInput> manifest_inputs;

    for (Tour tour : tours_from_flag(tour_flag)) {
        TourData data = load_canonical_or_die(cfg, tour);
        manifest_inputs.push_back(
            {ledger_path(cfg, tour), config::fnv1a64_file(ledger_path(cfg, tour))});

        pipeline::WalkForwardConfig wf = cfg.walkforward;
        wf.model_enabled = false;
        wf.baselines_enabled = false;
        auto result = pipeline::walk_forward_run(data, wf, predict_start, predict_end);

        csv::Writer w(cfg.data.out_dir + "/istar_" + window + "_" + to_string(tour) + ".csv");
        w.write_row({"match_id", "date", "surface", "istar", "common_opponents"});
        for (const auto& r : result.rows) {
            w.write_row({std::to_string(r.match_id), r.date.iso(), to_string(r.surface),
                         fmt(r.istar), std::to_string(r.common_opponents)});
            if (r.istar > 0.0) {  // summary covers matchups with prior head-to-head
                auto& cell = by_surface[{to_string(tour), to_string(r.surface)}];
                ++cell.n;
                cell.sum += r.istar;
                auto& trow = by_tour[to_string(tour)];
                ++trow.n;
                trow.sum += r.istar;
            }
        }
        w.close();
        std::printf("%s/%s: %zu matches scored\n", to_string(tour), window.c_str(),
                    result.rows.size());
    }

    csv::Writer s(cfg.data.out_dir + "/istar_summary_" + window + ".csv");
    s.write_row({"tour", "surface", "count_nonzero", "mean_istar"});
    for (const auto& [key, cell] : by_surface)
        s.write_row({key.first, key.second, std::to_string(cell.n),
                     fmt(cell.sum / static_cast<double>(cell.n))});
    for (const auto& [tour, cell] : by_tour)
        s.write_row({tour, "all", std::to_string(cell.n),
                     fmt(cell.sum / static_cast<double>(cell.n))});
    if (by_tour.count("men") && by_tour.count("women")) {
        double men = by_tour["men"].sum / static_cast<double>(by_tour["men"].n);
        double women = by_tour["women"].sum / static_cast<double>(by_tour["women"].n);
        s.write_row({"ratio_women_over_men", "all", "", fmt(women / men)});
    }
    s.close();
    config::write_manifest(cfg.data.out_dir + "/manifest_intransitivity_" + window + ".json",
                           "intransitivity --window " + window, cfg, manifest_inputs);
    return 0;
}

// -------------------------------------------------------------------------- bet

betting::BettingRow to_betting_row(const pipeline::PredictionRow& r, bool use_welo) {
    betting::BettingRow b;
    b.match_id = r.match_id;
    b.date = r.date;
    b.prob_a = use_welo ? r.welo_prob_a : r.model_prob_a;
    b.odds_a = r.odds_a;
    b.odds_b = r.odds_b;
    b.istar = r.istar;
    b.outcome_a = r.outcome_a;
    return b;
}

int cmd_bet(const config::RunConfig& cfg, const std::vector<std::string>& test_files,
            const std::vector<std::string>& validation_files) {
    std::vector<config::ManifestInput> manifest_inputs;
    auto load = [&](const std::vector<std::string>& files) {
        std::vector<pipeline::PredictionRow> rows;
        for (const auto& f : files) {
            if (!fs::exists(f)) throw MissingInput("prediction ledger not found: " + f);
            auto part = pipeline::read_prediction_ledger(f);
            rows.insert(rows.end(), part.begin(), part.end());
            manifest_inputs.push_back({f, config::fnv1a64_file(f)});
        }
        return rows;
    };
    auto test_rows = load(test_files);
    if (test_rows.empty()) throw MissingInput("no test-period prediction rows");
    fs::create_directories(cfg.data.out_dir);

    std::vector<betting::BettingRow> test_model, test_welo;
    for (const auto& r : test_rows) {
        test_model.push_back(to_betting_row(r, false));
        test_welo.push_back(to_betting_row(r, true));
    }

    // Threshold: either fixed by config/flag or searched on validation.
    double gamma = 0.0;
    if (cfg.betting.gamma) {
        gamma = *cfg.betting.gamma;
        std::printf("bet: using configured gamma=%s\n", fmt(gamma).c_str());
    } else {
        auto validation_rows = load(validation_files);
        if (validation_rows.empty())
            throw MissingInput(
                "no validation prediction ledger given; pass --validation or set "
                "[betting] gamma in the config");
        std::vector<betting::BettingRow> val_model;
        for (const auto& r : validation_rows) val_model.push_back(to_betting_row(r, false));
        auto search = betting::threshold_search(val_model);
        gamma = search.best_gamma;
        csv::Writer w(cfg.data.out_dir + "/threshold_search_validation.csv");
        w.write_row({"gamma", "kelly_roi", "unit_roi", "kelly_bets", "unit_bets"});
        for (const auto& p : search.grid)
            w.write_row({fmt(p.gamma), fmt(p.kelly_roi), fmt(p.unit_roi),
                         std::to_string(p.kelly_bets), std::to_string(p.unit_bets)});
        w.close();
        std::printf("bet: searched gamma=%s on the validation ledger\n", fmt(gamma).c_str());
    }

    // Threshold sweep on the test period (plot data).
    {
        auto sweep = betting::threshold_search(test_model);
        csv::Writer w(cfg.data.out_dir + "/roi_by_threshold.csv");
        w.write_row({"gamma", "kelly_roi", "unit_roi", "kelly_bets", "unit_bets"});
        for (const auto& p : sweep.grid)
            w.write_row({fmt(p.gamma), fmt(p.kelly_roi), fmt(p.unit_roi),
                         std::to_string(p.kelly_bets), std::to_string(p.unit_bets)});
        w.close();
    }

    csv::Writer report(cfg.data.out_dir + "/betting_report.csv");
    report.write_row({"prob_source", "gamma", "staking", "n_bets", "staked", "returned",
                      "profit", "roi_pct", "sharpe", "p_bs", "skipped_no_odds"});
    for (bool use_welo : {false, true}) {
        const auto& rows = use_welo ? test_welo : test_model;
        for (std::optional<double> g :
             {std::optional<double>(gamma), std::optional<double>()}) {
            for (betting::Staking staking : {betting::Staking::kelly, betting::Staking::unit}) {
                betting::StrategyConfig strategy{staking, g};
                auto sim = betting::simulate(rows, strategy);
                double p_bs = betting::significance_mc(sim, rows, staking,
                                                       cfg.betting.mc_trials,
                                                       cfg.betting.mc_seed);
                report.write_row(
                    {use_welo ? "welo" : "model", g ? fmt(*g) : "",
                     staking == betting::Staking::kelly ? "kelly" : "unit",
                     std::to_string(sim.bets.size()), fmt(sim.staked), fmt(sim.returned),
                     fmt(sim.profit), fmt(100.0 * sim.roi),
                     sim.sharpe ? fmt(*sim.sharpe) : "undefined", fmt(p_bs),
                     std::to_string(sim.skipped_no_odds)});

                // Bet ledger for the model rows at the chosen threshold.
                if (!use_welo && g) {
                    std::string name = cfg.data.out_dir + "/bets_" +
                                       (staking == betting::Staking::kelly ? "kelly" : "unit") +
                                       ".csv";
                    csv::Writer bets(name);
                    bets.write_row({"match_id", "date", "side", "stake", "odds", "prob",
                                    "istar", "payout", "profit"});
                    for (const auto& b : sim.bets)
                        bets.write_row({std::to_string(b.match_id), b.date.iso(),
                                        b.side == 0 ? "a" : "b", fmt(b.stake), fmt(b.odds),
                                        fmt(b.prob), fmt(b.istar), fmt(b.payout),
                                        fmt(b.profit)});
                    bets.close();
                    std::printf("bet: %s gamma=%s n=%zu roi=%.2f%% p_bs=%s\n",
                                staking == betting::Staking::kelly ? "kelly" : "unit",
                                fmt(gamma).c_str(), sim.bets.size(), 100.0 * sim.roi,
                                fmt(p_bs).c_str());
                }
            }
        }
    }
    report.close();
    config::write_manifest(cfg.data.out_dir + "/manifest_bet.json", "bet", cfg,
                           manifest_inputs);
    return 0;
}

// ----------------------------------------------------------------------- pareto

int cmd_pareto(const std::string& trials_path, const std::string& out_path) {
    if (!fs::exists(trials_path)) throw MissingInput("trials file not found: " + trials_path);
    csv::Table t = csv::Table::read_file(trials_path);
    int col_men = t.column("brier_men");
    int col_women = t.column("brier_women");
    if (col_men < 0 || col_women < 0)
        throw std::runtime_error(trials_path + ": needs brier_men and brier_women columns");
    std::vector<std::array<double, 2>> objectives;
    for (size_t i = 0; i < t.rows(); ++i) {
        auto m = csv::to_double(t.cell(i, col_men));
        auto w = csv::to_double(t.cell(i, col_women));
        if (!m || !w)
            throw std::runtime_error(trials_path + ": non-numeric objective at row " +
                                     std::to_string(i + 2));
        objectives.push_back({*m, *w});
    }
    auto front = pipeline::pareto_front(objectives);

    csv::Writer w(out_path);
    w.write_row(t.header());
    for (size_t idx : front) {
        std::vector<std::string> row;
        for (size_t c = 0; c < t.columns(); ++c)
            row.push_back(t.cell(idx, static_cast<int>(c)));
        w.write_row(row);
    }
    w.close();
    std::printf("pareto: %zu of %zu trials on the front -> %s\n", front.size(), t.rows(),
                out_path.c_str());
    return 0;
}

// --------------------------------------------------------------------- selftest

int cmd_selftest() {
    auto results = selftest::run_property_suite();
    bool all = true;
    for (const auto& r : results) {
        std::printf("%-24s %s  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                    r.detail.c_str());
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal dominance-graph tennis forecasting and backtesting"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "INI configuration file")
        ->envname("TENNISCAST_CONFIG");

    std::string out_dir_flag, raw_dir_flag, attributes_flag;
    app.add_option("--out", out_dir_flag, "override [data] out_dir");
    app.add_option("--raw", raw_dir_flag, "override [data] raw_dir");
    app.add_option("--attributes", attributes_flag, "override [data] attributes");

    auto* ingest_cmd = app.add_subcommand("ingest", "raw tennis-data CSVs -> canonical ledger");

    auto* wf_cmd = app.add_subcommand("walkforward", "canonical ledger -> prediction ledger");
    std::string tour_flag = "both", window_flag = "test", dump_graphs;
    bool skip_model = false;
    uint64_t seed_flag = 0;
    wf_cmd->add_option("--tour", tour_flag, "men, women, or both")
        ->check(CLI::IsMember({"men", "women", "both"}));
    wf_cmd->add_option("--window", window_flag, "validation or test")
        ->check(CLI::IsMember({"validation", "test"}));
    wf_cmd->add_flag("--skip-model", skip_model, "baselines and intransitivity only");
    wf_cmd->add_option("--dump-graphs", dump_graphs, "directory for per-snapshot graph dumps");
    auto* seed_opt = wf_cmd->add_option("--seed", seed_flag, "override [walkforward] seed");

    auto* eval_cmd = app.add_subcommand("evaluate", "prediction ledger -> metric reports");
    std::vector<std::string> eval_predictions;
    bool with_bootstrap = false;
    eval_cmd->add_option("--predictions", eval_predictions,
                         "prediction ledger file(s); default: test-window ledgers in out_dir");
    eval_cmd->add_flag("--bootstrap", with_bootstrap, "player-cluster bootstrap CIs");

    auto* intr_cmd =
        app.add_subcommand("intransitivity", "intransitivity scores + distribution summary");
    std::string intr_tour = "both", intr_window = "validation";
    intr_cmd->add_option("--tour", intr_tour)->check(CLI::IsMember({"men", "women", "both"}));
    intr_cmd->add_option("--window", intr_window)
        ->check(CLI::IsMember({"validation", "test"}));

    auto* bet_cmd = app.add_subcommand("bet", "betting simulation + significance test");
    std::vector<std::string> bet_test, bet_validation;
    double gamma_flag = -1.0;
    std::string staking_flag;
    bet_cmd->add_option("--test", bet_test,
                        "test-period prediction ledger(s); default: out_dir ledgers");
    bet_cmd->add_option("--validation", bet_validation,
                        "validation ledgers for the threshold search");
    bet_cmd->add_option("--gamma", gamma_flag, "fixed intransitivity threshold");
    bet_cmd->add_option("--staking", staking_flag, "kelly or unit (report covers both)")
        ->check(CLI::IsMember({"kelly", "unit"}));

    auto* pareto_cmd = app.add_subcommand("pareto", "tuning trials CSV -> Pareto front");
    std::string trials_path, pareto_out = "pareto_front.csv";
    pareto_cmd->add_option("--trials", trials_path, "CSV with brier_men, brier_women columns")
        ->required();
    pareto_cmd->add_option("--out", pareto_out, "output CSV");

    auto* selftest_cmd =
        app.add_subcommand("selftest", "offline property suites on bundled fixtures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        config::RunConfig cfg = load_config(config_path);
        if (!out_dir_flag.empty()) cfg.data.out_dir = out_dir_flag;
        if (!raw_dir_flag.empty()) cfg.data.raw_dir = raw_dir_flag;
        if (!attributes_flag.empty()) cfg.data.attributes = attributes_flag;

        if (ingest_cmd->parsed()) return cmd_ingest(cfg);
        if (wf_cmd->parsed()) {
            if (skip_model) cfg.walkforward.model_enabled = false;
            if (seed_opt->count() > 0) cfg.walkforward.seed = seed_flag;
            return cmd_walkforward(cfg, tour_flag, window_flag, dump_graphs);
        }
        if (eval_cmd->parsed()) {
            if (eval_predictions.empty())
                for (Tour t : {Tour::men, Tour::women}) {
                    std::string p = predictions_path(cfg, "test", t);
                    if (fs::exists(p)) eval_predictions.push_back(p);
                }
            if (eval_predictions.empty())
                throw MissingInput("no prediction ledgers; expected " +
                                   predictions_path(cfg, "test", Tour::men) +
                                   " or --predictions");
            return cmd_evaluate(cfg, eval_predictions, with_bootstrap);
        }
        if (intr_cmd->parsed()) return cmd_intransitivity(cfg, intr_tour, intr_window);
        if (bet_cmd->parsed()) {
            if (gamma_flag >= 0.0) cfg.betting.gamma = gamma_flag;
            if (staking_flag == "kelly") cfg.betting.staking = betting::Staking::kelly;
            if (staking_flag == "unit") cfg.betting.staking = betting::Staking::unit;
            if (bet_test.empty())
                for (Tour t : {Tour::men, Tour::women}) {
                    std::string p = predictions_path(cfg, "test", t);
                    if (fs::exists(p)) bet_test.push_back(p);
                }
            if (bet_test.empty())
                throw MissingInput("no test prediction ledgers; expected " +
                                   predictions_path(cfg, "test", Tour::men) + " or --test");
            if (bet_validation.empty() && !cfg.betting.gamma)
                for (Tour t : {Tour::men, Tour::women}) {
                    std::string p = predictions_path(cfg, "validation", t);
                    if (fs::exists(p)) bet_validation.push_back(p);
                }
            return cmd_bet(cfg, bet_test, bet_validation);
        }
        if (pareto_cmd->parsed()) return cmd_pareto(trials_path, pareto_out);
        if (selftest_cmd->parsed()) return cmd_selftest();
    } catch (const MissingInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMissingInput;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const ingest::IngestError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDataError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDataError;
    }
    return kExitUsage;
}
