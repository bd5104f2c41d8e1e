#include "tenniscast/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "tenniscast/betting.hpp"
#include "tenniscast/csv.hpp"
#include "tenniscast/intransitivity.hpp"
#include "tenniscast/magnet.hpp"
#include "tenniscast/pipeline.hpp"
#include "tenniscast/synthetic.hpp"

namespace tenniscast::selftest {

namespace {

using magnet::CMat;
using magnet::RMat;
using magnet::Rng;

graphs::SurfaceGraph random_graph(Rng& rng, int max_nodes) {
    graphs::SurfaceGraph g;
    g.num_nodes = 2 + static_cast<int>(rng.next_u64() % static_cast<uint64_t>(max_nodes - 1));
    g.in_degree.assign(static_cast<size_t>(g.num_nodes), 0);
    g.out_degree.assign(static_cast<size_t>(g.num_nodes), 0);
    for (PlayerId u = 0; u < g.num_nodes; ++u) {
        for (PlayerId v = u + 1; v < g.num_nodes; ++v) {
            if (rng.uniform() >= 0.25) continue;
            double w = 0.5 + 0.5 * (0.001 + 0.999 * rng.uniform());
            bool forward = rng.uniform() < 0.5;
            g.edges.push_back({forward ? u : v, forward ? v : u, w});
        }
    }
    return g;
}

CheckResult check_laplacian_properties() {
    CheckResult r{"laplacian-properties", true, ""};
    Rng rng(20240601);
    double worst_herm = 0.0, lowest = 0.0, highest = 2.0;
    for (int trial = 0; trial < 500 && r.passed; ++trial) {
        graphs::SurfaceGraph g = random_graph(rng, 50);
        double q = 0.25 * rng.uniform();
        CMat l = magnet::magnetic_laplacian(g, q);

        double herm = (l - l.adjoint()).cwiseAbs().maxCoeff();
        worst_herm = std::max(worst_herm, herm);
        if (herm > 1e-10) {
            r.passed = false;
            r.detail = "Hermiticity violated: " + csv::format_double(herm);
            break;
        }
        Eigen::SelfAdjointEigenSolver<CMat> es(l, Eigen::EigenvaluesOnly);
        double lo = es.eigenvalues().minCoeff();
        double hi = es.eigenvalues().maxCoeff();
        lowest = std::min(lowest, lo);
        highest = std::max(highest, hi);
        if (lo < -1e-8 || hi > 2.0 + 1e-8) {
            r.passed = false;
            r.detail = "spectrum outside [0, 2]: [" + csv::format_double(lo) + ", " +
                       csv::format_double(hi) + "]";
            break;
        }

        // q = 0 must equal the plain symmetric normalised Laplacian,
        // entry for entry.
        CMat l0 = magnet::magnetic_laplacian(g, 0.0);
        const auto n = static_cast<Eigen::Index>(g.num_nodes);
        Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
        for (const auto& e : g.edges) {
            degree(e.from) += 0.5 * e.weight;
            degree(e.to) += 0.5 * e.weight;
        }
        RMat reference = RMat::Identity(n, n);
        for (const auto& e : g.edges) {
            double value = -0.5 * e.weight / std::sqrt(degree(e.from) * degree(e.to));
            reference(e.from, e.to) = value;
            reference(e.to, e.from) = value;
        }
        if (l0.imag().cwiseAbs().maxCoeff() != 0.0 ||
            (l0.real() - reference).cwiseAbs().maxCoeff() != 0.0) {
            r.passed = false;
            r.detail = "q=0 does not reproduce the symmetric normalised Laplacian exactly";
            break;
        }
    }
    if (r.passed)
        r.detail = "500 graphs; worst hermiticity " + csv::format_double(worst_herm) +
                   ", spectrum [" + csv::format_double(lowest) + ", " +
                   csv::format_double(highest) + "]";
    return r;
}

struct GradFixture {
    magnet::ModelState state;
    magnet::SurfaceBundles bundles;
    RMat features;
    std::vector<magnet::EdgeSample> samples;
    magnet::DropoutMasks masks;
};

GradFixture make_grad_fixture() {
    GradFixture f;
    magnet::MagnetHyperparams hyper;
    hyper.cheb_order = 2;
    hyper.layers = 2;
    hyper.hidden = 3;
    hyper.use_activation = true;
    hyper.dropout = 0.3;

    graphs::SurfaceGraph hard;
    hard.num_nodes = 6;
    hard.edges = {{0, 1, 0.7}, {1, 2, 0.6}, {2, 0, 0.55}, {3, 4, 0.8}, {0, 3, 0.66}, {4, 5, 0.9}};
    graphs::SurfaceGraph clay;
    clay.num_nodes = 6;
    clay.edges = {{0, 1, 0.6}, {2, 3, 0.7}, {5, 0, 0.58}};
    graphs::SurfaceGraph grass;
    grass.num_nodes = 6;
    grass.edges = {{1, 3, 0.75}, {4, 2, 0.63}};
    f.bundles[0] = magnet::make_bundle(hard, hyper.q);
    f.bundles[1] = magnet::make_bundle(clay, hyper.q);
    f.bundles[2] = magnet::make_bundle(grass, hyper.q);

    Rng rng(991);
    f.features.resize(6, 5);
    for (Eigen::Index j = 0; j < 5; ++j)
        for (Eigen::Index i = 0; i < 6; ++i) f.features(i, j) = rng.normal();

    f.state = magnet::init_model(hyper, 5, 2718);
    // The zero-initialised head blocks gradient flow into the filters, so
    // the check runs at a generic point.
    for (Eigen::Index i = 0; i < f.state.head_w.size(); ++i)
        f.state.head_w.data()[i] = 0.3 * rng.normal();
    for (Eigen::Index i = 0; i < f.state.head_b.size(); ++i)
        f.state.head_b.data()[i] = 0.1 * rng.normal();

    f.samples = {{Surface::hard, 0, 1, 0},  {Surface::hard, 1, 0, 1}, {Surface::hard, 2, 5, 0},
                 {Surface::clay, 0, 3, 1},  {Surface::clay, 2, 3, 0}, {Surface::grass, 1, 3, 0},
                 {Surface::grass, 4, 2, 1}, {Surface::hard, 3, 4, 0}};
    f.masks = magnet::draw_dropout_masks(f.state, f.bundles, f.samples, 6);
    return f;
}

CheckResult check_gradients() {
    CheckResult r{"gradient-check", true, ""};
    GradFixture f = make_grad_fixture();

    magnet::Gradients grads;
    magnet::loss_and_gradients(f.state, f.bundles, f.features, f.samples, &f.masks, &grads);

    auto params = magnet::parameter_views(f.state);
    auto grad_views = magnet::gradient_views(grads);
    const double eps = 1e-5;
    double worst = 0.0;
    std::string worst_name;
    for (size_t c = 0; c < params.size(); ++c) {
        double diff_sq = 0.0, fd_sq = 0.0, an_sq = 0.0;
        for (size_t i = 0; i < params[c].size; ++i) {
            double saved = params[c].data[i];
            params[c].data[i] = saved + eps;
            double plus = magnet::loss_and_gradients(f.state, f.bundles, f.features, f.samples,
                                                     &f.masks, nullptr);
            params[c].data[i] = saved - eps;
            double minus = magnet::loss_and_gradients(f.state, f.bundles, f.features, f.samples,
                                                      &f.masks, nullptr);
            params[c].data[i] = saved;
            double fd = (plus - minus) / (2.0 * eps);
            double an = grad_views[c].data[i];
            diff_sq += (an - fd) * (an - fd);
            fd_sq += fd * fd;
            an_sq += an * an;
        }
        double rel = std::sqrt(diff_sq) / std::max({std::sqrt(fd_sq), std::sqrt(an_sq), 1e-10});
        if (rel > worst) {
            worst = rel;
            worst_name = params[c].name;
        }
    }
    r.passed = worst <= 1e-4;
    r.detail = "worst relative error " + csv::format_double(worst) + " (" + worst_name + ")";
    return r;
}

CheckResult check_probability_algebra() {
    CheckResult r{"probability-algebra", true, ""};
    magnet::MagnetHyperparams hyper;
    hyper.hidden = 4;
    hyper.layers = 1;
    Rng rng(555);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        magnet::ModelState state =
            magnet::init_model(hyper, 3, 1000 + static_cast<uint64_t>(trial));
        for (Eigen::Index i = 0; i < state.head_w.size(); ++i)
            state.head_w.data()[i] = rng.normal();
        for (Eigen::Index i = 0; i < state.head_b.size(); ++i)
            state.head_b.data()[i] = rng.normal();
        RMat h(4, 2 * hyper.hidden);
        for (Eigen::Index j = 0; j < h.cols(); ++j)
            for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, j) = rng.normal();
        PlayerId u = static_cast<PlayerId>(rng.next_u64() % 4);
        PlayerId v = static_cast<PlayerId>(rng.next_u64() % 4);
        if (u == v) v = static_cast<PlayerId>((v + 1) % 4);
        double sum = magnet::set_win_probability(h, u, v, state) +
                     magnet::set_win_probability(h, v, u, state);
        worst = std::max(worst, std::abs(sum - 1.0));
        if (worst > 1e-12) {
            r.passed = false;
            r.detail = "p(u,v) + p(v,u) deviates by " + csv::format_double(worst);
            return r;
        }
    }

    if (magnet::match_win_probability(0.5, 3) != 0.5 ||
        magnet::match_win_probability(0.5, 5) != 0.5 ||
        magnet::match_win_probability(1.0, 3) != 1.0 ||
        magnet::match_win_probability(1.0, 5) != 1.0 ||
        magnet::match_win_probability(0.0, 3) != 0.0 ||
        magnet::match_win_probability(0.0, 5) != 0.0) {
        r.passed = false;
        r.detail = "best-of conversion fixed points are not exact";
        return r;
    }
    double prev3 = 0.0, prev5 = 0.0;
    for (int i = 1; i < 1000; ++i) {
        double p = static_cast<double>(i) / 1000.0;
        double p3 = magnet::match_win_probability(p, 3);
        double p5 = magnet::match_win_probability(p, 5);
        if (p3 <= prev3 || p5 <= prev5) {
            r.passed = false;
            r.detail = "best-of conversion is not strictly increasing at p=" +
                       csv::format_double(p);
            return r;
        }
        if (p > 0.5 && p5 < p3) {
            r.passed = false;
            r.detail = "longer format does not favour the favourite at p=" +
                       csv::format_double(p);
            return r;
        }
        if (p < 0.5 && p5 > p3) {
            r.passed = false;
            r.detail = "longer format does not punish the underdog at p=" +
                       csv::format_double(p);
            return r;
        }
        prev3 = p3;
        prev5 = p5;
    }
    r.detail = "10000 states, complement sums within " + csv::format_double(worst) +
               "; conversion monotone with exact fixed points";
    return r;
}

CheckResult check_hodge_oracle() {
    CheckResult r{"hodge-oracle", true, ""};
    Rng rng(777);
    double worst_ls = 0.0, worst_recon = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 2 + static_cast<int>(rng.next_u64() % 7);
        RMat a = RMat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double v = 2.0 * rng.normal();
                a(i, j) = v;
                a(j, i) = -v;
            }
        auto parts = intransitivity::hodge_decompose(a);

        // Least-squares oracle: fit potentials to all ordered pairs.
        RMat design(n * n, n);
        Eigen::VectorXd target(n * n);
        design.setZero();
        int row = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                design(row, i) += 1.0;
                design(row, j) -= 1.0;
                target(row) = a(i, j);
                ++row;
            }
        Eigen::VectorXd s = design.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(target);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                worst_ls = std::max(worst_ls,
                                    std::abs(parts.transitive(i, j) - (s(i) - s(j))));
                worst_recon = std::max(
                    worst_recon,
                    std::abs(parts.transitive(i, j) + parts.cyclic(i, j) - a(i, j)));
            }
        // The cyclic part must be divergence-free.
        double div = parts.cyclic.rowwise().mean().cwiseAbs().maxCoeff();
        if (div > 1e-10) {
            r.passed = false;
            r.detail = "cyclic part has divergence " + csv::format_double(div);
            return r;
        }
    }
    if (worst_ls > 1e-8) {
        r.passed = false;
        r.detail = "transitive part deviates from least-squares fit by " +
                   csv::format_double(worst_ls);
        return r;
    }
    if (worst_recon > 1e-12) {
        r.passed = false;
        r.detail = "T + C fails to reconstruct A: " + csv::format_double(worst_recon);
        return r;
    }

    RMat cycle(3, 3);
    cycle << 0, 1, -1, -1, 0, 1, 1, -1, 0;
    double index = intransitivity::intransitivity_index(cycle);
    if (std::abs(index - (1.0 + std::sqrt(6.0))) > 1e-10) {
        r.passed = false;
        r.detail = "perfect 3-cycle index " + csv::format_double(index);
        return r;
    }
    r.detail = "1000 matrices; max LS deviation " + csv::format_double(worst_ls) +
               ", max reconstruction error " + csv::format_double(worst_recon);
    return r;
}

CheckResult check_betting_algebra() {
    CheckResult r{"betting-algebra", true, ""};
    Rng rng(31337);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        double p = 0.05 + 0.9 * rng.uniform();
        double o = 1.05 + 4.0 * rng.uniform();
        // Ternary search of E[log(1 + f(o-1) W - f (1-W))] over f.
        auto expected_log = [&](double f) {
            return p * std::log1p(f * (o - 1.0)) + (1.0 - p) * std::log1p(-f);
        };
        double lo = 0.0, hi = 1.0 - 1e-9;
        for (int it = 0; it < 200; ++it) {
            double m1 = lo + (hi - lo) / 3.0;
            double m2 = hi - (hi - lo) / 3.0;
            if (expected_log(m1) < expected_log(m2))
                lo = m1;
            else
                hi = m2;
        }
        double oracle = 0.5 * (lo + hi);
        worst = std::max(worst, std::abs(oracle - betting::kelly_fraction(p, o)));
    }
    if (worst > 1e-6) {
        r.passed = false;
        r.detail = "Kelly fraction deviates from the log-wealth maximiser by " +
                   csv::format_double(worst);
        return r;
    }

    // Order invariance: permuting rows leaves the simulation bit-identical.
    std::vector<betting::BettingRow> rows;
    for (int i = 0; i < 250; ++i) {
        betting::BettingRow row;
        row.match_id = i;
        row.date = Date::from_ymd(2023, 1, 1).plus_days(static_cast<int>(rng.next_u64() % 200));
        row.prob_a = 0.05 + 0.9 * rng.uniform();
        if (rng.next_u64() % 11 != 0) {
            double book = std::clamp(row.prob_a + 0.1 * rng.normal(), 0.05, 0.95);
            row.odds_a = 1.0 / (book * 1.05);
            row.odds_b = 1.0 / ((1.0 - book) * 1.05);
        }
        row.istar = rng.uniform() * 4.0;
        row.outcome_a = rng.uniform() < row.prob_a ? 1 : 0;
        rows.push_back(row);
    }
    std::vector<betting::BettingRow> shuffled = rows;
    for (size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[static_cast<size_t>(rng.next_u64() % i)]);
    for (betting::Staking staking : {betting::Staking::kelly, betting::Staking::unit}) {
        betting::StrategyConfig strategy{staking, 0.5};
        auto a = betting::simulate(rows, strategy);
        auto b = betting::simulate(shuffled, strategy);
        if (a.staked != b.staked || a.returned != b.returned || a.profit != b.profit ||
            a.roi != b.roi || a.bets.size() != b.bets.size() ||
            a.sharpe.has_value() != b.sharpe.has_value() ||
            (a.sharpe && *a.sharpe != *b.sharpe)) {
            r.passed = false;
            r.detail = "simulation is not order-invariant";
            return r;
        }
    }
    r.detail = "100 Kelly oracle cases within " + csv::format_double(worst) +
               "; permutation leaves ROI bit-identical";
    return r;
}

std::string serialize_rows(const std::vector<pipeline::PredictionRow>& rows) {
    std::ostringstream out;
    for (const auto& r : rows) {
        out << r.match_id << '|' << r.snapshot_index << '|' << r.date.iso() << '|'
            << static_cast<int>(r.surface) << '|' << r.a_id << '|' << r.b_id << '|'
            << r.outcome_a << '|' << csv::format_double(r.model_set_prob_a) << '|'
            << csv::format_double(r.model_prob_a) << '|' << csv::format_double(r.elo_prob_a)
            << '|' << csv::format_double(r.welo_prob_a) << '|'
            << csv::format_double(r.bt_prob_a) << '|'
            << (r.shin_prob_a ? csv::format_double(*r.shin_prob_a) : "") << '|'
            << csv::format_double(r.istar) << '|' << r.common_opponents << '\n';
    }
    return out.str();
}

CheckResult check_causality() {
    CheckResult r{"pipeline-causality", true, ""};
    synthetic::CorpusSpec spec;
    spec.num_players = 20;
    spec.years = 3;
    spec.seed = 42;
    TourData data = synthetic::make_tour_data(spec);

    pipeline::WalkForwardConfig config;
    config.history_start = Date::from_ymd(spec.start_year, 1, 1);
    config.seed = 11;
    config.hyper.hidden = 8;
    config.hyper.initial_epochs = 10;
    config.hyper.retrain_epochs = 4;
    config.hyper.retrain_interval = 10;
    Date predict_start = Date::from_ymd(spec.start_year + 2, 1, 1);
    Date predict_end = Date::from_ymd(spec.start_year + 2, 12, 31);

    auto baseline = pipeline::walk_forward_run(data, config, predict_start, predict_end);
    auto rerun = pipeline::walk_forward_run(data, config, predict_start, predict_end);
    if (serialize_rows(baseline.rows) != serialize_rows(rerun.rows)) {
        r.passed = false;
        r.detail = "identical config and seed did not reproduce the ledger";
        return r;
    }

    // Perturbing the games of a match leaves every prediction made at or
    // before its date bit-identical.
    std::vector<size_t> window_snaps;
    for (size_t i = 0; i < data.snapshots.size(); ++i)
        if (data.snapshots[i].timestamp >= predict_start &&
            data.snapshots[i].timestamp <= predict_end)
            window_snaps.push_back(i);
    for (bool final_snapshot : {true, false}) {
        TourData perturbed = data;
        // Perturb either the last predicted snapshot or one two-thirds of
        // the way through the window, so earlier rows remain comparable.
        size_t snap = final_snapshot ? window_snaps.back()
                                     : window_snaps[window_snaps.size() * 2 / 3];
        size_t target_row = perturbed.snapshots[snap].match_rows.front();
        MatchRecord& victim = perturbed.matches[target_row];
        victim.games_loser += 3;  // changes the games share, not the outcome
        Date cutoff = victim.date;

        auto alt = pipeline::walk_forward_run(perturbed, config, predict_start, predict_end);
        if (alt.rows.size() != baseline.rows.size()) {
            r.passed = false;
            r.detail = "perturbation changed the prediction row count";
            return r;
        }
        std::vector<pipeline::PredictionRow> before_a, before_b;
        for (size_t i = 0; i < baseline.rows.size(); ++i) {
            Date tau = data.snapshots[static_cast<size_t>(baseline.rows[i].snapshot_index)]
                           .timestamp;
            if (tau > cutoff) continue;
            before_a.push_back(baseline.rows[i]);
            before_b.push_back(alt.rows[i]);
        }
        if (before_a.empty()) {
            r.passed = false;
            r.detail = "causality fixture selected no comparable rows";
            return r;
        }
        if (serialize_rows(before_a) != serialize_rows(before_b)) {
            r.passed = false;
            r.detail = final_snapshot
                           ? "future-match perturbation leaked into past predictions"
                           : "mid-run perturbation leaked into earlier predictions";
            return r;
        }
    }
    r.detail = "rerun identical; future perturbations leave past predictions bit-identical";
    return r;
}

}  // namespace

std::vector<CheckResult> run_property_suite() {
    return {
        check_laplacian_properties(), check_gradients(),       check_probability_algebra(),
        check_hodge_oracle(),         check_betting_algebra(), check_causality(),
    };
}

}  // namespace tenniscast::selftest
