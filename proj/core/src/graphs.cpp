#include "tenniscast/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tenniscast::graphs {

std::array<std::array<double, kNumSurfaces>, kNumSurfaces> GraphParams::default_alpha() {
    // Row = target surface, column = source surface (hard, clay, grass).
    std::array<std::array<double, kNumSurfaces>, kNumSurfaces> a{};
    auto at = [&](Surface t, Surface s) -> double& {
        return a[static_cast<size_t>(t)][static_cast<size_t>(s)];
    };
    at(Surface::hard, Surface::hard) = 1.0;
    at(Surface::clay, Surface::clay) = 1.0;
    at(Surface::grass, Surface::grass) = 1.0;
    at(Surface::hard, Surface::grass) = 0.37;
    at(Surface::hard, Surface::clay) = 0.01;
    at(Surface::clay, Surface::grass) = 0.09;
    at(Surface::clay, Surface::hard) = 0.07;
    at(Surface::grass, Surface::clay) = 0.05;
    at(Surface::grass, Surface::hard) = 0.45;
    return a;
}

double decay_coefficient(Date tau_n, Date tau_k, double lambda) {
    if (tau_k > tau_n)
        throw std::invalid_argument("decay_coefficient: match date is after the snapshot");
    return std::exp(-lambda * tau_k.years_until(tau_n));
}

void DominanceLedger::add_match(const MatchRecord& m) {
    Entry e;
    e.date = m.date;
    e.surface = m.surface;
    e.tier = m.tier;
    double share = m.winner_games_share();
    e.games_share_low = m.winner < m.loser ? share : 1.0 - share;
    pairs_[pair_key(m.winner, m.loser)].push_back(e);
}

std::optional<DominanceScore> DominanceLedger::score(PlayerId u, PlayerId v, Surface target,
                                                     Date tau_n,
                                                     const GraphParams& params) const {
    auto it = pairs_.find(pair_key(u, v));
    if (it == pairs_.end()) return std::nullopt;
    double num = 0.0, den = 0.0;
    for (const Entry& e : it->second) {
        if (e.date >= tau_n) continue;
        double w = params.alpha_at(target, e.surface) * params.beta(e.tier) *
                   decay_coefficient(tau_n, e.date, params.lambda);
        double g_low = e.games_share_low;
        num += w * (u < v ? g_low : 1.0 - g_low);
        den += w;
    }
    if (den <= 0.0) return std::nullopt;
    return DominanceScore{num / den, den};
}

double DominanceLedger::evidence_weight(PlayerId u, PlayerId v, Surface target, Date tau_n,
                                        const GraphParams& params) const {
    auto s = score(u, v, target, tau_n, params);
    return s ? s->evidence : 0.0;
}

std::optional<double> SurfaceGraph::dominance(PlayerId u, PlayerId v) const {
    auto it = pair_dominance.find(pair_key(u, v));
    if (it == pair_dominance.end()) return std::nullopt;
    return u < v ? it->second : 1.0 - it->second;
}

SnapshotGraphs build_surface_graphs(int snapshot_index, Date tau_n, const DominanceLedger& ledger,
                                    const GraphParams& params, int num_nodes) {
    SnapshotGraphs out;
    out.snapshot_index = snapshot_index;
    out.timestamp = tau_n;
    out.pair_neighbours.assign(static_cast<size_t>(num_nodes), {});

    for (auto& g : out.by_surface) {
        g.snapshot_index = snapshot_index;
        g.num_nodes = num_nodes;
        g.in_degree.assign(static_cast<size_t>(num_nodes), 0);
        g.out_degree.assign(static_cast<size_t>(num_nodes), 0);
    }
    for (int s = 0; s < kNumSurfaces; ++s)
        out.by_surface[static_cast<size_t>(s)].surface = kAllSurfaces[static_cast<size_t>(s)];

    // Deterministic pair order regardless of hash-map layout.
    std::vector<uint64_t> keys;
    keys.reserve(ledger.pairs().size());
    for (const auto& [key, entries] : ledger.pairs()) keys.push_back(key);
    std::sort(keys.begin(), keys.end());

    for (uint64_t key : keys) {
        PlayerId lo = static_cast<PlayerId>(key >> 32);
        PlayerId hi = static_cast<PlayerId>(key & 0xffffffffu);
        bool any = false;
        for (Surface s : kAllSurfaces) {
            auto score = ledger.score(lo, hi, s, tau_n, params);
            if (!score) continue;
            any = true;
            SurfaceGraph& g = out.by_surface[static_cast<size_t>(s)];
            g.pair_dominance.emplace(key, score->dominance);
            if (score->dominance == 0.5) continue;  // no edge on an exact tie
            PlayerId from = score->dominance > 0.5 ? lo : hi;
            PlayerId to = score->dominance > 0.5 ? hi : lo;
            double w = std::max(score->dominance, 1.0 - score->dominance);
            g.edges.push_back({from, to, w});
            ++g.out_degree[static_cast<size_t>(from)];
            ++g.in_degree[static_cast<size_t>(to)];
        }
        if (any) {
            out.pair_neighbours[static_cast<size_t>(lo)].push_back(hi);
            out.pair_neighbours[static_cast<size_t>(hi)].push_back(lo);
        }
    }
    return out;
}

Eigen::MatrixXd node_features(const SnapshotGraphs& graphs,
                              const std::vector<PlayerAttributes>& attributes) {
    const auto n = static_cast<Eigen::Index>(attributes.size());
    Eigen::MatrixXd x(n, kNodeFeatureDim);
    for (Eigen::Index i = 0; i < n; ++i) {
        const PlayerAttributes& a = attributes[static_cast<size_t>(i)];
        // Birth date as a continuous year value.
        double birth_year = 1970.0 + a.birth_date.serial() / 365.25;
        x(i, 0) = a.height_cm;
        x(i, 1) = a.weight_kg;
        x(i, 2) = birth_year;
        x(i, 3) = a.handedness == Handedness::left ? 1.0 : 0.0;
        x(i, 4) = a.handedness == Handedness::right ? 1.0 : 0.0;
        for (int s = 0; s < kNumSurfaces; ++s) {
            const SurfaceGraph& g = graphs.by_surface[static_cast<size_t>(s)];
            x(i, 5 + 2 * s) = g.in_degree[static_cast<size_t>(i)];
            x(i, 6 + 2 * s) = g.out_degree[static_cast<size_t>(i)];
        }
    }
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        double norm = x.col(c).norm();
        if (norm > 0.0) x.col(c) /= norm;
    }
    return x;
}

}  // namespace tenniscast::graphs
