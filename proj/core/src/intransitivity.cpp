#include "tenniscast/intransitivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tenniscast::intransitivity {

std::vector<PlayerId> common_opponents(PlayerId u, PlayerId v,
                                       const graphs::SnapshotGraphs& graphs) {
    const auto& nu = graphs.pair_neighbours[static_cast<size_t>(u)];
    const auto& nv = graphs.pair_neighbours[static_cast<size_t>(v)];
    std::vector<PlayerId> out;
    // Neighbour lists are built in ascending pair order.
    std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(out));
    std::erase(out, u);
    std::erase(out, v);
    return out;
}

AdvantageMatrix advantage_matrix(const std::vector<PlayerId>& nodes,
                                 const graphs::SurfaceGraph& graph, double clamp) {
    AdvantageMatrix m;
    m.nodes = nodes;
    const auto n = static_cast<Eigen::Index>(nodes.size());
    m.advantages = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            auto d = graph.dominance(nodes[static_cast<size_t>(i)],
                                     nodes[static_cast<size_t>(j)]);
            if (!d) continue;
            double w = std::clamp(*d, clamp, 1.0 - clamp);
            double adv = std::log(w / (1.0 - w));
            m.advantages(i, j) = adv;
            m.advantages(j, i) = -adv;
        }
    }
    return m;
}

HodgeParts hodge_decompose(const Eigen::MatrixXd& antisymmetric) {
    const Eigen::Index n = antisymmetric.rows();
    if (n < 2) throw std::invalid_argument("hodge_decompose: need at least 2 nodes");
    HodgeParts parts;
    parts.potential = antisymmetric.rowwise().mean();
    parts.transitive.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            parts.transitive(i, j) = parts.potential(i) - parts.potential(j);
    parts.cyclic = antisymmetric - parts.transitive;
    return parts;
}

double intransitivity_index(const Eigen::MatrixXd& antisymmetric) {
    HodgeParts parts = hodge_decompose(antisymmetric);
    return (1.0 + parts.cyclic.norm()) / (1.0 + parts.transitive.norm());
}

IntransitivityScore weighted_intransitivity(PlayerId u, PlayerId v, Surface surface,
                                            const graphs::SnapshotGraphs& snapshot_graphs,
                                            const graphs::DominanceLedger& ledger,
                                            const graphs::GraphParams& params) {
    IntransitivityScore score;
    score.evidence =
        ledger.evidence_weight(u, v, surface, snapshot_graphs.timestamp, params);
    if (score.evidence <= 0.0) return score;  // no prior head-to-head: I* = 0

    std::vector<PlayerId> nodes{u, v};
    auto common = common_opponents(u, v, snapshot_graphs);
    score.neighbourhood_size = static_cast<int>(common.size());
    nodes.insert(nodes.end(), common.begin(), common.end());

    AdvantageMatrix adv = advantage_matrix(nodes, snapshot_graphs.surface(surface));
    score.raw_index = intransitivity_index(adv.advantages);
    score.weighted = score.raw_index * std::sqrt(score.evidence);
    return score;
}

}  // namespace tenniscast::intransitivity
