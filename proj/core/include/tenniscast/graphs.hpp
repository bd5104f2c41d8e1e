#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "tenniscast/types.hpp"

namespace tenniscast::graphs {

/// Graph construction parameters. alpha[target][source] is the skill
/// transfer from the source surface onto the target surface; the diagonal
/// is fixed at 1.
struct GraphParams {
    double lambda = 0.38;
    std::array<std::array<double, kNumSurfaces>, kNumSurfaces> alpha = default_alpha();
    std::array<double, 4> beta_by_tier = {1.0, 0.94, 0.85, 0.69};  // indexed by Tier

    static std::array<std::array<double, kNumSurfaces>, kNumSurfaces> default_alpha();

    double alpha_at(Surface target, Surface source) const {
        return alpha[static_cast<size_t>(target)][static_cast<size_t>(source)];
    }
    double beta(Tier tier) const { return beta_by_tier[static_cast<size_t>(tier)]; }
};

/// exp(-lambda * dt) with dt in fractional years (days / 365.25).
double decay_coefficient(Date tau_n, Date tau_k, double lambda);

inline uint64_t pair_key(PlayerId a, PlayerId b) {
    uint32_t lo = static_cast<uint32_t>(a < b ? a : b);
    uint32_t hi = static_cast<uint32_t>(a < b ? b : a);
    return (static_cast<uint64_t>(lo) << 32) | hi;
}

struct DominanceScore {
    double dominance = 0.0;  // weighted mean games share, in [0, 1]
    double evidence = 0.0;   // sum of alpha * beta * phi over prior matches
};

/// Per-pair raw match history. Scores are recomputed from the stored
/// history at every query so the decay coefficient is exact for any
/// snapshot time; queries only see matches dated strictly before tau_n.
class DominanceLedger {
public:
    struct Entry {
        Date date;
        Surface surface;
        Tier tier;
        double games_share_low;  // games share of the lower-indexed player
    };

    void add_match(const MatchRecord& m);

    /// Dominance of u over v on the target surface at time tau_n, or
    /// nullopt when the pair has no prior history.
    std::optional<DominanceScore> score(PlayerId u, PlayerId v, Surface target, Date tau_n,
                                        const GraphParams& params) const;

    /// Eq. 3 denominator for the pair; 0 when there is no prior history.
    double evidence_weight(PlayerId u, PlayerId v, Surface target, Date tau_n,
                           const GraphParams& params) const;

    const std::unordered_map<uint64_t, std::vector<Entry>>& pairs() const { return pairs_; }

private:
    std::unordered_map<uint64_t, std::vector<Entry>> pairs_;
};

/// Directed dominance graph for one surface at one snapshot. Each player
/// pair contributes at most one directed edge, pointing from the dominant
/// player, with weight in (0.5, 1].
struct SurfaceGraph {
    int snapshot_index = -1;
    Surface surface = Surface::hard;
    int num_nodes = 0;

    struct Edge {
        PlayerId from, to;
        double weight;
    };
    std::vector<Edge> edges;
    // Dominance of the lower-indexed player of each pair (0.5 entries are
    // kept here even though they produce no edge).
    std::unordered_map<uint64_t, double> pair_dominance;
    std::vector<int> in_degree, out_degree;

    /// D(u, v) for pairs with history; nullopt otherwise.
    std::optional<double> dominance(PlayerId u, PlayerId v) const;
};

/// The three per-surface graphs of one snapshot plus the shared pair set.
struct SnapshotGraphs {
    int snapshot_index = -1;
    Date timestamp;
    std::array<SurfaceGraph, kNumSurfaces> by_surface;
    std::vector<std::vector<PlayerId>> pair_neighbours;  // adjacency over the pair set

    const SurfaceGraph& surface(Surface s) const { return by_surface[static_cast<size_t>(s)]; }
};

SnapshotGraphs build_surface_graphs(int snapshot_index, Date tau_n, const DominanceLedger& ledger,
                                    const GraphParams& params, int num_nodes);

/// Node feature matrix: height, weight, birth date as a real-valued year,
/// one-hot handedness, then in/out-degree per surface. Every column is
/// l2-normalised across nodes (all-zero columns stay zero).
Eigen::MatrixXd node_features(const SnapshotGraphs& graphs,
                              const std::vector<PlayerAttributes>& attributes);

inline constexpr int kNodeFeatureDim = 11;

}  // namespace tenniscast::graphs
