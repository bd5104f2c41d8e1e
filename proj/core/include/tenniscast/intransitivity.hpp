#pragma once

#include <vector>

#include <Eigen/Core>

#include "tenniscast/graphs.hpp"

namespace tenniscast::intransitivity {

/// Players with a head-to-head edge to both u and v in the shared pair
/// set of the snapshot (surface-independent), sorted ascending.
std::vector<PlayerId> common_opponents(PlayerId u, PlayerId v,
                                       const graphs::SnapshotGraphs& graphs);

/// Antisymmetric logit-advantage matrix over an ordered node list.
/// Unobserved pairs carry zero; dominance scores are clamped away from
/// {0, 1} before the logit.
struct AdvantageMatrix {
    std::vector<PlayerId> nodes;
    Eigen::MatrixXd advantages;
};

inline constexpr double kLogitClamp = 1e-3;

AdvantageMatrix advantage_matrix(const std::vector<PlayerId>& nodes,
                                 const graphs::SurfaceGraph& graph,
                                 double clamp = kLogitClamp);

struct HodgeParts {
    Eigen::VectorXd potential;    // divergence s_i = row mean of A
    Eigen::MatrixXd transitive;   // T[i][j] = s_i - s_j
    Eigen::MatrixXd cyclic;       // A - T, divergence-free
};

/// Complete-graph Hodge decomposition of an antisymmetric matrix.
HodgeParts hodge_decompose(const Eigen::MatrixXd& antisymmetric);

/// (1 + |C|_F) / (1 + |T|_F).
double intransitivity_index(const Eigen::MatrixXd& antisymmetric);

struct IntransitivityScore {
    double raw_index = 1.0;      // I(A) over the common-opponent subgraph
    double evidence = 0.0;       // Eq-3 denominator for the (u, v) pair
    double weighted = 0.0;       // I* = I(A) * sqrt(evidence)
    int neighbourhood_size = 0;  // |C_uv|
};

/// Evidence-weighted intransitivity of the (u, v) matchup on the match's
/// surface, using only data already in the snapshot graphs.
IntransitivityScore weighted_intransitivity(PlayerId u, PlayerId v, Surface surface,
                                            const graphs::SnapshotGraphs& snapshot_graphs,
                                            const graphs::DominanceLedger& ledger,
                                            const graphs::GraphParams& params);

}  // namespace tenniscast::intransitivity
