#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tenniscast/graphs.hpp"

namespace tenniscast::magnet {

using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct MagnetHyperparams {
    double q = 0.25;
    int cheb_order = 2;  // K
    int layers = 2;      // L
    int hidden = 64;
    bool use_activation = false;
    double label_smoothing = 0.19;
    double learning_rate = 0.003;
    double weight_decay = 1e-4;
    double dropout = 0.3;
    int initial_epochs = 150;
    int retrain_epochs = 30;
    int retrain_interval = 38;  // snapshots between retrains
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

/// splitmix64-based generator with a Box-Muller normal; deterministic
/// across platforms, unlike the std:: distributions.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}
    uint64_t next_u64();
    double uniform();  // [0, 1)
    double normal();
    uint64_t state() const { return state_; }
    void set_state(uint64_t s) { state_ = s; }

private:
    uint64_t state_;
};

/// Normalised magnetic Laplacian of one surface graph plus its Chebyshev
/// rescaling. The Laplacian is complex Hermitian with spectrum in [0, 2];
/// isolated nodes contribute identity rows.
struct LaplacianBundle {
    CMat laplacian;  // L_N
    CMat rescaled;   // (2 / lambda_max) L_N - I, spectrum in [-1, 1]
    double lambda_max = 2.0;
};

CMat magnetic_laplacian(const graphs::SurfaceGraph& g, double q);

/// Largest eigenvalue by power iteration; falls back to the spectral
/// bound 2.0 when the iteration breaks down or fails to converge.
double power_iteration_lambda_max(const CMat& hermitian, double tol = 1e-6, int max_iter = 1000);

std::pair<CMat, double> chebyshev_rescale(const CMat& laplacian);

LaplacianBundle make_bundle(const graphs::SurfaceGraph& g, double q);

/// All trainable tensors plus Adam moments and the dropout RNG cursor.
/// Value-semantic: copies are independent models.
struct ModelState {
    MagnetHyperparams hyper;
    int input_dim = 0;
    uint64_t seed = 0;

    // theta[l][k]: complex channel-mixing weights, (F_{l-1} x F_l).
    std::vector<std::vector<CMat>> theta;
    RMat head_w;  // 2 x 4*hidden
    RVec head_b;  // 2

    int64_t step = 0;
    std::vector<std::vector<CMat>> m_theta;
    std::vector<std::vector<CMat>> v_theta;  // re/im second moments packed per component
    RMat m_w, v_w;
    RVec m_b, v_b;
    uint64_t rng_state = 0;
};

ModelState init_model(const MagnetHyperparams& hyper, int input_dim, uint64_t seed);

/// One ordered training sample: which of (first, second) won a set.
struct EdgeSample {
    Surface surface;
    PlayerId first, second;
    int label;  // 0: first won, 1: second won
};

/// Per-set samples for the given match rows, both orientations of each
/// set, so the order-averaged probability of Eq-A.10 style scoring is
/// trained symmetrically.
std::vector<EdgeSample> build_training_samples(const std::vector<MatchRecord>& matches,
                                               const std::vector<size_t>& rows);

struct LayerCache {
    std::vector<CMat> basis;  // T_k(L~) applied to the layer input
    CMat pre;                 // pre-activation output (only when activation is on)
};
struct ForwardCache {
    std::vector<LayerCache> layers;
    CMat final_z;
};

/// Unwound real node embeddings (|V| x 2*F_L) for one surface.
RMat forward(const ModelState& state, const LaplacianBundle& bundle, const RMat& features,
             ForwardCache* cache = nullptr);

/// softmax(W [h_u; h_v] + b): ordered two-class probability vector.
Eigen::Vector2d edge_probability(const RMat& h, PlayerId u, PlayerId v, const ModelState& state);

/// Order-averaged set-win probability; p(u,v) + p(v,u) == 1 exactly.
double set_win_probability(const RMat& h, PlayerId u, PlayerId v, const ModelState& state);

/// Best-of-3 / best-of-5 conversion assuming i.i.d. sets.
double match_win_probability(double set_prob, int best_of);

struct Gradients {
    std::vector<std::vector<CMat>> theta;
    RMat head_w;
    RVec head_b;
};

using SurfaceBundles = std::array<std::optional<LaplacianBundle>, kNumSurfaces>;
using DropoutMasks = std::array<RMat, kNumSurfaces>;  // empty matrix = no dropout

/// Mean label-smoothed cross-entropy over the samples; fills analytic
/// gradients when `grads` is non-null. Exposed so the finite-difference
/// check can drive it directly with a frozen dropout mask.
double loss_and_gradients(const ModelState& state, const SurfaceBundles& bundles, const RMat& x,
                          std::span<const EdgeSample> samples, const DropoutMasks* masks,
                          Gradients* grads);

/// Draws inverted-dropout masks for each surface that has samples.
DropoutMasks draw_dropout_masks(ModelState& state, const SurfaceBundles& bundles,
                                std::span<const EdgeSample> samples, Eigen::Index rows);

void adam_step(ModelState& state, const Gradients& grads);

/// Full-batch training; appends one loss value per epoch to the trace.
void train(ModelState& state, const SurfaceBundles& bundles, const RMat& x,
           const std::vector<EdgeSample>& samples, int epochs, std::vector<double>* loss_trace);

double training_accuracy(const ModelState& state, const SurfaceBundles& bundles, const RMat& x,
                         std::span<const EdgeSample> samples);

/// Versioned binary checkpoint; round-trips bit-exactly.
void save_checkpoint(const ModelState& state, const std::string& path);
ModelState load_checkpoint(const std::string& path);

/// Mutable views over every parameter tensor (complex tensors viewed as
/// interleaved re/im doubles), used by the gradient check.
struct ParamView {
    std::string name;
    double* data;
    size_t size;
};
std::vector<ParamView> parameter_views(ModelState& state);
std::vector<ParamView> gradient_views(Gradients& grads);

}  // namespace tenniscast::magnet
