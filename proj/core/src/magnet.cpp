#include "tenniscast/magnet.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace tenniscast::magnet {

namespace {

using Complex = std::complex<double>;

int layer_input_dim(const ModelState& s, int layer) {
    return layer == 0 ? s.input_dim : s.hyper.hidden;
}

}  // namespace

uint64_t Rng::next_u64() {
    // splitmix64
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CMat magnetic_laplacian(const graphs::SurfaceGraph& g, double q) {
    const auto n = static_cast<Eigen::Index>(g.num_nodes);
    RVec degree = RVec::Zero(n);
    for (const auto& e : g.edges) {
        degree(e.from) += 0.5 * e.weight;  // symmetrised adjacency (A + A^T) / 2
        degree(e.to) += 0.5 * e.weight;
    }
    CMat l = CMat::Identity(n, n);
    for (const auto& e : g.edges) {
        double norm = 0.5 * e.weight / std::sqrt(degree(e.from) * degree(e.to));
        double phase = 2.0 * std::numbers::pi * q * e.weight;  // A(u,v) - A(v,u) = w
        Complex value = -norm * std::exp(Complex(0.0, phase));
        l(e.from, e.to) = value;
        l(e.to, e.from) = std::conj(value);
    }
    return l;
}

double power_iteration_lambda_max(const CMat& hermitian, double tol, int max_iter) {
    const Eigen::Index n = hermitian.rows();
    if (n == 0) return 2.0;
    Rng rng(0x1a2b3c4d5e6f7788ULL ^ static_cast<uint64_t>(n));
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(rng.normal(), rng.normal());
    double norm = v.norm();
    if (norm == 0.0) return 2.0;
    v /= norm;

    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd w = hermitian * v;
        double wnorm = w.norm();
        if (wnorm == 0.0) return 2.0;  // null operator or unlucky start
        double next = std::real(v.dot(w));
        v = w / wnorm;
        if (it > 0 && std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next)))
            return next;
        lambda = next;
    }
    return 2.0;  // non-convergence: spectral bound
}

std::pair<CMat, double> chebyshev_rescale(const CMat& laplacian) {
    double lambda_max = power_iteration_lambda_max(laplacian);
    CMat rescaled = (2.0 / lambda_max) * laplacian - CMat::Identity(laplacian.rows(), laplacian.cols());
    return {std::move(rescaled), lambda_max};
}

LaplacianBundle make_bundle(const graphs::SurfaceGraph& g, double q) {
    LaplacianBundle b;
    b.laplacian = magnetic_laplacian(g, q);
    auto [rescaled, lambda_max] = chebyshev_rescale(b.laplacian);
    b.rescaled = std::move(rescaled);
    b.lambda_max = lambda_max;
    return b;
}

ModelState init_model(const MagnetHyperparams& hyper, int input_dim, uint64_t seed) {
    if (hyper.cheb_order < 1 || hyper.layers < 1 || hyper.hidden < 1)
        throw std::invalid_argument("init_model: invalid architecture hyperparameters");
    ModelState s;
    s.hyper = hyper;
    s.input_dim = input_dim;
    s.seed = seed;
    Rng rng(seed);

    s.theta.resize(static_cast<size_t>(hyper.layers));
    s.m_theta.resize(static_cast<size_t>(hyper.layers));
    s.v_theta.resize(static_cast<size_t>(hyper.layers));
    for (int l = 0; l < hyper.layers; ++l) {
        int fin = layer_input_dim(s, l);
        int fout = hyper.hidden;
        double scale = std::sqrt(1.0 / (2.0 * fin * (hyper.cheb_order + 1)));
        auto& lt = s.theta[static_cast<size_t>(l)];
        for (int k = 0; k <= hyper.cheb_order; ++k) {
            CMat t(fin, fout);
            for (Eigen::Index j = 0; j < t.cols(); ++j)
                for (Eigen::Index i = 0; i < t.rows(); ++i)
                    t(i, j) = Complex(rng.normal() * scale, rng.normal() * scale);
            lt.push_back(std::move(t));
            s.m_theta[static_cast<size_t>(l)].push_back(CMat::Zero(fin, fout));
            s.v_theta[static_cast<size_t>(l)].push_back(CMat::Zero(fin, fout));
        }
    }
    // Zero head: every pair starts at (0.5, 0.5).
    s.head_w = RMat::Zero(2, 4 * hyper.hidden);
    s.head_b = RVec::Zero(2);
    s.m_w = RMat::Zero(2, 4 * hyper.hidden);
    s.v_w = RMat::Zero(2, 4 * hyper.hidden);
    s.m_b = RVec::Zero(2);
    s.v_b = RVec::Zero(2);
    s.rng_state = rng.state();
    return s;
}

std::vector<EdgeSample> build_training_samples(const std::vector<MatchRecord>& matches,
                                               const std::vector<size_t>& rows) {
    std::vector<EdgeSample> out;
    for (size_t r : rows) {
        const MatchRecord& m = matches[r];
        for (int i = 0; i < m.sets_winner; ++i) {
            out.push_back({m.surface, m.winner, m.loser, 0});
            out.push_back({m.surface, m.loser, m.winner, 1});
        }
        for (int i = 0; i < m.sets_loser; ++i) {
            out.push_back({m.surface, m.loser, m.winner, 0});
            out.push_back({m.surface, m.winner, m.loser, 1});
        }
    }
    return out;
}

namespace {

/// Chebyshev basis of the layer input: T_0 x, T_1 x, ..., T_K x.
std::vector<CMat> chebyshev_basis(const CMat& rescaled, const CMat& x, int order) {
    std::vector<CMat> basis;
    basis.reserve(static_cast<size_t>(order) + 1);
    basis.push_back(x);
    if (order >= 1) basis.push_back(rescaled * x);
    for (int k = 2; k <= order; ++k)
        basis.push_back(2.0 * (rescaled * basis[static_cast<size_t>(k - 1)]) -
                        basis[static_cast<size_t>(k - 2)]);
    return basis;
}

CMat layer_output(const ModelState& state, int layer, const std::vector<CMat>& basis) {
    const auto& thetas = state.theta[static_cast<size_t>(layer)];
    CMat y = basis[0] * thetas[0];
    for (size_t k = 1; k < thetas.size(); ++k) y += basis[k] * thetas[k];
    return y;
}

void apply_complex_relu(CMat& z) {
    for (Eigen::Index j = 0; j < z.cols(); ++j)
        for (Eigen::Index i = 0; i < z.rows(); ++i)
            if (z(i, j).real() < 0.0) z(i, j) = Complex(0.0, 0.0);
}

Eigen::Vector2d softmax2(const Eigen::Vector2d& logits) {
    double m = logits.maxCoeff();
    Eigen::Vector2d e = (logits.array() - m).exp();
    return e / e.sum();
}

}  // namespace

RMat forward(const ModelState& state, const LaplacianBundle& bundle, const RMat& features,
             ForwardCache* cache) {
    CMat cur = features.cast<Complex>();
    if (cache) cache->layers.resize(static_cast<size_t>(state.hyper.layers));
    for (int l = 0; l < state.hyper.layers; ++l) {
        auto basis = chebyshev_basis(bundle.rescaled, cur, state.hyper.cheb_order);
        CMat y = layer_output(state, l, basis);
        if (cache) cache->layers[static_cast<size_t>(l)].basis = std::move(basis);
        if (state.hyper.use_activation) {
            if (cache) cache->layers[static_cast<size_t>(l)].pre = y;
            apply_complex_relu(y);
        }
        cur = std::move(y);
    }
    if (cache) cache->final_z = cur;
    RMat h(cur.rows(), 2 * cur.cols());
    h.leftCols(cur.cols()) = cur.real();
    h.rightCols(cur.cols()) = cur.imag();
    return h;
}

Eigen::Vector2d edge_probability(const RMat& h, PlayerId u, PlayerId v, const ModelState& state) {
    const Eigen::Index f = h.cols();
    Eigen::VectorXd e(2 * f);
    e.head(f) = h.row(u).transpose();
    e.tail(f) = h.row(v).transpose();
    return softmax2(state.head_w * e + state.head_b);
}

double set_win_probability(const RMat& h, PlayerId u, PlayerId v, const ModelState& state) {
    Eigen::Vector2d z_uv = edge_probability(h, u, v, state);
    Eigen::Vector2d z_vu = edge_probability(h, v, u, state);
    return 0.5 * (z_uv(0) + z_vu(1));
}

double match_win_probability(double p, int best_of) {
    if (best_of == 3) return p * p + 2.0 * p * p * (1.0 - p);
    if (best_of == 5)
        return p * p * p + 3.0 * p * p * p * (1.0 - p) + 6.0 * p * p * p * (1.0 - p) * (1.0 - p);
    throw std::invalid_argument("match_win_probability: best_of must be 3 or 5");
}

namespace {

Gradients zero_gradients(const ModelState& state) {
    Gradients g;
    g.theta.resize(state.theta.size());
    for (size_t l = 0; l < state.theta.size(); ++l)
        for (const auto& t : state.theta[l])
            g.theta[l].push_back(CMat::Zero(t.rows(), t.cols()));
    g.head_w = RMat::Zero(state.head_w.rows(), state.head_w.cols());
    g.head_b = RVec::Zero(state.head_b.size());
    return g;
}

// Reverse pass through the Chebyshev stack of one surface. `g_h` holds
// dLoss/d(unwound embedding); theta gradients accumulate into `grads`.
void backward_surface(const ModelState& state, const LaplacianBundle& bundle,
                      const ForwardCache& cache, const RMat& g_h, Gradients& grads) {
    const Eigen::Index f_out = cache.final_z.cols();
    CMat g_z(g_h.rows(), f_out);
    g_z.real() = g_h.leftCols(f_out);
    g_z.imag() = g_h.rightCols(f_out);

    for (int l = state.hyper.layers - 1; l >= 0; --l) {
        const LayerCache& lc = cache.layers[static_cast<size_t>(l)];
        if (state.hyper.use_activation) {
            for (Eigen::Index j = 0; j < g_z.cols(); ++j)
                for (Eigen::Index i = 0; i < g_z.rows(); ++i)
                    if (lc.pre(i, j).real() < 0.0) g_z(i, j) = Complex(0.0, 0.0);
        }
        const auto& thetas = state.theta[static_cast<size_t>(l)];
        const int order = state.hyper.cheb_order;

        // d/d(theta_k) = B_k^H G;  d/d(B_k) = G theta_k^H.
        std::vector<CMat> g_basis(static_cast<size_t>(order) + 1);
        for (int k = 0; k <= order; ++k) {
            grads.theta[static_cast<size_t>(l)][static_cast<size_t>(k)] +=
                lc.basis[static_cast<size_t>(k)].adjoint() * g_z;
            g_basis[static_cast<size_t>(k)] = g_z * thetas[static_cast<size_t>(k)].adjoint();
        }
        // Adjoint of the recurrence B_k = 2 L~ B_{k-1} - B_{k-2}; L~ is
        // Hermitian so its adjoint is itself.
        for (int k = order; k >= 2; --k) {
            g_basis[static_cast<size_t>(k - 1)] += 2.0 * (bundle.rescaled * g_basis[static_cast<size_t>(k)]);
            g_basis[static_cast<size_t>(k - 2)] -= g_basis[static_cast<size_t>(k)];
        }
        CMat g_input = g_basis[0];
        if (order >= 1) g_input += bundle.rescaled * g_basis[1];
        g_z = std::move(g_input);
    }
}

}  // namespace

DropoutMasks draw_dropout_masks(ModelState& state, const SurfaceBundles& bundles,
                                std::span<const EdgeSample> samples, Eigen::Index rows) {
    DropoutMasks masks;
    if (state.hyper.dropout <= 0.0) return masks;
    std::array<bool, kNumSurfaces> used{};
    for (const auto& s : samples) used[static_cast<size_t>(s.surface)] = true;
    Rng rng(0);
    rng.set_state(state.rng_state);
    const double keep = 1.0 - state.hyper.dropout;
    const Eigen::Index cols = 2 * state.hyper.hidden;
    for (size_t s = 0; s < static_cast<size_t>(kNumSurfaces); ++s) {
        if (!used[s] || !bundles[s]) continue;
        RMat m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                m(i, j) = rng.uniform() < keep ? 1.0 / keep : 0.0;
        masks[s] = std::move(m);
    }
    state.rng_state = rng.state();
    return masks;
}

double loss_and_gradients(const ModelState& state, const SurfaceBundles& bundles, const RMat& x,
                          std::span<const EdgeSample> samples, const DropoutMasks* masks,
                          Gradients* grads) {
    if (samples.empty()) throw std::invalid_argument("loss_and_gradients: no training samples");

    std::array<std::vector<const EdgeSample*>, kNumSurfaces> by_surface;
    for (const auto& s : samples) by_surface[static_cast<size_t>(s.surface)].push_back(&s);

    Gradients local;
    if (grads) local = zero_gradients(state);

    const double eps = state.hyper.label_smoothing;
    const double n_inv = 1.0 / static_cast<double>(samples.size());
    const Eigen::Index f2 = 2 * state.hyper.hidden;
    double loss = 0.0;

    for (size_t s = 0; s < static_cast<size_t>(kNumSurfaces); ++s) {
        const auto& list = by_surface[s];
        if (list.empty()) continue;
        if (!bundles[s])
            throw std::invalid_argument("loss_and_gradients: missing Laplacian for a surface "
                                        "with training samples");
        ForwardCache cache;
        RMat h = forward(state, *bundles[s], x, grads ? &cache : nullptr);
        const RMat* mask = nullptr;
        if (masks && (*masks)[s].size() > 0) {
            mask = &(*masks)[s];
            h = h.cwiseProduct(*mask);
        }

        RMat g_h = RMat::Zero(h.rows(), h.cols());
        Eigen::VectorXd edge(2 * f2);
        for (const EdgeSample* sample : list) {
            edge.head(f2) = h.row(sample->first).transpose();
            edge.tail(f2) = h.row(sample->second).transpose();
            Eigen::Vector2d logits = state.head_w * edge + state.head_b;
            double m = logits.maxCoeff();
            Eigen::Vector2d shifted = logits.array() - m;
            double lse = m + std::log(std::exp(shifted(0)) + std::exp(shifted(1)));
            Eigen::Vector2d logp = logits.array() - lse;
            Eigen::Vector2d target;
            target << (sample->label == 0 ? 1.0 - eps / 2.0 : eps / 2.0),
                (sample->label == 0 ? eps / 2.0 : 1.0 - eps / 2.0);
            loss -= n_inv * target.dot(logp);

            if (grads) {
                Eigen::Vector2d p = logp.array().exp();
                Eigen::Vector2d g_logits = n_inv * (p - target);
                local.head_w += g_logits * edge.transpose();
                local.head_b += g_logits;
                Eigen::VectorXd g_edge = state.head_w.transpose() * g_logits;
                g_h.row(sample->first) += g_edge.head(f2).transpose();
                g_h.row(sample->second) += g_edge.tail(f2).transpose();
            }
        }

        if (grads) {
            if (mask) g_h = g_h.cwiseProduct(*mask);
            backward_surface(state, *bundles[s], cache, g_h, local);
        }
    }

    if (grads) *grads = std::move(local);
    return loss;
}

void adam_step(ModelState& state, const Gradients& grads) {
    state.step += 1;
    const double lr = state.hyper.learning_rate;
    const double wd = state.hyper.weight_decay;
    const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));

    auto update_real = [&](double& param, double g, double& m, double& v) {
        m = kAdamBeta1 * m + (1.0 - kAdamBeta1) * g;
        v = kAdamBeta2 * v + (1.0 - kAdamBeta2) * g * g;
        double mhat = m / bc1;
        double vhat = v / bc2;
        param -= lr * (mhat / (std::sqrt(vhat) + kAdamEps) + wd * param);
    };

    for (size_t l = 0; l < state.theta.size(); ++l) {
        for (size_t k = 0; k < state.theta[l].size(); ++k) {
            CMat& t = state.theta[l][k];
            const CMat& g = grads.theta[l][k];
            CMat& m = state.m_theta[l][k];
            CMat& v = state.v_theta[l][k];
            auto* tp = reinterpret_cast<double*>(t.data());
            const auto* gp = reinterpret_cast<const double*>(g.data());
            auto* mp = reinterpret_cast<double*>(m.data());
            auto* vp = reinterpret_cast<double*>(v.data());
            const size_t count = static_cast<size_t>(t.size()) * 2;
            for (size_t i = 0; i < count; ++i) update_real(tp[i], gp[i], mp[i], vp[i]);
        }
    }
    for (Eigen::Index i = 0; i < state.head_w.size(); ++i)
        update_real(state.head_w.data()[i], grads.head_w.data()[i], state.m_w.data()[i],
                    state.v_w.data()[i]);
    for (Eigen::Index i = 0; i < state.head_b.size(); ++i)
        update_real(state.head_b.data()[i], grads.head_b.data()[i], state.m_b.data()[i],
                    state.v_b.data()[i]);
}

void train(ModelState& state, const SurfaceBundles& bundles, const RMat& x,
           const std::vector<EdgeSample>& samples, int epochs, std::vector<double>* loss_trace) {
    if (samples.empty()) throw std::invalid_argument("train: no training samples");
    for (int epoch = 0; epoch < epochs; ++epoch) {
        DropoutMasks masks = draw_dropout_masks(state, bundles, samples, x.rows());
        Gradients grads;
        double loss = loss_and_gradients(state, bundles, x, samples,
                                         state.hyper.dropout > 0.0 ? &masks : nullptr, &grads);
        adam_step(state, grads);
        if (loss_trace) loss_trace->push_back(loss);
    }
}

double training_accuracy(const ModelState& state, const SurfaceBundles& bundles, const RMat& x,
                         std::span<const EdgeSample> samples) {
    std::array<std::optional<RMat>, kNumSurfaces> h;
    long long correct = 0;
    for (const auto& s : samples) {
        auto idx = static_cast<size_t>(s.surface);
        if (!h[idx]) h[idx] = forward(state, *bundles[idx], x);
        double p = set_win_probability(*h[idx], s.first, s.second, state);
        int predicted = p > 0.5 ? 0 : 1;
        if (predicted == s.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

// ---------------------------------------------------------------------------
// Checkpoint io

namespace {

constexpr uint64_t kCheckpointMagic = 0x54434d4f44454c31ULL;  // "TCMODEL1"
constexpr uint32_t kCheckpointVersion = 1;

void put_bytes(std::ofstream& out, const void* p, size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}
template <typename T>
void put(std::ofstream& out, T v) {
    put_bytes(out, &v, sizeof v);
}
void put_cmat(std::ofstream& out, const CMat& m) {
    put<int64_t>(out, m.rows());
    put<int64_t>(out, m.cols());
    put_bytes(out, m.data(), sizeof(Complex) * static_cast<size_t>(m.size()));
}
void put_rmat(std::ofstream& out, const RMat& m) {
    put<int64_t>(out, m.rows());
    put<int64_t>(out, m.cols());
    put_bytes(out, m.data(), sizeof(double) * static_cast<size_t>(m.size()));
}

void get_bytes(std::ifstream& in, void* p, size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
}
template <typename T>
T get(std::ifstream& in) {
    T v;
    get_bytes(in, &v, sizeof v);
    return v;
}
CMat get_cmat(std::ifstream& in) {
    auto rows = get<int64_t>(in);
    auto cols = get<int64_t>(in);
    CMat m(rows, cols);
    get_bytes(in, m.data(), sizeof(Complex) * static_cast<size_t>(m.size()));
    return m;
}
RMat get_rmat(std::ifstream& in) {
    auto rows = get<int64_t>(in);
    auto cols = get<int64_t>(in);
    RMat m(rows, cols);
    get_bytes(in, m.data(), sizeof(double) * static_cast<size_t>(m.size()));
    return m;
}

}  // namespace

void save_checkpoint(const ModelState& state, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    put(out, kCheckpointMagic);
    put(out, kCheckpointVersion);
    const auto& h = state.hyper;
    put(out, h.q);
    put<int32_t>(out, h.cheb_order);
    put<int32_t>(out, h.layers);
    put<int32_t>(out, h.hidden);
    put<uint8_t>(out, h.use_activation ? 1 : 0);
    put(out, h.label_smoothing);
    put(out, h.learning_rate);
    put(out, h.weight_decay);
    put(out, h.dropout);
    put<int32_t>(out, h.initial_epochs);
    put<int32_t>(out, h.retrain_epochs);
    put<int32_t>(out, h.retrain_interval);
    put<int32_t>(out, state.input_dim);
    put(out, state.seed);
    put(out, state.step);
    put(out, state.rng_state);
    for (size_t l = 0; l < state.theta.size(); ++l)
        for (size_t k = 0; k < state.theta[l].size(); ++k) {
            put_cmat(out, state.theta[l][k]);
            put_cmat(out, state.m_theta[l][k]);
            put_cmat(out, state.v_theta[l][k]);
        }
    put_rmat(out, state.head_w);
    put_rmat(out, state.m_w);
    put_rmat(out, state.v_w);
    RMat b = state.head_b, mb = state.m_b, vb = state.v_b;
    put_rmat(out, b);
    put_rmat(out, mb);
    put_rmat(out, vb);
    out.close();
    if (out.fail()) throw std::runtime_error("failed writing checkpoint: " + path);
}

ModelState load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    if (get<uint64_t>(in) != kCheckpointMagic)
        throw std::runtime_error("not a model checkpoint: " + path);
    if (get<uint32_t>(in) != kCheckpointVersion)
        throw std::runtime_error("unsupported checkpoint version: " + path);
    MagnetHyperparams h;
    h.q = get<double>(in);
    h.cheb_order = get<int32_t>(in);
    h.layers = get<int32_t>(in);
    h.hidden = get<int32_t>(in);
    h.use_activation = get<uint8_t>(in) != 0;
    h.label_smoothing = get<double>(in);
    h.learning_rate = get<double>(in);
    h.weight_decay = get<double>(in);
    h.dropout = get<double>(in);
    h.initial_epochs = get<int32_t>(in);
    h.retrain_epochs = get<int32_t>(in);
    h.retrain_interval = get<int32_t>(in);

    ModelState s;
    s.hyper = h;
    s.input_dim = get<int32_t>(in);
    s.seed = get<uint64_t>(in);
    s.step = get<int64_t>(in);
    s.rng_state = get<uint64_t>(in);
    s.theta.resize(static_cast<size_t>(h.layers));
    s.m_theta.resize(static_cast<size_t>(h.layers));
    s.v_theta.resize(static_cast<size_t>(h.layers));
    for (int l = 0; l < h.layers; ++l)
        for (int k = 0; k <= h.cheb_order; ++k) {
            s.theta[static_cast<size_t>(l)].push_back(get_cmat(in));
            s.m_theta[static_cast<size_t>(l)].push_back(get_cmat(in));
            s.v_theta[static_cast<size_t>(l)].push_back(get_cmat(in));
        }
    s.head_w = get_rmat(in);
    s.m_w = get_rmat(in);
    s.v_w = get_rmat(in);
    s.head_b = get_rmat(in).col(0);
    s.m_b = get_rmat(in).col(0);
    s.v_b = get_rmat(in).col(0);
    return s;
}

std::vector<ParamView> parameter_views(ModelState& state) {
    std::vector<ParamView> views;
    for (size_t l = 0; l < state.theta.size(); ++l)
        for (size_t k = 0; k < state.theta[l].size(); ++k)
            views.push_back({"theta[" + std::to_string(l) + "][" + std::to_string(k) + "]",
                             reinterpret_cast<double*>(state.theta[l][k].data()),
                             static_cast<size_t>(state.theta[l][k].size()) * 2});
    views.push_back({"head_w", state.head_w.data(), static_cast<size_t>(state.head_w.size())});
    views.push_back({"head_b", state.head_b.data(), static_cast<size_t>(state.head_b.size())});
    return views;
}

std::vector<ParamView> gradient_views(Gradients& grads) {
    std::vector<ParamView> views;
    for (size_t l = 0; l < grads.theta.size(); ++l)
        for (size_t k = 0; k < grads.theta[l].size(); ++k)
            views.push_back({"theta[" + std::to_string(l) + "][" + std::to_string(k) + "]",
                             reinterpret_cast<double*>(grads.theta[l][k].data()),
                             static_cast<size_t>(grads.theta[l][k].size()) * 2});
    views.push_back({"head_w", grads.head_w.data(), static_cast<size_t>(grads.head_w.size())});
    views.push_back({"head_b", grads.head_b.data(), static_cast<size_t>(grads.head_b.size())});
    return views;
}

}  // namespace tenniscast::magnet
