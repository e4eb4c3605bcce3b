#include "tsrc/fista.hpp"

#include <cmath>
#include <random>

namespace tsrc {

namespace {

constexpr double kPowerIterTol = 1e-8;
constexpr int kPowerIterCap = 1000;
constexpr double kSafetyInflation = 1.01;

// Largest eigenvalue of one symmetric PSD matrix by power iteration with a
// fixed pseudo-random start vector (a deterministic start that is almost
// surely not orthogonal to the top eigenspace).
double largest_eigenvalue(Eigen::Map<const Eigen::MatrixXd> A) {
    const Index n = A.rows();
    std::mt19937_64 rng(0x6b43a9b5d2c8f1e7ull);
    std::uniform_real_distribution<double> uni(0.5, 1.5);
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = uni(rng);
    v.normalize();

    double eig = 0.0;
    Eigen::VectorXd Av(n);
    for (int it = 0; it < kPowerIterCap; ++it) {
        Av.noalias() = A * v;
        double norm = Av.norm();
        if (norm == 0.0) return 0.0; // v in the null space; A is PSD so only possible if A ~ 0
        double next = v.dot(Av);
        if (it > 0 && std::abs(next - eig) <= kPowerIterTol * std::max(std::abs(next), 1e-300)) {
            eig = next;
            break;
        }
        eig = next;
        v = Av / norm;
    }
    return eig;
}

} // namespace

double max_gram_eigenvalue(const Tensor3& A) {
    if (A.rows() != A.cols()) throw ShapeError("max_gram_eigenvalue: channel slices must be square");
    double m = 0.0;
    for (Index t = 0; t < A.channels(); ++t) m = std::max(m, largest_eigenvalue(A.channel(t)));
    return m;
}

double lipschitz_constant(const Tensor3& D) {
    if (D.squared_frobenius_norm() == 0.0)
        throw NumericalError("lipschitz_constant: all-zero dictionary");
    Tensor3 gram(D.cols(), D.cols(), D.channels());
    for (Index t = 0; t < D.channels(); ++t)
        gram.channel(t).noalias() = D.channel(t).transpose() * D.channel(t);
    return kSafetyInflation * max_gram_eigenvalue(gram);
}

GramCache::GramCache(const Tensor3& D)
    : gram_(D.cols(), D.cols(), D.channels()), stacked_gram_(D.cols(), D.cols(), 1) {
    if (D.squared_frobenius_norm() == 0.0)
        throw NumericalError("GramCache: all-zero dictionary");
    for (Index t = 0; t < D.channels(); ++t)
        gram_.channel(t).noalias() = D.channel(t).transpose() * D.channel(t);
    stacked_gram_.channel(0).setZero();
    for (Index t = 0; t < D.channels(); ++t) stacked_gram_.channel(0) += gram_.channel(t);
    lipschitz_ = kSafetyInflation * max_gram_eigenvalue(gram_);
    stacked_lipschitz_ = kSafetyInflation * max_gram_eigenvalue(stacked_gram_);
}

namespace {

// quadratic part 1/2 x'Ax - b'x + data_const
double quadratic_value(const Tensor3& A, const Tensor3& b, double data_const, const Tensor3& x) {
    double v = data_const;
    for (Index t = 0; t < x.channels(); ++t) {
        auto xt = x.channel(t).col(0);
        v += 0.5 * xt.dot(A.channel(t) * xt) - b.channel(t).col(0).dot(xt);
    }
    return v;
}

double full_objective(const Tensor3& A, const Tensor3& b, double data_const, double lambda,
                      const ProxSpec& prox, const Tensor3& x) {
    return quadratic_value(A, b, data_const, x) + lambda * regularizer_value(x, prox);
}

Tensor3 replicate_channels(const Tensor3& x1, Index channels) {
    Tensor3 out(x1.rows(), x1.cols(), channels);
    for (Index t = 0; t < channels; ++t) out.channel(t) = x1.channel(0);
    return out;
}

} // namespace

Tensor3 fista_solve(const Tensor3& A, const Tensor3& b, double L, double data_const,
                    const SolverConfig& cfg, const Tensor3* x_init, SolveTrace* trace) {
    cfg.validate();
    if (A.rows() != A.cols()) throw ShapeError("fista_solve: Gram slices must be square");
    if (b.rows() != A.rows() || b.cols() != 1 || b.channels() != A.channels())
        throw ShapeError("fista_solve: b must be K x 1 x T matching A");
    if (!(L > 0.0)) throw NumericalError("fista_solve: non-positive step constant");

    const Index K = A.rows();
    const Index T = A.channels();

    Tensor3 x_prev = x_init ? *x_init : Tensor3(K, 1, T);
    if (!x_prev.same_shape(b)) throw ShapeError("fista_solve: x_init shape mismatch");

    ProxSpec prox = cfg.prox;
    prox.eta = cfg.lambda / L;
    prox.validate_for_apply();

    const double f_init = full_objective(A, b, data_const, cfg.lambda, prox, x_prev);

    Tensor3 x_cur = x_prev;
    Tensor3 w = x_prev; // extrapolation point
    Tensor3 u(K, 1, T);
    double t_momentum = 1.0;

    if (trace) {
        trace->objectives.clear();
        trace->lipschitz = L;
        trace->converged = false;
    }

    int j = 0;
    bool converged = false;
    for (; j < cfg.max_iters; ++j) {
        // gradient step u = w - (A w - b)/L, then the mode's shrinkage
        for (Index t = 0; t < T; ++t)
            u.channel(t).col(0).noalias() =
                w.channel(t).col(0) -
                (A.channel(t) * w.channel(t).col(0) - b.channel(t).col(0)) / L;
        Tensor3 x_next = apply_prox(u, prox);
        if (!x_next.all_finite())
            throw NumericalError("fista_solve: diverged (non-finite iterate)");

        double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
        double beta = (t_momentum - 1.0) / t_next;
        for (Index t = 0; t < T; ++t)
            w.channel(t) = x_next.channel(t) + beta * (x_next.channel(t) - x_cur.channel(t));
        t_momentum = t_next;

        double change = (x_next - x_cur).frobenius_norm();
        double base = std::max(x_cur.frobenius_norm(), 1e-12);
        x_prev = std::move(x_cur);
        x_cur = std::move(x_next);

        if (trace) trace->objectives.push_back(
            full_objective(A, b, data_const, cfg.lambda, prox, x_cur));

        if (change / base < cfg.tol) {
            converged = true;
            ++j;
            break;
        }
    }

    if (trace) {
        trace->iterations = j;
        trace->converged = converged;
    }

    // FISTA is non-monotone; guard the contract that the returned point is
    // never worse than the start (only reachable from near-optimal inits).
    if (full_objective(A, b, data_const, cfg.lambda, prox, x_cur) > f_init)
        return x_init ? *x_init : Tensor3(K, 1, T);
    return x_cur;
}

namespace {

Tensor3 gram_rhs(const Tensor3& D, const Tensor3& y) {
    Tensor3 b(D.cols(), 1, D.channels());
    for (Index t = 0; t < D.channels(); ++t)
        b.channel(t).col(0).noalias() = D.channel(t).transpose() * y.channel(t).col(0);
    return b;
}

} // namespace

Tensor3 tensor_sparse_code(const Tensor3& y, const Tensor3& D, const GramCache& gram,
                           const SolverConfig& cfg, const Tensor3* x_init, SolveTrace* trace) {
    cfg.validate();
    if (y.rows() != D.rows() || y.cols() != 1 || y.channels() != D.channels())
        throw ShapeError("tensor_sparse_code: y must be d x 1 x T matching D");

    const Index T = D.channels();
    Tensor3 b = gram_rhs(D, y);
    const double data_const = 0.5 * y.squared_frobenius_norm();

    if (cfg.prox.mode == SparsityMode::CC && T > 1) {
        // One code vector shared by every channel: collapse to the stacked
        // single-channel problem, then replicate the solution tube-wise.
        Tensor3 b1(D.cols(), 1, 1);
        b1.channel(0).setZero();
        for (Index t = 0; t < T; ++t) b1.channel(0) += b.channel(t);
        Tensor3 init1;
        if (x_init) {
            init1 = Tensor3(D.cols(), 1, 1);
            init1.channel(0) = x_init->channel(0);
        }
        Tensor3 x1 = fista_solve(gram.stacked_gram(), b1, gram.stacked_lipschitz(), data_const,
                                 cfg, x_init ? &init1 : nullptr, trace);
        return replicate_channels(x1, T);
    }
    return fista_solve(gram.gram(), b, gram.lipschitz(), data_const, cfg, x_init, trace);
}

Tensor3 tensor_sparse_code(const Tensor3& y, const Tensor3& D, const SolverConfig& cfg,
                           const Tensor3* x_init, SolveTrace* trace) {
    GramCache gram(D);
    return tensor_sparse_code(y, D, gram, cfg, x_init, trace);
}

} // namespace tsrc
