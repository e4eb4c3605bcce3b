#pragma once

#include <vector>

#include "tsrc/prox.hpp"
#include "tsrc/tensor.hpp"

namespace tsrc {

/// Accelerated proximal gradient solve of
///     x = argmin 1/2 ||y - D x||_F^2 + lambda g(x)
/// over code tensors x (K x 1 x T), with g selected by the ProxSpec.
struct SolverConfig {
    double lambda = 0.1;
    int max_iters = 500;
    double tol = 1e-6; // relative-iterate-change stopping threshold
    ProxSpec prox;

    void validate() const {
        if (!(lambda > 0.0)) throw ConfigError("SolverConfig: lambda must be > 0");
        if (max_iters < 1) throw ConfigError("SolverConfig: max_iters must be >= 1");
        if (!(tol > 0.0)) throw ConfigError("SolverConfig: tol must be > 0");
    }
};

struct SolveTrace {
    std::vector<double> objectives; // F(x_j) after each iteration
    int iterations = 0;
    bool converged = false;
    double lipschitz = 0.0;
};

/// Step-size constant for the data term: the maximum over channels of the
/// largest eigenvalue of D^(t)' D^(t), found by power iteration (relative
/// tolerance 1e-8, at most 1000 iterations) and inflated by 1.01 so the
/// constant-step solver keeps its guarantees if the iteration stops short.
/// Throws NumericalError for an all-zero dictionary.
double lipschitz_constant(const Tensor3& D);

/// Largest eigenvalue of a symmetric PSD tensor of square channel slices
/// (max over channels), by the same power iteration, without inflation.
double max_gram_eigenvalue(const Tensor3& A);

/// Precomputed Gram data for repeated solves against one dictionary:
/// A = D'D per channel plus the inflated step constant, and the
/// channel-summed versions used by CC-mode solves. Build once, share
/// read-only across solves.
class GramCache {
public:
    explicit GramCache(const Tensor3& D);

    const Tensor3& gram() const { return gram_; }
    double lipschitz() const { return lipschitz_; }
    const Tensor3& stacked_gram() const { return stacked_gram_; }
    double stacked_lipschitz() const { return stacked_lipschitz_; }

private:
    Tensor3 gram_;         // K x K x T
    Tensor3 stacked_gram_; // K x K x 1, sum over channels
    double lipschitz_ = 0.0;
    double stacked_lipschitz_ = 0.0;
};

/// Generic quadratic-plus-regularizer solve:
///     minimize F(x) = 1/2 sum_t x_t' A_t x_t - sum_t b_t' x_t + data_const
///                     + lambda g(x)
/// with the gradient A x - b, constant step 1/L. `data_const` only shifts
/// reported objectives (pass 1/2 ||y||_F^2 to make them equal the true F).
/// Dictionary-learning code updates call this directly with augmented A, b.
Tensor3 fista_solve(const Tensor3& A, const Tensor3& b, double L, double data_const,
                    const SolverConfig& cfg, const Tensor3* x_init = nullptr,
                    SolveTrace* trace = nullptr);

/// Algorithm entry point: code y against D under cfg. CC mode is handled by
/// collapsing the channels into one stacked single-channel problem and
/// replicating the solution tube-wise. Default x_init is the zero tensor.
Tensor3 tensor_sparse_code(const Tensor3& y, const Tensor3& D, const GramCache& gram,
                           const SolverConfig& cfg, const Tensor3* x_init = nullptr,
                           SolveTrace* trace = nullptr);
Tensor3 tensor_sparse_code(const Tensor3& y, const Tensor3& D, const SolverConfig& cfg,
                           const Tensor3* x_init = nullptr, SolveTrace* trace = nullptr);

} // namespace tsrc
