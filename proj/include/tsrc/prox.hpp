#pragma once

#include <optional>
#include <string>

#include "tsrc/tensor.hpp"

namespace tsrc {

/// Structured-sparsity families for the code tensor.
///   CR: per-channel l1 (independent coding per channel, cumulative residuals)
///   CC: l1 on the channel-concatenated vector (one code shared by all channels)
///   SM: l1,2 over tubes (rows active across all channels simultaneously)
///   GT: l2 over class blocks (few active dictionary blocks)
enum class SparsityMode { CR, CC, SM, GT };

const char* to_string(SparsityMode m);
SparsityMode sparsity_mode_from_string(const std::string& s);

/// Which regularizer and proximal operator a solve uses. `eta` is the
/// effective threshold lambda / L and is filled in by the solver per step.
/// `partition` is required exactly for GT.
struct ProxSpec {
    SparsityMode mode = SparsityMode::SM;
    bool nonneg = false;
    double eta = 0.0;
    std::optional<ColumnPartition> partition;

    void validate_for_apply() const;
};

/// Elementwise soft threshold sign(u) * max(|u| - eta, 0).
Tensor3 prox_l1(const Tensor3& U, double eta);

/// Per-tube block soft threshold: tube k scaled by max(1 - eta/||tube||, 0).
/// Tubes with norm <= eta become exactly zero; zero tubes stay zero.
Tensor3 prox_tube_l2(const Tensor3& U, double eta);

/// Per-block soft threshold over partition blocks (classes and shared).
Tensor3 prox_group_l2(const Tensor3& U, double eta, const ColumnPartition& part);

/// Non-negative variants. CR/CC: max(u - eta, 0) elementwise, the exact prox
/// of l1 plus the non-negativity indicator. SM/GT: clamp to the non-negative
/// orthant, then apply the matching block shrinkage.
Tensor3 prox_nonneg(const Tensor3& U, double eta, SparsityMode mode,
                    const ColumnPartition* part = nullptr);

/// Dispatch on a full ProxSpec (uses spec.eta).
Tensor3 apply_prox(const Tensor3& U, const ProxSpec& spec);

/// Value of the regularizer g(X) for the given mode (without the lambda
/// factor and without non-negativity indicators; call sites keep iterates
/// feasible). For CC this is the l1 norm of one channel of the replicated
/// code, i.e. the l1 norm of the underlying shared code vector.
double regularizer_value(const Tensor3& X, const ProxSpec& spec);

} // namespace tsrc
