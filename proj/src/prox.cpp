#include "tsrc/prox.hpp"

#include <algorithm>
#include <cmath>

namespace tsrc {

const char* to_string(SparsityMode m) {
    switch (m) {
        case SparsityMode::CR: return "CR";
        case SparsityMode::CC: return "CC";
        case SparsityMode::SM: return "SM";
        case SparsityMode::GT: return "GT";
    }
    return "?";
}

SparsityMode sparsity_mode_from_string(const std::string& s) {
    if (s == "CR" || s == "cr") return SparsityMode::CR;
    if (s == "CC" || s == "cc") return SparsityMode::CC;
    if (s == "SM" || s == "sm") return SparsityMode::SM;
    if (s == "GT" || s == "gt") return SparsityMode::GT;
    throw ConfigError("unknown sparsity mode: " + s);
}

void ProxSpec::validate_for_apply() const {
    if (!(eta > 0.0)) throw ConfigError("ProxSpec: eta must be > 0");
    if ((mode == SparsityMode::GT) != partition.has_value())
        throw ConfigError("ProxSpec: partition must be present exactly for GT");
}

Tensor3 prox_l1(const Tensor3& U, double eta) {
    Tensor3 X = U;
    for (double& v : X.data()) {
        double a = std::abs(v) - eta;
        v = a > 0.0 ? (v > 0.0 ? a : -a) : 0.0;
    }
    return X;
}

namespace {

// Scale each tube/block by max(1 - eta/norm, 0); the clamp maps zero-norm
// blocks to zero without dividing by zero.
inline double shrink_factor(double norm, double eta) {
    return norm > eta ? 1.0 - eta / norm : 0.0;
}

Tensor3 clamp_nonneg(const Tensor3& U) {
    Tensor3 X = U;
    for (double& v : X.data()) v = std::max(v, 0.0);
    return X;
}

} // namespace

Tensor3 prox_tube_l2(const Tensor3& U, double eta) {
    Eigen::VectorXd norms = tube_l2_norms(U);
    Tensor3 X = U;
    for (Index t = 0; t < X.channels(); ++t)
        for (Index k = 0; k < X.rows(); ++k) X(k, 0, t) *= shrink_factor(norms[k], eta);
    return X;
}

Tensor3 prox_group_l2(const Tensor3& U, double eta, const ColumnPartition& part) {
    Eigen::VectorXd norms = group_l2_norms(U, part);
    Tensor3 X = U;
    for (Index b = 0; b < part.num_blocks(); ++b) {
        double f = shrink_factor(norms[b], eta);
        ColumnRange r = part.block(b);
        for (Index t = 0; t < X.channels(); ++t)
            for (Index k = r.offset; k < r.offset + r.width; ++k) X(k, 0, t) *= f;
    }
    return X;
}

Tensor3 prox_nonneg(const Tensor3& U, double eta, SparsityMode mode, const ColumnPartition* part) {
    switch (mode) {
        case SparsityMode::CR:
        case SparsityMode::CC: {
            Tensor3 X = U;
            for (double& v : X.data()) v = std::max(v - eta, 0.0);
            return X;
        }
        case SparsityMode::SM:
            return prox_tube_l2(clamp_nonneg(U), eta);
        case SparsityMode::GT:
            if (!part) throw ConfigError("prox_nonneg: GT requires a partition");
            return prox_group_l2(clamp_nonneg(U), eta, *part);
    }
    throw ConfigError("prox_nonneg: bad mode");
}

Tensor3 apply_prox(const Tensor3& U, const ProxSpec& spec) {
    spec.validate_for_apply();
    if (spec.nonneg)
        return prox_nonneg(U, spec.eta, spec.mode,
                           spec.partition ? &*spec.partition : nullptr);
    switch (spec.mode) {
        case SparsityMode::CR:
        case SparsityMode::CC: return prox_l1(U, spec.eta);
        case SparsityMode::SM: return prox_tube_l2(U, spec.eta);
        case SparsityMode::GT: return prox_group_l2(U, spec.eta, *spec.partition);
    }
    throw ConfigError("apply_prox: bad mode");
}

double regularizer_value(const Tensor3& X, const ProxSpec& spec) {
    switch (spec.mode) {
        case SparsityMode::CR: return X.l1_norm();
        case SparsityMode::CC: {
            // the code is replicated across channels; count it once
            double s = 0.0;
            for (Index k = 0; k < X.rows(); ++k)
                for (Index c = 0; c < X.cols(); ++c) s += std::abs(X(k, c, 0));
            return s;
        }
        case SparsityMode::SM: return tube_l2_norms(X).sum();
        case SparsityMode::GT: return group_l2_norms(X, *spec.partition).sum();
    }
    throw ConfigError("regularizer_value: bad mode");
}

} // namespace tsrc
