#pragma once

#include <cstdint>

#include "tsrc/classifier.hpp"

namespace tsrc {

/// Discriminative multi-channel dictionary learning: a per-channel fidelity
/// (global fit, within-class fit, cross-class suppression, optional quadratic
/// code-regularity term) joined across channels by one of the structured
/// sparsity regularizers, trained by alternating minimization.
struct DictLearnConfig {
    Index atoms_per_class = 8;
    double lambda = 0.05;
    double discriminant_weight = 0.0; // quadratic code-regularity weight
    int outer_iters = 10;
    SparsityMode sparsity_mode = SparsityMode::SM;
    bool nonneg = false;
    std::uint64_t seed = 0;

    // inner sparse-coding solves
    int coding_max_iters = 200;
    double coding_tol = 1e-8;

    // Ground atoms stay fixed at the raw (normalized) samples unless set.
    bool learn_shared = false;

    void validate() const {
        if (atoms_per_class < 1) throw ConfigError("DictLearnConfig: atoms_per_class must be >= 1");
        if (outer_iters < 1) throw ConfigError("DictLearnConfig: outer_iters must be >= 1");
        if (!(lambda > 0.0)) throw ConfigError("DictLearnConfig: lambda must be > 0");
        if (discriminant_weight < 0.0)
            throw ConfigError("DictLearnConfig: discriminant_weight must be >= 0");
    }
};

/// Codes for every training sample, mirroring LabeledSamples::class_samples.
using CodeSet = std::vector<std::vector<Tensor3>>;

struct LearnTrace {
    std::vector<double> objectives; // J after each outer iteration
};

/// Alternate sparse coding (warm-started) with per-channel
/// block-coordinate atom updates. Atoms keep unit per-channel norm; the
/// tracked objective is non-increasing across outer iterations.
StructuredDictionary learn(const LabeledSamples& training, const DictLearnConfig& cfg,
                           LearnTrace* trace = nullptr, CodeSet* codes_out = nullptr,
                           const StructuredDictionary* init = nullptr);

/// Seeded initialization: atoms are randomly chosen training samples of each
/// class, normalized; ground atoms are the raw ground samples.
StructuredDictionary init_dictionary(const LabeledSamples& training, const DictLearnConfig& cfg);

/// The learning objective J(D, X) for given codes.
double objective(const StructuredDictionary& dict, const CodeSet& X,
                 const LabeledSamples& training, const DictLearnConfig& cfg);

} // namespace tsrc
