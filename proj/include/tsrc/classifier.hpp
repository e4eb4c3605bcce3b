#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsrc/fista.hpp"
#include "tsrc/tensor.hpp"

namespace tsrc {

/// Labeled training material: per-class sample lists plus ground samples for
/// the shared block. Classes flagged as confusers keep their own block but
/// map to the confuser verdict at decision time.
struct LabeledSamples {
    std::vector<std::string> class_names;
    std::vector<std::vector<Tensor3>> class_samples; // each sample d x 1 x T
    std::vector<bool> is_confuser;                   // per class; empty = all false
    std::vector<Tensor3> ground_samples;             // shared block (may be empty)
};

/// Total dictionary [D_1 ... D_C D_0] with its column partition. Columns are
/// normalized to unit Euclidean norm per channel at assembly (zero columns
/// are left as-is).
struct StructuredDictionary {
    Tensor3 D; // d x K x T
    ColumnPartition partition;
    std::vector<std::string> class_names;
    std::vector<bool> is_confuser;

    Index num_classes() const { return partition.num_classes(); }
    Index signal_dim() const { return D.rows(); }
    Index channels() const { return D.channels(); }
};

StructuredDictionary assemble_dictionary(const LabeledSamples& training);

/// Normalize every column of every channel slice to unit norm in place.
void normalize_columns_per_channel(Tensor3& D);

enum class ConfuserRule { None, UnseenObject, Ground, SharedDominant, KnownConfuser };
const char* to_string(ConfuserRule r);

struct ClassDecision {
    bool confuser = false;
    Index best_class = -1;         // argmin_c r_c (valid whenever C >= 1)
    ConfuserRule rule = ConfuserRule::None;
    Eigen::VectorXd residuals;     // r_c per class
    double shared_energy = 0.0;    // ||D_0 x^0||_F
    double shared_code_energy = 0.0;   // ||vec(x^0)||_2^2
    double class_code_energy = 0.0;    // sum over class blocks of ||vec(x^c)||_2^2
    double ybar_norm = 0.0;        // ||y - D_0 x^0||_F

    std::string label(const StructuredDictionary& dict) const;
};

struct ClassifierOptions {
    double eps = 0.0;  // ground threshold: confuser when ||ybar|| < eps
    double tau = 1e30; // unseen-object threshold: confuser when min_c r_c > tau
    // When set, a code whose shared-block energy exceeds the combined class
    // energy is rejected as a confuser; turn off for the strict two-branch
    // decision rule.
    bool shared_dominant_rule = true;
};

/// Sparse-code y against the dictionary, strip the shared contribution,
/// score per-class residuals r_c (root of summed squared per-channel
/// residuals) and decide: unseen object (min residual above tau), ground
/// (residual signal below eps), shared-dominant code, known-confuser class,
/// or the argmin class.
ClassDecision classify(const Tensor3& y, const StructuredDictionary& dict, const GramCache& gram,
                       const SolverConfig& cfg, const ClassifierOptions& opt);
ClassDecision classify(const Tensor3& y, const StructuredDictionary& dict,
                       const SolverConfig& cfg, const ClassifierOptions& opt);

struct Decomposition {
    Tensor3 clean;  // object part: sum of class-block reconstructions
    Tensor3 ground; // shared-block reconstruction
};

/// Decompose y into an object part and a ground part via one sparse coding
/// pass; clean + ground equals the full reconstruction D x. Requires a
/// nonempty shared block.
Decomposition denoise(const Tensor3& y, const StructuredDictionary& dict, const GramCache& gram,
                      const SolverConfig& cfg);
Decomposition denoise(const Tensor3& y, const StructuredDictionary& dict, const SolverConfig& cfg);

/// Reconstruction of one partition block: D_block x^block.
Tensor3 block_reconstruction(const StructuredDictionary& dict, const Tensor3& x, ColumnRange block);

/// cfg with the partition slot filled for GT solves against this dictionary.
SolverConfig config_for_dictionary(SolverConfig cfg, const StructuredDictionary& dict);

} // namespace tsrc
