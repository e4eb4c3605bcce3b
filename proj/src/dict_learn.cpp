#include "tsrc/dict_learn.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace tsrc {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 step over seed ^ golden-ratio multiples of the stream id
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<Index> sample_without_replacement(Index population, Index count, std::mt19937_64& rng) {
    std::vector<Index> idx(static_cast<std::size_t>(population));
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index i = 0; i < count; ++i) {
        Index j = i + static_cast<Index>(rng() % static_cast<std::uint64_t>(population - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(count));
    return idx;
}

ProxSpec make_prox(const DictLearnConfig& cfg, const ColumnPartition& part) {
    ProxSpec p;
    p.mode = cfg.sparsity_mode;
    p.nonneg = cfg.nonneg;
    if (p.mode == SparsityMode::GT) p.partition = part;
    return p;
}

// Per-sample fidelity: 1/2||y - D x||^2 + 1/2||y - D_c x^c||^2
//                      + 1/2 sum_{j != c} ||D_j x^j||^2 + w/2 ||x||^2.
double sample_fidelity(const StructuredDictionary& dict, const Tensor3& x, const Tensor3& y,
                       Index class_index, double w) {
    const ColumnPartition& part = dict.partition;
    double f = 0.0;
    for (Index t = 0; t < dict.D.channels(); ++t) {
        auto Dt = dict.D.channel(t);
        auto xt = x.channel(t).col(0);
        auto yt = y.channel(t).col(0);
        f += 0.5 * (yt - Dt * xt).squaredNorm();
        for (Index b = 0; b < part.num_blocks(); ++b) {
            ColumnRange r = part.block(b);
            Eigen::VectorXd rec = Dt.middleCols(r.offset, r.width) * xt.segment(r.offset, r.width);
            if (b == class_index)
                f += 0.5 * (yt - rec).squaredNorm();
            else
                f += 0.5 * rec.squaredNorm();
        }
        f += 0.5 * w * xt.squaredNorm();
    }
    return f;
}

} // namespace

double objective(const StructuredDictionary& dict, const CodeSet& X,
                 const LabeledSamples& training, const DictLearnConfig& cfg) {
    if (X.size() != training.class_samples.size())
        throw ShapeError("objective: code set does not match training classes");
    ProxSpec prox = make_prox(cfg, dict.partition);
    double J = 0.0;
    for (std::size_t c = 0; c < X.size(); ++c) {
        if (X[c].size() != training.class_samples[c].size())
            throw ShapeError("objective: code count mismatch in class " + std::to_string(c));
        for (std::size_t s = 0; s < X[c].size(); ++s) {
            J += sample_fidelity(dict, X[c][s], training.class_samples[c][s],
                                 static_cast<Index>(c), cfg.discriminant_weight);
            J += cfg.lambda * regularizer_value(X[c][s], prox);
        }
    }
    return J;
}

StructuredDictionary init_dictionary(const LabeledSamples& training, const DictLearnConfig& cfg) {
    cfg.validate();
    const Index C = static_cast<Index>(training.class_names.size());
    LabeledSamples atoms;
    atoms.class_names = training.class_names;
    atoms.is_confuser = training.is_confuser;
    atoms.ground_samples = training.ground_samples;
    atoms.class_samples.resize(static_cast<std::size_t>(C));
    for (Index c = 0; c < C; ++c) {
        const auto& samples = training.class_samples[static_cast<std::size_t>(c)];
        if (static_cast<Index>(samples.size()) < cfg.atoms_per_class)
            throw DataError("init_dictionary: class '" +
                            training.class_names[static_cast<std::size_t>(c)] + "' has " +
                            std::to_string(samples.size()) + " samples but " +
                            std::to_string(cfg.atoms_per_class) + " atoms requested");
        std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(c)));
        for (Index i : sample_without_replacement(static_cast<Index>(samples.size()),
                                                  cfg.atoms_per_class, rng))
            atoms.class_samples[static_cast<std::size_t>(c)].push_back(
                samples[static_cast<std::size_t>(i)]);
    }
    return assemble_dictionary(atoms);
}

namespace {

// A_eff = D'D + blockdiag_j(D_j'D_j) + w I per channel; the shared quadratic
// form of every per-sample coding subproblem for the current dictionary.
Tensor3 effective_gram(const StructuredDictionary& dict, double w) {
    const Index K = dict.D.cols();
    Tensor3 A(K, K, dict.D.channels());
    for (Index t = 0; t < dict.D.channels(); ++t) {
        auto Dt = dict.D.channel(t);
        auto At = A.channel(t);
        At.noalias() = Dt.transpose() * Dt;
        for (Index b = 0; b < dict.partition.num_blocks(); ++b) {
            ColumnRange r = dict.partition.block(b);
            auto Db = Dt.middleCols(r.offset, r.width);
            At.block(r.offset, r.offset, r.width, r.width).noalias() += Db.transpose() * Db;
        }
        At.diagonal().array() += w;
    }
    return A;
}

Tensor3 effective_rhs(const StructuredDictionary& dict, const Tensor3& y, Index class_index) {
    const Index K = dict.D.cols();
    Tensor3 b(K, 1, dict.D.channels());
    ColumnRange r = dict.partition.class_block(class_index);
    for (Index t = 0; t < dict.D.channels(); ++t) {
        auto Dt = dict.D.channel(t);
        auto yt = y.channel(t).col(0);
        b.channel(t).col(0).noalias() = Dt.transpose() * yt;
        b.channel(t).col(0).segment(r.offset, r.width).noalias() +=
            Dt.middleCols(r.offset, r.width).transpose() * yt;
    }
    return b;
}

} // namespace

StructuredDictionary learn(const LabeledSamples& training, const DictLearnConfig& cfg,
                           LearnTrace* trace, CodeSet* codes_out,
                           const StructuredDictionary* init) {
    cfg.validate();
    StructuredDictionary dict = init ? *init : init_dictionary(training, cfg);
    const Index K = dict.D.cols();
    const Index T = dict.D.channels();
    const Index d = dict.D.rows();
    const Index C = dict.num_classes();

    FlatTraining flat = flatten(training);
    const Index N = flat.total;

    // flat views of samples and codes, class-ordered
    std::vector<const Tensor3*> ys;
    ys.reserve(static_cast<std::size_t>(N));
    for (const auto& cls : training.class_samples)
        for (const Tensor3& y : cls) ys.push_back(&y);

    CodeSet X(training.class_samples.size());
    for (std::size_t c = 0; c < X.size(); ++c)
        X[c].assign(training.class_samples[c].size(), Tensor3(K, 1, T));

    SolverConfig inner;
    inner.lambda = cfg.lambda;
    inner.max_iters = cfg.coding_max_iters;
    inner.tol = cfg.coding_tol;
    inner.prox = make_prox(cfg, dict.partition);

    if (trace) trace->objectives.clear();

    for (int outer = 0; outer < cfg.outer_iters; ++outer) {
        // ---- code update: per-sample solves against the augmented quadratic
        Tensor3 A = effective_gram(dict, cfg.discriminant_weight);
        double L = 1.01 * max_gram_eigenvalue(A);
        if (!(L > 0.0)) throw NumericalError("learn: degenerate dictionary (zero Gram)");

        if (cfg.sparsity_mode == SparsityMode::CC && T > 1) {
            // stacked single-channel subproblem, replicated back (one shared code)
            Tensor3 A1(K, K, 1);
            A1.channel(0).setZero();
            for (Index t = 0; t < T; ++t) A1.channel(0) += A.channel(t);
            double L1 = 1.01 * max_gram_eigenvalue(A1);
            for (std::size_t c = 0; c < X.size(); ++c)
                for (std::size_t s = 0; s < X[c].size(); ++s) {
                    const Tensor3& y = training.class_samples[c][s];
                    Tensor3 b = effective_rhs(dict, y, static_cast<Index>(c));
                    Tensor3 b1(K, 1, 1);
                    b1.channel(0).setZero();
                    for (Index t = 0; t < T; ++t) b1.channel(0) += b.channel(t);
                    Tensor3 init1(K, 1, 1);
                    init1.channel(0) = X[c][s].channel(0);
                    Tensor3 x1 = fista_solve(A1, b1, L1, y.squared_frobenius_norm(), inner,
                                             &init1, nullptr);
                    for (Index t = 0; t < T; ++t) X[c][s].channel(t) = x1.channel(0);
                }
        } else {
            for (std::size_t c = 0; c < X.size(); ++c)
                for (std::size_t s = 0; s < X[c].size(); ++s) {
                    const Tensor3& y = training.class_samples[c][s];
                    Tensor3 b = effective_rhs(dict, y, static_cast<Index>(c));
                    X[c][s] = fista_solve(A, b, L, y.squared_frobenius_norm(), inner,
                                          &X[c][s], nullptr);
                }
        }

        // ---- dictionary update: block coordinate descent over atoms
        // Build flat code matrix per channel once per sweep.
        for (Index t = 0; t < T; ++t) {
            Eigen::MatrixXd Y(d, N), Xm(K, N);
            {
                Index s = 0;
                for (std::size_t c = 0; c < X.size(); ++c)
                    for (std::size_t i = 0; i < X[c].size(); ++i, ++s) {
                        Y.col(s) = training.class_samples[c][i].channel(t).col(0);
                        Xm.col(s) = X[c][i].channel(t).col(0);
                    }
            }
            auto Dt = dict.D.channel(t);

            Index blocks_to_update = C + (cfg.learn_shared && dict.partition.has_shared() ? 1 : 0);
            for (Index bidx = 0; bidx < blocks_to_update; ++bidx) {
                ColumnRange blk = dict.partition.block(bidx);
                bool is_class_block = bidx < C;
                for (Index k = blk.offset; k < blk.offset + blk.width; ++k) {
                    Eigen::RowVectorXd row = Xm.row(k);
                    double energy = row.squaredNorm();
                    if (energy < 1e-12) {
                        // dead atom: unused by every code, so redirecting it
                        // leaves the objective unchanged
                        if (is_class_block && !training.class_samples.empty()) {
                            Index worst = -1;
                            double worst_err = -1.0;
                            const auto& cls = training.class_samples[static_cast<std::size_t>(bidx)];
                            Index s0 = 0;
                            for (Index c2 = 0; c2 < bidx; ++c2)
                                s0 += static_cast<Index>(
                                    training.class_samples[static_cast<std::size_t>(c2)].size());
                            for (Index i = 0; i < static_cast<Index>(cls.size()); ++i) {
                                double err = (Y.col(s0 + i) - Dt * Xm.col(s0 + i)).squaredNorm();
                                if (err > worst_err) { worst_err = err; worst = s0 + i; }
                            }
                            if (worst >= 0 && Y.col(worst).norm() > 0.0)
                                Dt.col(k) = Y.col(worst).normalized();
                        }
                        continue;
                    }

                    // v accumulates the three fidelity pulls on this atom;
                    // the unit-norm constrained minimizer is v / ||v||
                    Eigen::VectorXd v = Y * row.transpose() - Dt * (Xm * row.transpose()) +
                                        Dt.col(k) * energy;
                    auto Db = Dt.middleCols(blk.offset, blk.width);
                    auto Xb = Xm.middleRows(blk.offset, blk.width);
                    Index s = 0;
                    for (Index c2 = 0; c2 < C; ++c2) {
                        Index n2 = static_cast<Index>(
                            training.class_samples[static_cast<std::size_t>(c2)].size());
                        auto rows = row.segment(s, n2);
                        double e2 = rows.squaredNorm();
                        if (e2 > 0.0) {
                            if (is_class_block && c2 == bidx)
                                v += (Y.middleCols(s, n2) - Db * Xb.middleCols(s, n2)) *
                                         rows.transpose() +
                                     Dt.col(k) * e2;
                            else
                                v += -(Db * Xb.middleCols(s, n2)) * rows.transpose() +
                                     Dt.col(k) * e2;
                        }
                        s += n2;
                    }
                    double vn = v.norm();
                    if (vn > 0.0) Dt.col(k) = v / vn;
                }
            }
        }

        if (trace) trace->objectives.push_back(objective(dict, X, training, cfg));
    }

    if (codes_out) *codes_out = std::move(X);
    return dict;
}

} // namespace tsrc
