#include "tsrc/classifier.hpp"

#include <cmath>

namespace tsrc {

void normalize_columns_per_channel(Tensor3& D) {
    for (Index t = 0; t < D.channels(); ++t) {
        auto ch = D.channel(t);
        for (Index k = 0; k < D.cols(); ++k) {
            double n = ch.col(k).norm();
            if (n > 0.0) ch.col(k) /= n;
        }
    }
}

StructuredDictionary assemble_dictionary(const LabeledSamples& training) {
    const Index C = static_cast<Index>(training.class_names.size());
    if (C < 1) throw ShapeError("assemble_dictionary: no classes");
    if (static_cast<Index>(training.class_samples.size()) != C)
        throw ShapeError("assemble_dictionary: class_names/class_samples size mismatch");
    if (!training.is_confuser.empty() &&
        static_cast<Index>(training.is_confuser.size()) != C)
        throw ShapeError("assemble_dictionary: is_confuser size mismatch");

    const Tensor3* first = nullptr;
    std::vector<Index> sizes;
    sizes.reserve(static_cast<std::size_t>(C));
    for (Index c = 0; c < C; ++c) {
        const auto& samples = training.class_samples[static_cast<std::size_t>(c)];
        if (samples.empty())
            throw ShapeError("assemble_dictionary: class '" +
                             training.class_names[static_cast<std::size_t>(c)] + "' has no samples");
        sizes.push_back(static_cast<Index>(samples.size()));
        if (!first) first = &samples.front();
    }
    for (Index c = 0; c < C; ++c)
        for (const Tensor3& s : training.class_samples[static_cast<std::size_t>(c)])
            if (s.rows() != first->rows() || s.cols() != 1 || s.channels() != first->channels())
                throw ShapeError("assemble_dictionary: inconsistent sample shape in class '" +
                                 training.class_names[static_cast<std::size_t>(c)] + "'");
    for (const Tensor3& s : training.ground_samples)
        if (s.rows() != first->rows() || s.cols() != 1 || s.channels() != first->channels())
            throw ShapeError("assemble_dictionary: inconsistent ground sample shape");

    ColumnPartition part(sizes, static_cast<Index>(training.ground_samples.size()));

    StructuredDictionary dict;
    dict.partition = part;
    dict.class_names = training.class_names;
    dict.is_confuser = training.is_confuser.empty()
                           ? std::vector<bool>(static_cast<std::size_t>(C), false)
                           : training.is_confuser;
    dict.D = Tensor3(first->rows(), part.total(), first->channels());

    Index col = 0;
    for (Index c = 0; c < C; ++c)
        for (const Tensor3& s : training.class_samples[static_cast<std::size_t>(c)]) {
            for (Index t = 0; t < dict.D.channels(); ++t)
                dict.D.channel(t).col(col) = s.channel(t).col(0);
            ++col;
        }
    for (const Tensor3& s : training.ground_samples) {
        for (Index t = 0; t < dict.D.channels(); ++t)
            dict.D.channel(t).col(col) = s.channel(t).col(0);
        ++col;
    }
    normalize_columns_per_channel(dict.D);
    return dict;
}

const char* to_string(ConfuserRule r) {
    switch (r) {
        case ConfuserRule::None: return "none";
        case ConfuserRule::UnseenObject: return "unseen-object";
        case ConfuserRule::Ground: return "ground";
        case ConfuserRule::SharedDominant: return "shared-dominant";
        case ConfuserRule::KnownConfuser: return "known-confuser";
    }
    return "?";
}

std::string ClassDecision::label(const StructuredDictionary& dict) const {
    if (confuser) return "confuser";
    return dict.class_names[static_cast<std::size_t>(best_class)];
}

Tensor3 block_reconstruction(const StructuredDictionary& dict, const Tensor3& x, ColumnRange block) {
    Tensor3 out(dict.D.rows(), 1, dict.D.channels());
    if (block.width == 0) return out;
    for (Index t = 0; t < dict.D.channels(); ++t)
        out.channel(t).col(0).noalias() =
            dict.D.channel(t).middleCols(block.offset, block.width) *
            x.channel(t).col(0).segment(block.offset, block.width);
    return out;
}

SolverConfig config_for_dictionary(SolverConfig cfg, const StructuredDictionary& dict) {
    if (cfg.prox.mode == SparsityMode::GT)
        cfg.prox.partition = dict.partition;
    else
        cfg.prox.partition.reset();
    return cfg;
}

ClassDecision classify(const Tensor3& y, const StructuredDictionary& dict, const GramCache& gram,
                       const SolverConfig& cfg_in, const ClassifierOptions& opt) {
    if (y.rows() != dict.D.rows() || y.cols() != 1 || y.channels() != dict.D.channels())
        throw ShapeError("classify: sample shape does not match dictionary");

    SolverConfig cfg = config_for_dictionary(cfg_in, dict);
    Tensor3 x = tensor_sparse_code(y, dict.D, gram, cfg);

    const Index C = dict.num_classes();
    ClassDecision dec;
    dec.residuals.resize(C);

    Tensor3 ybar = y;
    Tensor3 shared_part(y.rows(), 1, y.channels());
    if (dict.partition.has_shared()) {
        shared_part = block_reconstruction(dict, x, dict.partition.shared_block());
        ybar -= shared_part;
    }
    dec.shared_energy = shared_part.frobenius_norm();
    dec.ybar_norm = ybar.frobenius_norm();

    for (Index c = 0; c < C; ++c) {
        Tensor3 rec = block_reconstruction(dict, x, dict.partition.class_block(c));
        dec.residuals[c] = (ybar - rec).frobenius_norm();
    }
    dec.residuals.minCoeff(&dec.best_class);

    // code-energy split for the shared-dominant rule
    double shared_code = 0.0, class_code = 0.0;
    if (dict.partition.has_shared()) {
        ColumnRange r = dict.partition.shared_block();
        for (Index t = 0; t < x.channels(); ++t)
            shared_code += x.channel(t).col(0).segment(r.offset, r.width).squaredNorm();
    }
    for (Index c = 0; c < C; ++c) {
        ColumnRange r = dict.partition.class_block(c);
        for (Index t = 0; t < x.channels(); ++t)
            class_code += x.channel(t).col(0).segment(r.offset, r.width).squaredNorm();
    }
    dec.shared_code_energy = shared_code;
    dec.class_code_energy = class_code;

    if (dec.residuals[dec.best_class] > opt.tau) {
        dec.confuser = true;
        dec.rule = ConfuserRule::UnseenObject;
    } else if (dec.ybar_norm < opt.eps) {
        dec.confuser = true;
        dec.rule = ConfuserRule::Ground;
    } else if (opt.shared_dominant_rule && shared_code > class_code) {
        dec.confuser = true;
        dec.rule = ConfuserRule::SharedDominant;
    } else if (dict.is_confuser[static_cast<std::size_t>(dec.best_class)]) {
        dec.confuser = true;
        dec.rule = ConfuserRule::KnownConfuser;
    }
    return dec;
}

ClassDecision classify(const Tensor3& y, const StructuredDictionary& dict,
                       const SolverConfig& cfg, const ClassifierOptions& opt) {
    GramCache gram(dict.D);
    return classify(y, dict, gram, cfg, opt);
}

Decomposition denoise(const Tensor3& y, const StructuredDictionary& dict, const GramCache& gram,
                      const SolverConfig& cfg_in) {
    if (!dict.partition.has_shared())
        throw ShapeError("denoise: dictionary has an empty shared block");
    if (y.rows() != dict.D.rows() || y.cols() != 1 || y.channels() != dict.D.channels())
        throw ShapeError("denoise: sample shape does not match dictionary");

    SolverConfig cfg = config_for_dictionary(cfg_in, dict);
    Tensor3 x = tensor_sparse_code(y, dict.D, gram, cfg);

    Decomposition dec;
    dec.ground = block_reconstruction(dict, x, dict.partition.shared_block());
    dec.clean = Tensor3(y.rows(), 1, y.channels());
    for (Index c = 0; c < dict.num_classes(); ++c)
        dec.clean += block_reconstruction(dict, x, dict.partition.class_block(c));
    return dec;
}

Decomposition denoise(const Tensor3& y, const StructuredDictionary& dict, const SolverConfig& cfg) {
    GramCache gram(dict.D);
    return denoise(y, dict, gram, cfg);
}

} // namespace tsrc
