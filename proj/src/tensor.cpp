#include "tsrc/tensor.hpp"

#include <cmath>
#include <string>

namespace tsrc {

double Tensor3::frobenius_norm() const { return std::sqrt(squared_frobenius_norm()); }

Tensor3& Tensor3::operator+=(const Tensor3& o) {
    if (!same_shape(o)) throw ShapeError("Tensor3 +=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) {
    if (!same_shape(o)) throw ShapeError("Tensor3 -=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

Tensor3 channelwise_matmul(const Tensor3& M, const Tensor3& N) {
    if (M.channels() != N.channels())
        throw ShapeError("channelwise_matmul: channel counts differ (" +
                         std::to_string(M.channels()) + " vs " + std::to_string(N.channels()) + ")");
    if (M.cols() != N.rows())
        throw ShapeError("channelwise_matmul: inner dimensions differ (lhs cols " +
                         std::to_string(M.cols()) + " vs rhs rows " + std::to_string(N.rows()) + ")");
    Tensor3 P(M.rows(), N.cols(), M.channels());
    for (Index t = 0; t < M.channels(); ++t)
        P.channel(t).noalias() = M.channel(t) * N.channel(t);
    return P;
}

Eigen::VectorXd tube_l2_norms(const Tensor3& X) {
    if (X.cols() != 1) throw ShapeError("tube_l2_norms: tensor must have exactly one column");
    Eigen::VectorXd n = Eigen::VectorXd::Zero(X.rows());
    for (Index t = 0; t < X.channels(); ++t)
        for (Index k = 0; k < X.rows(); ++k) {
            double v = X(k, 0, t);
            n[k] += v * v;
        }
    return n.cwiseSqrt();
}

Eigen::VectorXd group_l2_norms(const Tensor3& X, const ColumnPartition& part) {
    if (X.cols() != 1) throw ShapeError("group_l2_norms: tensor must have exactly one column");
    if (part.total() != X.rows())
        throw ShapeError("group_l2_norms: partition totals " + std::to_string(part.total()) +
                         " but code has " + std::to_string(X.rows()) + " rows");
    Eigen::VectorXd n(part.num_blocks());
    for (Index b = 0; b < part.num_blocks(); ++b) {
        ColumnRange r = part.block(b);
        double s = 0.0;
        for (Index t = 0; t < X.channels(); ++t)
            for (Index k = r.offset; k < r.offset + r.width; ++k) {
                double v = X(k, 0, t);
                s += v * v;
            }
        n[b] = std::sqrt(s);
    }
    return n;
}

Tensor3 circular_shift_columns(const Tensor3& M, ColumnRange block, Index shift) {
    if (block.offset < 0 || block.width < 1 || block.offset + block.width > M.cols())
        throw ShapeError("circular_shift_columns: block [" + std::to_string(block.offset) + ", " +
                         std::to_string(block.offset + block.width) + ") outside 0.." +
                         std::to_string(M.cols()));
    Index w = block.width;
    Index s = ((shift % w) + w) % w;
    Tensor3 out = M;
    if (s == 0) return out;
    for (Index t = 0; t < M.channels(); ++t) {
        auto src = M.channel(t);
        auto dst = out.channel(t);
        for (Index j = 0; j < w; ++j) {
            Index to = (j - s + w) % w;
            dst.col(block.offset + to) = src.col(block.offset + j);
        }
    }
    return out;
}

Tensor3 select_channels(const Tensor3& X, const std::vector<Index>& channels) {
    if (channels.empty()) throw ShapeError("select_channels: empty channel list");
    Tensor3 out(X.rows(), X.cols(), static_cast<Index>(channels.size()));
    for (std::size_t i = 0; i < channels.size(); ++i) {
        Index t = channels[i];
        if (t < 0 || t >= X.channels())
            throw ShapeError("select_channels: channel " + std::to_string(t) + " out of range");
        out.channel(static_cast<Index>(i)) = X.channel(t);
    }
    return out;
}

Tensor3 stack_channels(const std::vector<Tensor3>& parts) {
    if (parts.empty()) throw ShapeError("stack_channels: nothing to stack");
    Index total = 0;
    for (const Tensor3& p : parts) {
        if (p.rows() != parts[0].rows() || p.cols() != parts[0].cols())
            throw ShapeError("stack_channels: parts have different rows/cols");
        total += p.channels();
    }
    Tensor3 out(parts[0].rows(), parts[0].cols(), total);
    Index t0 = 0;
    for (const Tensor3& p : parts) {
        for (Index t = 0; t < p.channels(); ++t) out.channel(t0 + t) = p.channel(t);
        t0 += p.channels();
    }
    return out;
}

Tensor3 flatten_to_signal(const Tensor3& image) {
    Tensor3 out(image.rows() * image.cols(), 1, image.channels());
    for (Index t = 0; t < image.channels(); ++t) {
        auto src = image.channel(t);
        auto dst = out.channel(t);
        // column-major vectorization; the storage layout makes this a straight copy
        dst.col(0) = Eigen::Map<const Eigen::VectorXd>(src.data(), src.size());
    }
    return out;
}

} // namespace tsrc
