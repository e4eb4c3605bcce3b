#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

#include "tsrc/errors.hpp"

namespace tsrc {

using Index = Eigen::Index;

/// Third-order tensor of shape rows x cols x channels, the container every
/// other module is built on. Signals are d x 1 x T, dictionaries d x K x T,
/// codes K x 1 x T.
///
/// Storage is channel-major: each channel is a contiguous column-major
/// d x n matrix, so per-channel work maps onto ordinary dense algebra.
/// Values are treated as immutable once constructed; construction and
/// mutation are single-owner, after which sharing read-only across threads
/// is safe.
class Tensor3 {
public:
    Tensor3() = default;

    Tensor3(Index rows, Index cols, Index channels)
        : rows_(rows), cols_(cols), channels_(channels),
          data_(static_cast<std::size_t>(rows * cols * channels), 0.0) {
        if (rows < 1 || cols < 1 || channels < 1)
            throw ShapeError("Tensor3: all dimensions must be >= 1");
    }

    static Tensor3 zeros(Index rows, Index cols, Index channels) {
        return Tensor3(rows, cols, channels);
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index channels() const { return channels_; }
    Index size() const { return rows_ * cols_ * channels_; }
    bool empty() const { return data_.empty(); }

    bool same_shape(const Tensor3& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && channels_ == o.channels_;
    }

    double& operator()(Index r, Index c, Index t) {
        return data_[static_cast<std::size_t>((t * cols_ + c) * rows_ + r)];
    }
    double operator()(Index r, Index c, Index t) const {
        return data_[static_cast<std::size_t>((t * cols_ + c) * rows_ + r)];
    }

    using ChannelMap = Eigen::Map<Eigen::MatrixXd>;
    using ConstChannelMap = Eigen::Map<const Eigen::MatrixXd>;

    ChannelMap channel(Index t) {
        return ChannelMap(data_.data() + t * rows_ * cols_, rows_, cols_);
    }
    ConstChannelMap channel(Index t) const {
        return ConstChannelMap(data_.data() + t * rows_ * cols_, rows_, cols_);
    }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    double squared_frobenius_norm() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return s;
    }
    double frobenius_norm() const;
    double l1_norm() const {
        double s = 0.0;
        for (double v : data_) s += std::abs(v);
        return s;
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }
    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    Tensor3& operator+=(const Tensor3& o);
    Tensor3& operator-=(const Tensor3& o);
    Tensor3& operator*=(double a) {
        for (double& v : data_) v *= a;
        return *this;
    }

    friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
    friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
    friend Tensor3 operator*(double a, Tensor3 t) { return t *= a; }

private:
    Index rows_ = 0, cols_ = 0, channels_ = 0;
    std::vector<double> data_;
};

/// Contiguous column range [offset, offset + width) inside a dictionary.
struct ColumnRange {
    Index offset = 0;
    Index width = 0;
};

/// Column partition of a structured dictionary: class blocks 1..C in order,
/// followed by an optional shared block (label 0) holding ground atoms.
/// Block sizes must sum to the dictionary column count K.
class ColumnPartition {
public:
    ColumnPartition() = default;

    ColumnPartition(std::vector<Index> class_sizes, Index shared_size)
        : class_sizes_(std::move(class_sizes)), shared_size_(shared_size) {
        if (shared_size_ < 0)
            throw ShapeError("ColumnPartition: shared block size must be >= 0");
        for (Index s : class_sizes_)
            if (s < 1) throw ShapeError("ColumnPartition: class block sizes must be >= 1");
    }

    Index num_classes() const { return static_cast<Index>(class_sizes_.size()); }
    bool has_shared() const { return shared_size_ > 0; }
    Index shared_size() const { return shared_size_; }
    Index class_size(Index c) const { return class_sizes_[static_cast<std::size_t>(c)]; }

    Index total() const {
        Index k = shared_size_;
        for (Index s : class_sizes_) k += s;
        return k;
    }

    /// Column range of class block c (0-based class index).
    ColumnRange class_block(Index c) const {
        if (c < 0 || c >= num_classes())
            throw ShapeError("ColumnPartition: class index out of range");
        Index off = 0;
        for (Index i = 0; i < c; ++i) off += class_sizes_[static_cast<std::size_t>(i)];
        return {off, class_sizes_[static_cast<std::size_t>(c)]};
    }

    /// Column range of the shared block (width 0 when absent).
    ColumnRange shared_block() const {
        Index off = 0;
        for (Index s : class_sizes_) off += s;
        return {off, shared_size_};
    }

    /// Blocks in storage order: classes 0..C-1, then the shared block if present.
    Index num_blocks() const { return num_classes() + (has_shared() ? 1 : 0); }
    ColumnRange block(Index i) const {
        if (i < num_classes()) return class_block(i);
        if (i == num_classes() && has_shared()) return shared_block();
        throw ShapeError("ColumnPartition: block index out of range");
    }

    bool operator==(const ColumnPartition& o) const {
        return class_sizes_ == o.class_sizes_ && shared_size_ == o.shared_size_;
    }

private:
    std::vector<Index> class_sizes_;
    Index shared_size_ = 0;
};

/// Channel-wise product: output channel t is M^(t) * N^(t).
Tensor3 channelwise_matmul(const Tensor3& M, const Tensor3& N);

/// Per-row Euclidean norms across channels of a one-column code tensor:
/// entry k is ||(X(k,0,0), ..., X(k,0,T-1))||_2.
Eigen::VectorXd tube_l2_norms(const Tensor3& X);

/// Per-block Euclidean norms of a one-column code tensor, over all entries of
/// each partition block across all channels. One entry per block, in block
/// order (classes, then shared).
Eigen::VectorXd group_l2_norms(const Tensor3& X, const ColumnPartition& part);

/// Rotate the columns of one block left by `shift` (column j moves to
/// (j - shift) mod width within the block); columns outside are unchanged.
/// Negative shifts rotate right. `shift` is taken modulo the block width.
Tensor3 circular_shift_columns(const Tensor3& M, ColumnRange block, Index shift);

/// Copy of X restricted to the given channel indices (in the given order).
Tensor3 select_channels(const Tensor3& X, const std::vector<Index>& channels);

/// Concatenate tensors of identical rows x cols along the channel axis.
Tensor3 stack_channels(const std::vector<Tensor3>& parts);

/// Reshape a rows x cols x T image tensor to a (rows*cols) x 1 x T signal.
/// Pixels are vectorized column-major within each channel.
Tensor3 flatten_to_signal(const Tensor3& image);

} // namespace tsrc
