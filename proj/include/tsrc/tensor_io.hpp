#pragma once

#include <filesystem>
#include <iosfwd>

#include "tsrc/tensor.hpp"

namespace tsrc {

/// Binary tensor container: a 24-byte shape header (rows, cols, channels as
/// 64-bit little-endian unsigned integers) followed by the payload as 64-bit
/// little-endian IEEE doubles in channel-major order, column-major within
/// each channel. The format is what dataset files and learned-dictionary
/// files store on disk.
void save_tensor(std::ostream& out, const Tensor3& t);
void save_tensor(const std::filesystem::path& path, const Tensor3& t);

Tensor3 load_tensor(std::istream& in);
Tensor3 load_tensor(const std::filesystem::path& path);

} // namespace tsrc
