#include "tsrc/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace tsrc {

namespace {

void write_u64le(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64le(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw DataError("tensor container: truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

static_assert(sizeof(double) == 8, "payload assumes 64-bit IEEE doubles");

} // namespace

void save_tensor(std::ostream& out, const Tensor3& t) {
    write_u64le(out, static_cast<std::uint64_t>(t.rows()));
    write_u64le(out, static_cast<std::uint64_t>(t.cols()));
    write_u64le(out, static_cast<std::uint64_t>(t.channels()));
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(t.data().data()),
                  static_cast<std::streamsize>(t.data().size() * sizeof(double)));
    } else {
        for (double v : t.data()) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, 8);
            write_u64le(out, bits);
        }
    }
    if (!out) throw DataError("tensor container: write failed");
}

void save_tensor(const std::filesystem::path& path, const Tensor3& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path.string());
    save_tensor(f, t);
}

Tensor3 load_tensor(std::istream& in) {
    std::uint64_t rows = read_u64le(in);
    std::uint64_t cols = read_u64le(in);
    std::uint64_t channels = read_u64le(in);
    if (rows < 1 || cols < 1 || channels < 1 || rows * cols * channels > (1ull << 32))
        throw DataError("tensor container: implausible shape header");
    Tensor3 t(static_cast<Index>(rows), static_cast<Index>(cols), static_cast<Index>(channels));
    if constexpr (std::endian::native == std::endian::little) {
        in.read(reinterpret_cast<char*>(t.data().data()),
                static_cast<std::streamsize>(t.data().size() * sizeof(double)));
        if (!in) throw DataError("tensor container: truncated payload");
    } else {
        for (double& v : t.data()) {
            std::uint64_t bits = read_u64le(in);
            std::memcpy(&v, &bits, 8);
        }
    }
    return t;
}

Tensor3 load_tensor(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for reading: " + path.string());
    return load_tensor(f);
}

} // namespace tsrc
