#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "gddq/nn/mlp.hpp"

namespace gddq::nn {

// Checkpoint format: magic "GDDQ", format version u32 LE, then per tensor:
// name length (u64 LE), name bytes, rank (u64 LE), dims (u64 LE each),
// values as little-endian IEEE-754 doubles. Round-trips bit-exactly.

namespace detail {
static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

inline void put_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), 8);
}
inline std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    if (!is) throw IoError("checkpoint truncated");
    return v;
}
}  // namespace detail

inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void save_checkpoint(const ParamSet& ps, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open checkpoint for writing: " + path);
    os.write("GDDQ", 4);
    std::uint32_t ver = kCheckpointVersion;
    os.write(reinterpret_cast<const char*>(&ver), 4);
    for (const auto& t : ps.tensors) {
        detail::put_u64(os, t.name.size());
        os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        detail::put_u64(os, 2);  // tensors are matrices
        detail::put_u64(os, static_cast<std::uint64_t>(t.value.rows()));
        detail::put_u64(os, static_cast<std::uint64_t>(t.value.cols()));
        // Eigen default storage is column-major; write row-major order so the
        // layout is part of the format, not of the library.
        for (Eigen::Index r = 0; r < t.value.rows(); ++r)
            for (Eigen::Index c = 0; c < t.value.cols(); ++c) {
                double v = t.value(r, c);
                os.write(reinterpret_cast<const char*>(&v), 8);
            }
    }
    if (!os) throw IoError("failed writing checkpoint: " + path);
}

inline ParamSet load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open checkpoint: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "GDDQ", 4) != 0)
        throw IoError("bad checkpoint magic");
    std::uint32_t ver = 0;
    is.read(reinterpret_cast<char*>(&ver), 4);
    if (!is || ver != kCheckpointVersion)
        throw IoError("unsupported checkpoint version");

    ParamSet ps;
    while (true) {
        std::uint64_t name_len = 0;
        is.read(reinterpret_cast<char*>(&name_len), 8);
        if (is.eof()) break;
        if (!is) throw IoError("checkpoint truncated");
        if (name_len > (1u << 20)) throw IoError("implausible tensor name length");
        std::string name(name_len, '\0');
        is.read(name.data(), static_cast<std::streamsize>(name_len));
        if (!is) throw IoError("checkpoint truncated");
        std::uint64_t rank = detail::get_u64(is);
        if (rank != 2) throw IoError("unsupported tensor rank");
        std::uint64_t rows = detail::get_u64(is);
        std::uint64_t cols = detail::get_u64(is);
        if (rows * cols > (1ull << 32)) throw IoError("implausible tensor size");
        Mat m(rows, cols);
        for (std::uint64_t r = 0; r < rows; ++r)
            for (std::uint64_t c = 0; c < cols; ++c) {
                double v;
                is.read(reinterpret_cast<char*>(&v), 8);
                if (!is) throw IoError("checkpoint truncated");
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
            }
        ps.add(name, std::move(m));
    }
    return ps;
}

}  // namespace gddq::nn
