#include "choquard/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace choquard {

static_assert(std::endian::native == std::endian::little,
              "field file I/O assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'C', 'H', 'Q', 'F'};
constexpr std::uint32_t kVersion = 1;
} // namespace

void write_field(const Field& u, const std::filesystem::path& path) {
    std::string bytes;
    bytes.reserve(16 + 8 * u.size());
    bytes.append(kMagic, 4);
    auto put_u32 = [&bytes](std::uint32_t v) {
        bytes.append(reinterpret_cast<const char*>(&v), 4);
    };
    auto put_f64 = [&bytes](double v) {
        bytes.append(reinterpret_cast<const char*>(&v), 8);
    };
    put_u32(kVersion);
    put_u32(std::uint32_t(u.grid().dim));
    put_u32(std::uint32_t(u.grid().n));
    put_f64(u.grid().half_width);
    for (double v : u.values())
        put_f64(v);
    atomic_write_bytes(path, bytes);
}

Field read_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open field file: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("bad magic in field file: " + path.string());
    auto get_u32 = [&in, &path]() {
        std::uint32_t v;
        in.read(reinterpret_cast<char*>(&v), 4);
        if (!in)
            throw IoError("truncated field file: " + path.string());
        return v;
    };
    const std::uint32_t version = get_u32();
    if (version != kVersion)
        throw IoError("unsupported field file version");
    const std::uint32_t dim = get_u32();
    const std::uint32_t n = get_u32();
    double half_width;
    in.read(reinterpret_cast<char*>(&half_width), 8);
    if (!in)
        throw IoError("truncated field file: " + path.string());
    Grid grid(int(dim), int(n), half_width);
    std::vector<double> values(grid.node_count());
    in.read(reinterpret_cast<char*>(values.data()),
            std::streamsize(values.size() * 8));
    if (!in)
        throw IoError("truncated field file: " + path.string());
    Field f(grid, std::move(values));
    f.check_finite();
    return f;
}

void atomic_write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    std::filesystem::path dir = path.parent_path();
    if (dir.empty())
        dir = ".";
    std::filesystem::create_directories(dir);
    std::filesystem::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open for writing: " + tmp.string());
        out.write(bytes.data(), std::streamsize(bytes.size()));
        if (!out)
            throw IoError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace choquard
