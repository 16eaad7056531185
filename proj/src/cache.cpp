#include "hotw/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace hotw::cachefile {

namespace {
constexpr char kSolutionMagic[9] = "HOTWRHS1";
constexpr char kMatrixMagic[9] = "HOTWLND1";
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u64(std::ofstream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
bool get_u32(std::ifstream& is, std::uint32_t& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}
bool get_u64(std::ifstream& is, std::uint64_t& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}
}  // namespace

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string cache_path(const std::string& dir, const std::string& key) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(key)));
    return dir + "/" + buf + ".rhsol";
}

bool save_solution(const std::string& dir, const std::string& key,
                   const rh::SpectralSolution& sol) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const std::string path = cache_path(dir, key);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) return false;
        os.write(kSolutionMagic, 8);
        put_u32(os, kVersion);
        put_u64(os, fnv1a(key));
        put_u32(os, static_cast<std::uint32_t>(sol.blocks.size()));
        for (const auto& b : sol.blocks) {
            put_u32(os, static_cast<std::uint32_t>(b.n()));
            for (const auto& m : b.coeffs)
                os.write(reinterpret_cast<const char*>(m.a.data()), 4 * sizeof(cplx));
        }
        if (!os) return false;
    }
    std::filesystem::rename(tmp, path, ec);
    return !ec;
}

std::optional<std::vector<cheb::ChebSeries<Mat2>>> load_blocks(const std::string& dir,
                                                               const std::string& key) {
    std::ifstream is(cache_path(dir, key), std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    if (!is.read(magic, 8) || std::string(magic, 8) != std::string(kSolutionMagic, 8))
        return std::nullopt;
    std::uint32_t version = 0, ncomp = 0;
    std::uint64_t hash = 0;
    if (!get_u32(is, version) || version != kVersion) return std::nullopt;
    if (!get_u64(is, hash) || hash != fnv1a(key)) return std::nullopt;
    if (!get_u32(is, ncomp) || ncomp > 64) return std::nullopt;
    std::vector<cheb::ChebSeries<Mat2>> blocks(ncomp);
    for (auto& b : blocks) {
        std::uint32_t n = 0;
        if (!get_u32(is, n) || n == 0 || n > 4096) return std::nullopt;
        b.coeffs.resize(n);
        for (auto& m : b.coeffs)
            if (!is.read(reinterpret_cast<char*>(m.a.data()), 4 * sizeof(cplx)))
                return std::nullopt;
    }
    return blocks;
}

bool dump_matrix(const std::string& path, const Eigen::MatrixXcd& m) {
    std::ofstream os(path + ".tmp", std::ios::binary | std::ios::trunc);
    if (!os) return false;
    os.write(kMatrixMagic, 8);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(m.rows()));
    put_u32(os, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const cplx v = m(r, c);
            os.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
    os.close();
    std::error_code ec;
    std::filesystem::rename(path + ".tmp", path, ec);
    return !ec;
}

}  // namespace hotw::cachefile
