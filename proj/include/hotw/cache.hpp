#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hotw/chebyshev.hpp"
#include "hotw/mat2.hpp"
#include "hotw/rh_solver.hpp"

namespace hotw::cachefile {

// FNV-1a; stable across platforms, used for cache file names.
std::uint64_t fnv1a(const std::string& s);

// Versioned little-endian binary format: magic, version, key hash, component
// count, then per component the degree and 4n complex doubles. Writes are
// atomic (temp file + rename).
bool save_solution(const std::string& dir, const std::string& key,
                   const rh::SpectralSolution& sol);

std::optional<std::vector<cheb::ChebSeries<Mat2>>> load_blocks(const std::string& dir,
                                                               const std::string& key);

// Debug dump of a dense collocation matrix under the same header scheme.
bool dump_matrix(const std::string& path, const Eigen::MatrixXcd& m);

std::string cache_path(const std::string& dir, const std::string& key);

}  // namespace hotw::cachefile
