#pragma once

// Seeded randomness: sub-seed mixing and Haar-distributed isometries.

#include <cstdint>
#include <random>
#include <string_view>

#include "wielandt/matcore.hpp"

namespace wielandt {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a, used to turn component tags into 64-bit words.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Sub-seed for a named component. Independent of call order.
constexpr std::uint64_t sub_seed(std::uint64_t seed, std::string_view tag) noexcept {
  return mix64(mix64(seed) ^ tag_hash(tag));
}

constexpr std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) + mix64(index ^ 0x5851f42d4c957f2dULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return normal_(engine_); }
  Complex complex_normal() {
    const double re = normal();
    return {re, normal()};
  }
  std::uint64_t next() { return engine_(); }

  /// Matrix with i.i.d. standard complex Gaussian entries, filled row-major.
  CMatrix gaussian(Eigen::Index rows, Eigen::Index cols) {
    CMatrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = complex_normal();
    return g;
  }

  /// Random Hermitian matrix (GUE-like), Frobenius-normalized to 1.
  HermMatrix hermitian(Eigen::Index n) {
    const CMatrix g = gaussian(n, n);
    HermMatrix h(g);
    const double f = h.matrix().norm();
    return f > 0 ? HermMatrix(h.matrix() / f) : h;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Thin QR of a full-column-rank matrix with column phases fixed so that R has a
/// positive real diagonal. Returns the orthonormal factor.
CMatrix orthonormalize(const CMatrix& a);

/// Haar-distributed isometry C^cols -> C^rows (rows >= cols).
CMatrix haar_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols);

inline CMatrix haar_unitary(Rng& rng, Eigen::Index n) { return haar_isometry(rng, n, n); }

}  // namespace wielandt
