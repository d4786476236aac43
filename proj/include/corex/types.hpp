#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace corex {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

// Uniform draw on the open interval (0, 1) from the top 53 bits. Used instead
// of std::uniform_real_distribution so streams are identical across standard
// libraries.
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace corex
