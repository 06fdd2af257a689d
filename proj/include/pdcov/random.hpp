#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace pdcov {

// mt19937_64's output sequence is fixed by the C++ standard; the Boost
// distributions are the same code on every platform. Together they keep
// seeded outputs identical across compilers.
using Rng = std::mt19937_64;

// SplitMix64 finalizer over a root seed and a list of stream indices, so that
// every Monte Carlo run / fold gets an independent, reproducible stream.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> stream);

// rows x cols matrix of i.i.d. N(0, variance) draws, filled row by row.
Eigen::MatrixXd gaussian_matrix(Rng& rng, int rows, int cols, double variance = 1.0);

// Uniformly random permutation of 0..n-1 (Fisher-Yates).
std::vector<int> random_permutation(Rng& rng, int n);

}  // namespace pdcov
