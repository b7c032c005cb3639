#pragma once

// Seeded generators for test instances. All randomness goes through
// boost::random so that outputs for a fixed seed do not depend on the
// standard library implementation.

#include "frameforge/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace frameforge {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent stream seed for (seed, a, b).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// m x n matrix with orthonormal columns; its rows are a Parseval frame for C^n.
ComplexMatrix random_parseval_frame(std::size_t m, std::size_t n, std::uint64_t seed);

/// Haar-ish random unitary (Gram-Schmidt of a Gaussian matrix).
ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed);

/// Entries are standard complex Gaussians.
ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed);

HermitianMatrix random_hermitian(std::size_t n, std::uint64_t seed);

/// Uniformly random unit vector in C^n.
std::vector<Complex> random_unit_vector(std::size_t n, std::uint64_t seed);

/// k distinct sorted indices from [0, m).
std::vector<std::size_t> random_subset(std::size_t m, std::size_t k, std::uint64_t seed);

}  // namespace frameforge
