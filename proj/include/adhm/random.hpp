#pragma once

#include <cstdint>
#include <random>

#include "adhm/linalg.hpp"

namespace adhm {

using Rng = std::mt19937_64;

/// Counter-based seed derivation (splitmix64 finalizer). Sample i of a batch
/// seeded with `seed` always gets derive_seed(seed, i), whatever the
/// scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Complex Gaussian matrix; each entry has E|z|^2 = std^2.
CMat gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double std);

/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
CMat random_unitary(Rng& rng, Eigen::Index n);

/// Random Hermitian matrix with Gaussian entries.
CMat random_hermitian(Rng& rng, Eigen::Index n, double std);

}  // namespace adhm
