#include "adhm/random.hpp"

#include <cmath>

namespace adhm {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CMat gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double std) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double s = std / std::sqrt(2.0);
  CMat m(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = n01(rng);
      const double im = n01(rng);
      m(i, j) = cplx(s * re, s * im);
    }
  }
  return m;
}

CMat random_unitary(Rng& rng, Eigen::Index n) {
  const CMat z = gaussian_matrix(rng, n, n, 1.0);
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ() * CMat::Identity(n, n);
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

CMat random_hermitian(Rng& rng, Eigen::Index n, double std) {
  const CMat z = gaussian_matrix(rng, n, n, std);
  return hermitian_part(z);
}

}  // namespace adhm
