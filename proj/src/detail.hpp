#pragma once

#include <vector>

#include "adhm/linalg.hpp"

namespace adhm::detail {

/// Real basis of u(n), orthonormal for Re tr(X* Y).
std::vector<CMat> anti_hermitian_basis(Eigen::Index n);

/// Real basis of Herm(n), orthonormal for Re tr(X* Y).
std::vector<CMat> hermitian_basis(Eigen::Index n);

/// Appends the real and imaginary parts of every entry of `m` to `out`.
void push_real(std::vector<double>& out, const CMat& m);

/// Real coordinates of a Hermitian matrix (n^2 numbers: diagonal, then
/// sqrt(2) Re and sqrt(2) Im of the strict upper triangle).
void push_hermitian(std::vector<double>& out, const CMat& h);

/// Columns of equal length into a real matrix.
RMat columns_to_matrix(const std::vector<std::vector<double>>& cols);

inline CMat identity(Eigen::Index n) { return CMat::Identity(n, n); }

}  // namespace adhm::detail
