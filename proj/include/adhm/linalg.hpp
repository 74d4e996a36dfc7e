#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace adhm {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;

/// Singular-value cutoff: sigma_i counts as nonzero iff
/// sigma_i > rel * reference + abs.
struct Tolerance {
  double rel = 1e-9;
  double abs = 0.0;
};

/// Linear subspace of C^n stored through an orthonormal basis (columns).
struct Subspace {
  Eigen::Index ambient_dim = 0;
  CMat basis;  // ambient_dim x dim, orthonormal columns

  Eigen::Index dim() const { return basis.cols(); }
  bool is_zero() const { return basis.cols() == 0; }
  bool is_full() const { return basis.cols() == ambient_dim; }

  static Subspace zero(Eigen::Index n);
  static Subspace full(Eigen::Index n);
};

/// Number of singular values above tol.rel * sigma_max + tol.abs.
int numeric_rank(const CMat& m, const Tolerance& tol = {});
int numeric_rank(const RMat& m, const Tolerance& tol = {});

/// Singular values in decreasing order.
Eigen::VectorXd singular_values(const CMat& m);

/// Orthonormal basis of the right kernel. The cutoff is relative to
/// `scale` when given (use the norm of the operator the matrix was built
/// from), otherwise to the largest singular value of `m`.
Subspace nullspace(const CMat& m, const Tolerance& tol = {}, double scale = -1.0);

/// Orthonormal basis of the column span (same cutoff convention).
Subspace column_span(const CMat& m, const Tolerance& tol = {}, double scale = -1.0);

/// Real nullity of a real matrix.
int real_nullity(const RMat& m, const Tolerance& tol = {});

// Subspace lattice. Every result is re-orthonormalized at `tol`.
Subspace span_sum(const Subspace& a, const Subspace& b, const Tolerance& tol = {});
Subspace intersection(const Subspace& a, const Subspace& b, const Tolerance& tol = {});
Subspace orth_complement(const Subspace& a, const Tolerance& tol = {});
/// { M v : v in a }; M maps C^{a.ambient_dim} to C^{M.rows()}.
Subspace image(const CMat& m, const Subspace& a, const Tolerance& tol = {});
/// { v : M v in b }; b lives in C^{M.rows()}.
Subspace preimage(const CMat& m, const Subspace& b, const Tolerance& tol = {});

/// True when every basis vector of `a` lies in `b` (residual below 1e-8).
bool contains(const Subspace& b, const Subspace& a, double tol = 1e-8);
/// Largest principal angle between equal-dimensional subspaces.
double max_principal_angle(const Subspace& a, const Subspace& b);
bool same_subspace(const Subspace& a, const Subspace& b, double angle_tol = 1e-8);

/// exp(H) for Hermitian H via a unitary eigen-decomposition.
/// Throws PreconditionError when H is not Hermitian within 1e-12 (relative
/// to max(1, |H|)).
CMat hermitian_exp(const CMat& h);

/// Unitary factor of the polar decomposition m = U P.
CMat polar_unitary(const CMat& m);

/// (M + M*) / 2
CMat hermitian_part(const CMat& m);

/// Block matrices with zero padding; helpers used by the embeddings and
/// homotopies.
CMat hcat(std::initializer_list<CMat> blocks);
CMat vcat(std::initializer_list<CMat> blocks);

/// Frobenius norm squared.
inline double sqnorm(const CMat& m) { return m.squaredNorm(); }

bool all_finite(const CMat& m);

}  // namespace adhm
