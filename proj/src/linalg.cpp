#include "adhm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adhm/errors.hpp"

namespace adhm {

namespace {

double cutoff(const Eigen::VectorXd& sv, const Tolerance& tol, double scale) {
  const double ref = scale >= 0.0 ? scale : (sv.size() > 0 ? sv(0) : 0.0);
  return tol.rel * ref + tol.abs;
}

int count_above(const Eigen::VectorXd& sv, double cut) {
  int n = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++n;
  }
  return n;
}

double spectral_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

}  // namespace

Subspace Subspace::zero(Eigen::Index n) { return Subspace{n, CMat(n, 0)}; }

Subspace Subspace::full(Eigen::Index n) {
  return Subspace{n, CMat::Identity(n, n)};
}

Eigen::VectorXd singular_values(const CMat& m) {
  if (m.size() == 0) return Eigen::VectorXd(0);
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues();
}

int numeric_rank(const CMat& m, const Tolerance& tol) {
  const auto sv = singular_values(m);
  return count_above(sv, cutoff(sv, tol, -1.0));
}

int numeric_rank(const RMat& m, const Tolerance& tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<RMat> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  return count_above(sv, cutoff(sv, tol, -1.0));
}

int real_nullity(const RMat& m, const Tolerance& tol) {
  return static_cast<int>(m.cols()) - numeric_rank(m, tol);
}

Subspace nullspace(const CMat& m, const Tolerance& tol, double scale) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Subspace::zero(0);
  if (m.rows() == 0) return Subspace::full(n);
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const int rank = count_above(sv, cutoff(sv, tol, scale));
  return Subspace{n, svd.matrixV().rightCols(n - rank)};
}

Subspace column_span(const CMat& m, const Tolerance& tol, double scale) {
  const Eigen::Index n = m.rows();
  if (m.cols() == 0 || n == 0) return Subspace::zero(n);
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullU);
  const Eigen::VectorXd sv = svd.singularValues();
  const int rank = count_above(sv, cutoff(sv, tol, scale));
  return Subspace{n, svd.matrixU().leftCols(rank)};
}

static void require_same_ambient(const Subspace& a, const Subspace& b,
                                 const char* what) {
  if (a.ambient_dim != b.ambient_dim) {
    std::ostringstream os;
    os << what << ": ambient dimensions differ (" << a.ambient_dim << " vs "
       << b.ambient_dim << ")";
    throw DimensionError(os.str());
  }
}

Subspace span_sum(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  require_same_ambient(a, b, "span_sum");
  CMat joined(a.ambient_dim, a.dim() + b.dim());
  joined << a.basis, b.basis;
  return column_span(joined, tol, 1.0);
}

Subspace orth_complement(const Subspace& a, const Tolerance& tol) {
  if (a.is_zero()) return Subspace::full(a.ambient_dim);
  return nullspace(a.basis.adjoint(), tol, 1.0);
}

Subspace intersection(const Subspace& a, const Subspace& b,
                      const Tolerance& tol) {
  require_same_ambient(a, b, "intersection");
  return orth_complement(
      span_sum(orth_complement(a, tol), orth_complement(b, tol), tol), tol);
}

Subspace image(const CMat& m, const Subspace& a, const Tolerance& tol) {
  if (m.cols() != a.ambient_dim) {
    throw DimensionError("image: operator domain does not match subspace");
  }
  if (a.is_zero()) return Subspace::zero(m.rows());
  return column_span(m * a.basis, tol, spectral_norm(m));
}

Subspace preimage(const CMat& m, const Subspace& b, const Tolerance& tol) {
  if (m.rows() != b.ambient_dim) {
    throw DimensionError("preimage: operator codomain does not match subspace");
  }
  if (b.is_full()) return Subspace::full(m.cols());
  const Subspace perp = orth_complement(b, tol);
  return nullspace(perp.basis.adjoint() * m, tol, spectral_norm(m));
}

bool contains(const Subspace& b, const Subspace& a, double tol) {
  require_same_ambient(a, b, "contains");
  if (a.is_zero()) return true;
  const CMat residual = a.basis - b.basis * (b.basis.adjoint() * a.basis);
  return residual.norm() <= tol;
}

double max_principal_angle(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "max_principal_angle");
  if (a.dim() != b.dim()) return M_PI / 2;
  if (a.is_zero()) return 0.0;
  const CMat residual = a.basis - b.basis * (b.basis.adjoint() * a.basis);
  const double s = std::min(1.0, singular_values(residual)(0));
  return std::asin(s);
}

bool same_subspace(const Subspace& a, const Subspace& b, double angle_tol) {
  return a.dim() == b.dim() && max_principal_angle(a, b) < angle_tol;
}

CMat hermitian_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }

CMat hermitian_exp(const CMat& h) {
  if (h.rows() != h.cols()) throw DimensionError("hermitian_exp: not square");
  const double scale = std::max(1.0, h.norm());
  if ((h - h.adjoint()).norm() > 1e-12 * scale) {
    throw PreconditionError("hermitian_exp: argument is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(h));
  const Eigen::VectorXd ev = es.eigenvalues().array().exp();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() *
         es.eigenvectors().adjoint();
}

CMat polar_unitary(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMat hcat(std::initializer_list<CMat> blocks) {
  Eigen::Index rows = -1, cols = 0;
  for (const auto& b : blocks) {
    if (rows < 0) rows = b.rows();
    if (b.rows() != rows) throw DimensionError("hcat: row counts differ");
    cols += b.cols();
  }
  CMat out(std::max<Eigen::Index>(rows, 0), cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

CMat vcat(std::initializer_list<CMat> blocks) {
  Eigen::Index cols = -1, rows = 0;
  for (const auto& b : blocks) {
    if (cols < 0) cols = b.cols();
    if (b.cols() != cols) throw DimensionError("vcat: column counts differ");
    rows += b.rows();
  }
  CMat out(rows, std::max<Eigen::Index>(cols, 0));
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

bool all_finite(const CMat& m) { return m.allFinite(); }

}  // namespace adhm
