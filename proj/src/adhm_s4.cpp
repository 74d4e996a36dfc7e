#include "adhm/adhm_s4.hpp"

#include <cmath>
#include <sstream>

#include "adhm/errors.hpp"
#include "detail.hpp"

namespace adhm {

AdhmDatumS4 AdhmDatumS4::zero(int k, int r) {
  return {k, r, CMat::Zero(k, k), CMat::Zero(k, k), CMat::Zero(k, r),
          CMat::Zero(r, k)};
}

void AdhmDatumS4::validate() const {
  auto shape = [](const CMat& m, int rows, int cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols) {
      std::ostringstream os;
      os << "AdhmDatumS4: " << name << " is " << m.rows() << "x" << m.cols()
         << ", expected " << rows << "x" << cols;
      throw DimensionError(os.str());
    }
    if (!m.allFinite()) {
      throw PreconditionError(std::string("AdhmDatumS4: non-finite entry in ") + name);
    }
  };
  if (k < 0 || r < 0) throw DimensionError("AdhmDatumS4: negative dimension");
  shape(a1, k, k, "a1");
  shape(a2, k, k, "a2");
  shape(b, k, r, "b");
  shape(c, r, k, "c");
}

double AdhmDatumS4::norm() const {
  return std::sqrt(sqnorm(a1) + sqnorm(a2) + sqnorm(b) + sqnorm(c));
}

AdhmDatumS4 AdhmDatumS4::adjoint() const {
  return {k, r, a1.adjoint(), a2.adjoint(), c.adjoint(), b.adjoint()};
}

AdhmDatumS4 AdhmDatumS4::operator-(const AdhmDatumS4& o) const {
  return {k, r, a1 - o.a1, a2 - o.a2, b - o.b, c - o.c};
}

CMat integrability_residual(const AdhmDatumS4& m) {
  return m.a1 * m.a2 - m.a2 * m.a1 + m.b * m.c;
}

bool is_integrable(const AdhmDatumS4& m, double rel) {
  const double n = m.norm();
  return integrability_residual(m).norm() <= rel * (1.0 + n * n);
}

CMat moment(const AdhmDatumS4& m) {
  const CMat mu = m.a1 * m.a1.adjoint() - m.a1.adjoint() * m.a1 +
                  m.a2 * m.a2.adjoint() - m.a2.adjoint() * m.a2 +
                  m.b * m.b.adjoint() - m.c.adjoint() * m.c;
  return hermitian_part(mu);
}

double level_residual(const AdhmDatumS4& m, double zeta) {
  return (moment(m) + zeta * detail::identity(m.k)).norm();
}

AdhmDatumS4 act(const CMat& g, const AdhmDatumS4& m) {
  if (g.rows() != m.k || g.cols() != m.k) {
    throw DimensionError("act: group element must be k x k");
  }
  Eigen::FullPivLU<CMat> lu(g);
  if (!lu.isInvertible() || numeric_rank(g) < m.k) {
    throw PreconditionError("act: group element is singular");
  }
  const CMat gi = lu.inverse();
  return {m.k, m.r, g * m.a1 * gi, g * m.a2 * gi, g * m.b, m.c * gi};
}

Subspace invariant_closure(const Subspace& start, const std::vector<CMat>& ops,
                           const Tolerance& tol) {
  Subspace u = start;
  for (Eigen::Index step = 0; step <= u.ambient_dim; ++step) {
    if (u.is_full() || u.is_zero()) break;
    Subspace next = u;
    for (const auto& op : ops) next = span_sum(next, image(op, u, tol), tol);
    if (next.dim() == u.dim()) break;
    u = std::move(next);
  }
  return u;
}

CheckResult check_c1(const AdhmDatumS4& m, const Tolerance& tol) {
  m.validate();
  const Subspace closure =
      invariant_closure(column_span(m.b, tol), {m.a1, m.a2}, tol);
  if (closure.is_full()) return CheckResult::hold();
  return CheckResult::fail({closure});
}

CheckResult check_c2(const AdhmDatumS4& m, const Tolerance& tol) {
  const CheckResult dual = check_c1(m.adjoint(), tol);
  if (dual.holds()) return CheckResult::hold();
  return CheckResult::fail({orth_complement(dual.witness.front(), tol)});
}

int stabilizer_dim(const AdhmDatumS4& m, const Tolerance& tol) {
  m.validate();
  if (m.k == 0) return 0;
  std::vector<std::vector<double>> cols;
  for (const CMat& h : detail::anti_hermitian_basis(m.k)) {
    std::vector<double> col;
    detail::push_real(col, h * m.a1 - m.a1 * h);
    detail::push_real(col, h * m.a2 - m.a2 * h);
    detail::push_real(col, h * m.b);
    detail::push_real(col, m.c * h);
    cols.push_back(std::move(col));
  }
  return real_nullity(detail::columns_to_matrix(cols), tol);
}

}  // namespace adhm
