#include "adhm/monad_p2.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "adhm/errors.hpp"
#include "detail.hpp"

namespace adhm {

MonadDatumP2 MonadDatumP2::zero(int k, int r) {
  return {k,
          r,
          CMat::Zero(k, k),
          CMat::Zero(k, k),
          CMat::Zero(k, k),
          CMat::Zero(k, r),
          CMat::Zero(r, k)};
}

void MonadDatumP2::validate() const {
  auto shape = [](const CMat& m, int rows, int cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols) {
      std::ostringstream os;
      os << "MonadDatumP2: " << name << " is " << m.rows() << "x" << m.cols()
         << ", expected " << rows << "x" << cols;
      throw DimensionError(os.str());
    }
    if (!m.allFinite()) {
      throw PreconditionError(std::string("MonadDatumP2: non-finite entry in ") + name);
    }
  };
  if (k < 0 || r < 0) throw DimensionError("MonadDatumP2: negative dimension");
  shape(a1, k, k, "a1");
  shape(a2, k, k, "a2");
  shape(d, k, k, "d");
  shape(b, k, r, "b");
  shape(c, r, k, "c");
}

double MonadDatumP2::norm() const {
  return std::sqrt(sqnorm(a1) + sqnorm(a2) + sqnorm(d) + sqnorm(b) + sqnorm(c));
}

MonadDatumP2 MonadDatumP2::adjoint() const {
  return {k, r, a1.adjoint(), a2.adjoint(), d.adjoint(), c.adjoint(), b.adjoint()};
}

MonadDatumP2 MonadDatumP2::operator-(const MonadDatumP2& o) const {
  return {k, r, a1 - o.a1, a2 - o.a2, d - o.d, b - o.b, c - o.c};
}

CMat integrability_residual(const MonadDatumP2& m) {
  return m.a1 * m.d * m.a2 - m.a2 * m.d * m.a1 + m.b * m.c;
}

bool is_integrable(const MonadDatumP2& m, double rel) {
  const double n = m.norm();
  return integrability_residual(m).norm() <= rel * (1.0 + n * n * n);
}

CheckResult surjectivity_check(const MonadDatumP2& m, const Tolerance& tol) {
  m.validate();
  const CMat block = hcat({m.a1, m.a2, m.b});
  if (numeric_rank(block, tol) == m.k) return CheckResult::hold();
  return CheckResult::fail({orth_complement(column_span(block, tol), tol)});
}

MomentP2 moment(const MonadDatumP2& m) {
  const auto id = detail::identity(m.k);
  const CMat da1 = m.d * m.a1;
  const CMat da2 = m.d * m.a2;
  const CMat db = m.d * m.b;
  const CMat mu0 =
      m.a1 * m.a1.adjoint() + m.a2 * m.a2.adjoint() + m.b * m.b.adjoint() - id;
  const CMat mu1 = da1 * da1.adjoint() - da1.adjoint() * da1 +
                   da2 * da2.adjoint() - da2.adjoint() * da2 -
                   m.a1.adjoint() * m.a1 - m.a2.adjoint() * m.a2 +
                   db * db.adjoint() - m.c.adjoint() * m.c + id;
  return {hermitian_part(mu0), hermitian_part(mu1)};
}

double level_residual(const MonadDatumP2& m, double zeta) {
  const MomentP2 mu = moment(m);
  return std::sqrt(sqnorm(mu.mu0) +
                   sqnorm(mu.mu1 - zeta * detail::identity(m.k)));
}

MonadDatumP2 act(const CMat& g0, const CMat& g1, const MonadDatumP2& m) {
  if (g0.rows() != m.k || g0.cols() != m.k || g1.rows() != m.k ||
      g1.cols() != m.k) {
    throw DimensionError("act: group elements must be k x k");
  }
  Eigen::FullPivLU<CMat> lu0(g0), lu1(g1);
  if (!lu0.isInvertible() || !lu1.isInvertible() || numeric_rank(g0) < m.k ||
      numeric_rank(g1) < m.k) {
    throw PreconditionError("act: group element is singular");
  }
  const CMat g0i = lu0.inverse();
  const CMat g1i = lu1.inverse();
  return {m.k,           m.r,           g0 * m.a1 * g1i, g0 * m.a2 * g1i,
          g1 * m.d * g0i, g0 * m.b,     m.c * g1i};
}

CMat combined_identity_rhs(const MonadDatumP2& m) {
  const auto id = detail::identity(m.k);
  const CMat dd = m.d.adjoint() * m.d + id;
  return -(m.a1.adjoint() * dd * m.a1) - m.a2.adjoint() * dd * m.a2 -
         m.c.adjoint() * m.c + id + m.d * m.d.adjoint();
}

double combined_identity_residual(const MonadDatumP2& m) {
  const MomentP2 mu = moment(m);
  const CMat lhs = -(m.d * mu.mu0 * m.d.adjoint()) + mu.mu1;
  return (lhs - combined_identity_rhs(m)).norm();
}

std::pair<double, double> max_rank_margins(const MonadDatumP2& m) {
  if (m.k == 0) return {0.0, 0.0};
  const auto row = singular_values(hcat({m.a1, m.a2, m.b}));
  const auto col = singular_values(vcat({m.a1, m.a2, m.c}));
  return {row(m.k - 1), col(m.k - 1)};
}

// ---------------------------------------------------------------------------
// C1' / C2'

namespace {

struct Pair {
  Subspace v0;
  Subspace v1;
};

/// Smallest pair containing (s0, s1) with d V0 in V1 and a_i V1 in V0.
Pair close_pair(const MonadDatumP2& m, Subspace v0, Subspace v1,
                const Tolerance& tol) {
  for (int it = 0; it <= 2 * m.k + 2; ++it) {
    const auto n0 = v0.dim(), n1 = v1.dim();
    v1 = span_sum(v1, image(m.d, v0, tol), tol);
    v0 = span_sum(v0, image(m.a1, v1, tol), tol);
    v0 = span_sum(v0, image(m.a2, v1, tol), tol);
    if (v0.dim() == n0 && v1.dim() == n1) break;
  }
  return {std::move(v0), std::move(v1)};
}

/// u extended by vectors of `container` (which must contain u) to `target`
/// dimensions.
std::optional<Subspace> extend_within(const Subspace& u, const Subspace& container,
                                      Eigen::Index target, const Tolerance& tol) {
  if (u.dim() == target) return u;
  const Subspace extra = intersection(container, orth_complement(u, tol), tol);
  const Eigen::Index need = target - u.dim();
  if (extra.dim() < need) return std::nullopt;
  CMat basis(u.ambient_dim, target);
  basis << u.basis, extra.basis.leftCols(need);
  return column_span(basis, tol, 1.0);
}

/// Completes a closed pair to an equal-dimension proper pair, when the
/// largest admissible V1 is big enough.
std::optional<Pair> complete_to_witness(const MonadDatumP2& m, const Pair& p,
                                        const Tolerance& tol) {
  if (p.v0.is_full() || p.v1.is_full()) return std::nullopt;
  const Subspace largest_v1 =
      intersection(preimage(m.a1, p.v0, tol), preimage(m.a2, p.v0, tol), tol);
  const Eigen::Index n = std::max(p.v0.dim(), p.v1.dim());
  if (n >= m.k || largest_v1.dim() < n) return std::nullopt;
  auto v1 = extend_within(p.v1, largest_v1, n, tol);
  if (!v1) return std::nullopt;
  auto v0 = extend_within(p.v0, preimage(m.d, *v1, tol), n, tol);
  if (!v0) return std::nullopt;
  return Pair{std::move(*v0), std::move(*v1)};
}

/// Directions along which a destabilizing pair can grow: eigenvectors of the
/// compositions a_i d (on W0) and d a_i (on W1) compressed to the complement
/// of the current pair, plus the unused part of the largest admissible V1.
std::vector<std::pair<int, CVec>> enlargement_candidates(const MonadDatumP2& m,
                                                         const Pair& p,
                                                         const Tolerance& tol) {
  std::vector<std::pair<int, CVec>> out;
  const cplx mix(0.6180339887498949, 0.3141592653589793);
  auto add_eigs = [&](int side, const Subspace& current,
                      const std::vector<CMat>& ops) {
    const Subspace q = orth_complement(current, tol);
    if (q.is_zero()) return;
    for (const CMat& t : ops) {
      const CMat compressed = q.basis.adjoint() * t * q.basis;
      Eigen::ComplexEigenSolver<CMat> es(compressed);
      if (es.info() != Eigen::Success) continue;
      for (Eigen::Index j = 0; j < compressed.cols(); ++j) {
        out.emplace_back(side, q.basis * es.eigenvectors().col(j));
      }
    }
  };
  const CMat a1d = m.a1 * m.d, a2d = m.a2 * m.d;
  const CMat da1 = m.d * m.a1, da2 = m.d * m.a2;
  add_eigs(0, p.v0, {a1d + mix * a2d, a1d, a2d});
  add_eigs(1, p.v1, {da1 + mix * da2, da1, da2});
  if (!p.v0.is_full()) {
    const Subspace largest_v1 =
        intersection(preimage(m.a1, p.v0, tol), preimage(m.a2, p.v0, tol), tol);
    const Subspace spare =
        intersection(largest_v1, orth_complement(p.v1, tol), tol);
    for (Eigen::Index j = 0; j < spare.dim(); ++j) {
      out.emplace_back(1, spare.basis.col(j));
    }
  }
  return out;
}

bool seen_before(const std::vector<Pair>& seen, const Pair& p) {
  for (const auto& s : seen) {
    if (same_subspace(s.v0, p.v0) && same_subspace(s.v1, p.v1)) return true;
  }
  return false;
}

std::optional<Pair> enlargement_search(const MonadDatumP2& m, const Pair& start,
                                       int depth, int& budget,
                                       std::vector<Pair>& seen,
                                       const Tolerance& tol) {
  for (const auto& [side, vec] : enlargement_candidates(m, start, tol)) {
    if (budget <= 0) return std::nullopt;
    --budget;
    const Subspace line = column_span(vec, tol);
    Pair grown = side == 0 ? close_pair(m, span_sum(start.v0, line, tol), start.v1, tol)
                           : close_pair(m, start.v0, span_sum(start.v1, line, tol), tol);
    if (grown.v0.is_full() || grown.v1.is_full()) continue;
    if (seen_before(seen, grown)) continue;
    seen.push_back(grown);
    if (auto w = complete_to_witness(m, grown, tol)) return w;
    if (depth > 1) {
      if (auto w = enlargement_search(m, grown, depth - 1, budget, seen, tol)) return w;
    }
  }
  return std::nullopt;
}

bool inside(const CMat& vectors, const Subspace& s, double tol) {
  if (vectors.cols() == 0) return true;
  const CMat residual = vectors - s.basis * (s.basis.adjoint() * vectors);
  return residual.norm() <= tol * (1.0 + vectors.norm());
}

}  // namespace

CheckResult check_c1_prime(const MonadDatumP2& m, const StabilityOptions& opt) {
  m.validate();
  const Tolerance& tol = opt.tol;
  const Pair closure =
      close_pair(m, column_span(m.b, tol), Subspace::zero(m.k), tol);
  // Any violating pair contains the closure.
  if (closure.v0.is_full() || closure.v1.is_full()) return CheckResult::hold();

  if (auto w = complete_to_witness(m, closure, tol)) {
    return CheckResult::fail({w->v0, w->v1});
  }
  int budget = opt.enlargement_budget;
  std::vector<Pair> seen{closure};
  if (auto w = enlargement_search(m, closure, m.k, budget, seen, tol)) {
    return CheckResult::fail({w->v0, w->v1});
  }
  return CheckResult::unknown();
}

CheckResult check_c2_prime(const MonadDatumP2& m, const StabilityOptions& opt) {
  const CheckResult dual = check_c1_prime(m.adjoint(), opt);
  if (!dual.fails()) return dual;
  // dual witness: (U1 in W1, U0 in W0) for the adjoint datum
  const Subspace& u1 = dual.witness[0];
  const Subspace& u0 = dual.witness[1];
  return CheckResult::fail({orth_complement(u0, opt.tol), orth_complement(u1, opt.tol)});
}

bool is_c1_prime_witness(const MonadDatumP2& m, const Subspace& v0,
                         const Subspace& v1, double tol) {
  if (v0.ambient_dim != m.k || v1.ambient_dim != m.k) return false;
  if (v0.dim() != v1.dim() || v0.dim() >= m.k) return false;
  return inside(m.b, v0, tol) && inside(m.d * v0.basis, v1, tol) &&
         inside(m.a1 * v1.basis, v0, tol) && inside(m.a2 * v1.basis, v0, tol);
}

bool is_c2_prime_witness(const MonadDatumP2& m, const Subspace& v0,
                         const Subspace& v1, double tol) {
  if (v0.ambient_dim != m.k || v1.ambient_dim != m.k) return false;
  if (v0.dim() != v1.dim() || v0.dim() == 0) return false;
  const double kernel = (m.c * v1.basis).norm();
  return kernel <= tol * (1.0 + m.c.norm()) && inside(m.d * v0.basis, v1, tol) &&
         inside(m.a1 * v1.basis, v0, tol) && inside(m.a2 * v1.basis, v0, tol);
}

int stabilizer_dim(const MonadDatumP2& m, const Tolerance& tol) {
  m.validate();
  if (m.k == 0) return 0;
  const CMat zero = CMat::Zero(m.k, m.k);
  std::vector<std::vector<double>> cols;
  auto column = [&](const CMat& h0, const CMat& h1) {
    std::vector<double> col;
    detail::push_real(col, h0 * m.a1 - m.a1 * h1);
    detail::push_real(col, h0 * m.a2 - m.a2 * h1);
    detail::push_real(col, h1 * m.d - m.d * h0);
    detail::push_real(col, h0 * m.b);
    detail::push_real(col, m.c * h1);
    cols.push_back(std::move(col));
  };
  const auto basis = detail::anti_hermitian_basis(m.k);
  for (const CMat& h : basis) column(h, zero);
  for (const CMat& h : basis) column(zero, h);
  return real_nullity(detail::columns_to_matrix(cols), tol);
}

AdhmDatumS4 p_map(const MonadDatumP2& m) {
  return {m.k, m.r, m.d * m.a1, m.d * m.a2, m.d * m.b, m.c};
}

}  // namespace adhm
