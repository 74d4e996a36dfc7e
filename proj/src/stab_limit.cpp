#include "adhm/stab_limit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adhm/errors.hpp"
#include "detail.hpp"

namespace adhm {

namespace {

constexpr double kLevelGate = 1e-8;

void require_level(double residual, double norm, const char* what) {
  if (!(residual <= kLevelGate * (1.0 + norm * norm))) {
    std::ostringstream os;
    os << what << ": datum is off the level set (residual " << residual << ")";
    throw PreconditionError(os.str());
  }
}

void require_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("homotopy parameter t must lie in [0, 1]");
}

void require_p2_zeta(double zeta) {
  if (!(std::abs(zeta) < 1.0)) {
    throw UnsupportedParameter("P^2 homotopies need |zeta| < 1");
  }
}

void require_grid(const std::vector<double>& grid) {
  const bool has0 = std::find(grid.begin(), grid.end(), 0.0) != grid.end();
  const bool has1 = std::find(grid.begin(), grid.end(), 1.0) != grid.end();
  if (!has0 || !has1) throw PreconditionError("homotopy grid must contain 0 and 1");
  for (double t : grid) require_t(t);
}

CMat zeros(Eigen::Index r, Eigen::Index c) { return CMat::Zero(r, c); }

double distance(const AdhmDatumS4& x, const AdhmDatumS4& y) { return (x - y).norm(); }
double distance(const MonadDatumP2& x, const MonadDatumP2& y) { return (x - y).norm(); }

bool bit_equal(const AdhmDatumS4& x, const AdhmDatumS4& y) {
  return x.a1 == y.a1 && x.a2 == y.a2 && x.b == y.b && x.c == y.c;
}
bool bit_equal(const MonadDatumP2& x, const MonadDatumP2& y) {
  return x.a1 == y.a1 && x.a2 == y.a2 && x.d == y.d && x.b == y.b && x.c == y.c;
}

}  // namespace

SplitParams SplitParams::default_for(double zeta) {
  const double zb = std::max(1.0, 1.0 - zeta);
  return {zb, zb + zeta};
}

AdhmDatumS4 embed_s4(const AdhmDatumS4& m, int r_new) {
  m.validate();
  if (r_new < m.r) throw DimensionError("embed_s4: r_new < r");
  return {m.k, r_new, m.a1, m.a2, hcat({m.b, zeros(m.k, r_new - m.r)}),
          vcat({m.c, zeros(r_new - m.r, m.k)})};
}

MonadDatumP2 embed_p2(const MonadDatumP2& m, int r_new) {
  m.validate();
  if (r_new < m.r) throw DimensionError("embed_p2: r_new < r");
  return {m.k, r_new, m.a1, m.a2, m.d, hcat({m.b, zeros(m.k, r_new - m.r)}),
          vcat({m.c, zeros(r_new - m.r, m.k)})};
}

AdhmDatumS4 homotopy_s4(const AdhmDatumS4& m, double zeta, double t,
                        const SplitParams& split) {
  m.validate();
  require_t(t);
  if (!(split.zeta_b > 0 && split.zeta_c > 0) ||
      std::abs(split.zeta_c - split.zeta_b - zeta) > 1e-12) {
    throw PreconditionError("homotopy_s4: split must be positive with zeta_c - zeta_b = zeta");
  }
  require_level(level_residual(m, zeta), m.norm(), "homotopy_s4");
  const int k = m.k;
  const double s = std::sqrt(1.0 - t);
  const CMat one = detail::identity(k);
  return {k,
          m.r + 2 * k,
          s * m.a1,
          s * m.a2,
          hcat({s * m.b, zeros(k, k), std::sqrt(t * split.zeta_b) * one}),
          vcat({s * m.c, std::sqrt(t * split.zeta_c) * one, zeros(k, k)})};
}

AdhmDatumS4 homotopy_s4_endpoint(int k, int r, const SplitParams& split) {
  const CMat one = detail::identity(k);
  return {k,
          r + 2 * k,
          zeros(k, k),
          zeros(k, k),
          hcat({zeros(k, r), zeros(k, k), std::sqrt(split.zeta_b) * one}),
          vcat({zeros(r, k), std::sqrt(split.zeta_c) * one, zeros(k, k)})};
}

MonadDatumP2 homotopy_p2_h(const MonadDatumP2& m, double zeta, double t) {
  m.validate();
  require_p2_zeta(zeta);
  require_t(t);
  require_level(level_residual(m, zeta), m.norm(), "homotopy_p2_h");
  const int k = m.k;
  const double s = std::sqrt(1.0 - t);
  const CMat one = detail::identity(k);
  return {k,
          m.r + 3 * k,
          s * m.a1,
          s * m.a2,
          m.d,
          hcat({s * m.b, zeros(k, k), std::sqrt(t) * one, zeros(k, k)}),
          vcat({s * m.c, std::sqrt(t) * m.d.adjoint(), zeros(k, k),
                std::sqrt(t * (1.0 - zeta)) * one})};
}

MonadDatumP2 homotopy_p2_htilde(const MonadDatumP2& m, double zeta, double t) {
  m.validate();
  require_p2_zeta(zeta);
  require_t(t);
  require_level(level_residual(m, zeta), m.norm(), "homotopy_p2_htilde");
  const int k = m.k;
  const int r = m.r;
  const CMat one = detail::identity(k);
  const CMat dt = (1.0 - t) * m.d;
  return {k,
          r + 3 * k,
          zeros(k, k),
          zeros(k, k),
          dt,
          hcat({zeros(k, r), zeros(k, k), one, zeros(k, k)}),
          vcat({zeros(r, k), dt.adjoint(), zeros(k, k), std::sqrt(1.0 - zeta) * one})};
}

MonadDatumP2 homotopy_p2_endpoint(int k, int r, double zeta) {
  require_p2_zeta(zeta);
  const CMat one = detail::identity(k);
  return {k,
          r + 3 * k,
          zeros(k, k),
          zeros(k, k),
          zeros(k, k),
          hcat({zeros(k, r), zeros(k, k), one, zeros(k, k)}),
          vcat({zeros(r, k), zeros(k, k), zeros(k, k), std::sqrt(1.0 - zeta) * one})};
}

HomotopyReport verify_null_homotopy(const AdhmDatumS4& m, double zeta,
                                    const std::vector<double>& grid,
                                    const std::optional<SplitParams>& split) {
  require_grid(grid);
  const SplitParams sp = split.value_or(SplitParams::default_for(zeta));
  HomotopyReport rep;
  rep.geometry = Geometry::S4;
  rep.zeta = zeta;
  rep.grid = grid;
  const double n = m.norm();
  rep.residual_bound = 1e-10 * (1.0 + n * n);
  const AdhmDatumS4 embedded = embed_s4(m, m.r + 2 * m.k);
  for (double t : grid) {
    const AdhmDatumS4 x = homotopy_s4(m, zeta, t, sp);
    rep.max_level_residual = std::max(rep.max_level_residual, level_residual(x, zeta));
    rep.max_integrability_residual =
        std::max(rep.max_integrability_residual, integrability_residual(x).norm());
    if (t == 0.0) rep.start_is_embedding = bit_equal(x, embedded);
    if (t == 1.0) {
      rep.endpoint_s4 = x;
      rep.endpoint_distance = distance(x, homotopy_s4_endpoint(m.k, m.r, sp));
    }
    if (t > 0.0) {
      for (const CheckResult& c : {check_c1(x), check_c2(x)}) {
        ++rep.regularity_checks;
        if (c.fails()) ++rep.regularity_failures;
        if (c.verdict == Verdict::Unknown) ++rep.regularity_unknown;
      }
    }
  }
  rep.endpoint_constancy = rep.endpoint_distance <= 1e-12;
  return rep;
}

HomotopyReport verify_null_homotopy(const MonadDatumP2& m, double zeta,
                                    const std::vector<double>& grid) {
  require_grid(grid);
  require_p2_zeta(zeta);
  HomotopyReport rep;
  rep.geometry = Geometry::P2;
  rep.zeta = zeta;
  rep.grid = grid;
  const double n = m.norm();
  rep.residual_bound = 1e-10 * (1.0 + n * n);
  const MonadDatumP2 embedded = embed_p2(m, m.r + 3 * m.k);

  auto visit = [&](const MonadDatumP2& x, double t) {
    rep.max_level_residual = std::max(rep.max_level_residual, level_residual(x, zeta));
    rep.max_integrability_residual =
        std::max(rep.max_integrability_residual, integrability_residual(x).norm());
    if (t > 0.0) {
      for (const CheckResult& c : {check_c1_prime(x), check_c2_prime(x)}) {
        ++rep.regularity_checks;
        if (c.fails()) ++rep.regularity_failures;
        if (c.verdict == Verdict::Unknown) ++rep.regularity_unknown;
      }
    }
  };

  for (double t : grid) {
    const MonadDatumP2 x = homotopy_p2_h(m, zeta, t);
    visit(x, t);
    if (t == 0.0) rep.start_is_embedding = bit_equal(x, embedded);
  }
  for (double t : grid) {
    const MonadDatumP2 x = homotopy_p2_htilde(m, zeta, t);
    // the second leg starts where the first one ended, so t = 0 is regular too
    visit(x, t == 0.0 ? 1.0 : t);
    if (t == 1.0) {
      rep.endpoint_p2 = x;
      rep.endpoint_distance = distance(x, homotopy_p2_endpoint(m.k, m.r, zeta));
    }
  }
  rep.endpoint_constancy = rep.endpoint_distance <= 1e-12;
  return rep;
}

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw PreconditionError("uniform_grid: need at least two points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
  g.back() = 1.0;
  return g;
}

}  // namespace adhm
