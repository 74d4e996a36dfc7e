#include "adhm/moment_flow.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "adhm/errors.hpp"
#include "adhm/random.hpp"
#include "detail.hpp"

namespace adhm {

namespace {

constexpr double kOnLevel = 1e-6;

struct ExpPair {
  CMat e, einv;
};

ExpPair exp_pair(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(h));
  const Eigen::VectorXd ev = es.eigenvalues();
  const CMat& v = es.eigenvectors();
  const Eigen::VectorXcd up = ev.array().exp().cast<cplx>();
  const Eigen::VectorXcd down = (-ev).array().exp().cast<cplx>();
  return {v * up.asDiagonal() * v.adjoint(), v * down.asDiagonal() * v.adjoint()};
}

double inner(const std::vector<CMat>& x, const std::vector<CMat>& y) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += (x[i].conjugate().cwiseProduct(y[i])).sum().real();
  }
  return s;
}

double log_singular_norm(const CMat& g) {
  if (g.size() == 0) return 0.0;
  const auto sv = singular_values(g);
  double s = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double l = std::log(std::max(sv(i), std::numeric_limits<double>::min()));
    s += l * l;
  }
  return s;
}

// Geometry policies for the flow engine. Each provides the residual blocks
// (moment minus level), their derivative along exp(eps h), the group action
// by exponentials and the integrability residual norm.

struct S4Geometry {
  using Datum = AdhmDatumS4;
  static constexpr int factors = 1;

  static std::vector<CMat> residual(const Datum& m, double zeta) {
    return {moment(m) + zeta * detail::identity(m.k)};
  }

  static std::vector<CMat> dresidual(const Datum& m, const std::vector<CMat>& h) {
    const CMat& x = h[0];
    const CMat da1 = x * m.a1 - m.a1 * x;
    const CMat da2 = x * m.a2 - m.a2 * x;
    const CMat db = x * m.b;
    const CMat dc = -(m.c * x);
    auto comm = [](const CMat& da, const CMat& a) -> CMat {
      return da * a.adjoint() + a * da.adjoint() - da.adjoint() * a - a.adjoint() * da;
    };
    const CMat dmu = comm(da1, m.a1) + comm(da2, m.a2) + db * m.b.adjoint() +
                     m.b * db.adjoint() - dc.adjoint() * m.c - m.c.adjoint() * dc;
    return {dmu};
  }

  static Datum apply(const std::vector<ExpPair>& e, const Datum& m) {
    const ExpPair& g = e[0];
    return {m.k, m.r, g.e * m.a1 * g.einv, g.e * m.a2 * g.einv, g.e * m.b,
            m.c * g.einv};
  }

  static double integrability(const Datum& m) {
    return integrability_residual(m).norm();
  }
};

struct P2Geometry {
  using Datum = MonadDatumP2;
  static constexpr int factors = 2;

  static std::vector<CMat> residual(const Datum& m, double zeta) {
    MomentP2 mu = moment(m);
    return {std::move(mu.mu0), mu.mu1 - zeta * detail::identity(m.k)};
  }

  static std::vector<CMat> dresidual(const Datum& m, const std::vector<CMat>& h) {
    const CMat& h0 = h[0];
    const CMat& h1 = h[1];
    const CMat da1 = h0 * m.a1 - m.a1 * h1;
    const CMat da2 = h0 * m.a2 - m.a2 * h1;
    const CMat dd = h1 * m.d - m.d * h0;
    const CMat db = h0 * m.b;
    const CMat dc = -(m.c * h1);

    const CMat dmu0 = da1 * m.a1.adjoint() + m.a1 * da1.adjoint() +
                      da2 * m.a2.adjoint() + m.a2 * da2.adjoint() +
                      db * m.b.adjoint() + m.b * db.adjoint();

    auto comm = [](const CMat& dp, const CMat& p) -> CMat {
      return dp * p.adjoint() + p * dp.adjoint() - dp.adjoint() * p - p.adjoint() * dp;
    };
    const CMat p1 = m.d * m.a1, p2 = m.d * m.a2, q = m.d * m.b;
    const CMat dp1 = dd * m.a1 + m.d * da1;
    const CMat dp2 = dd * m.a2 + m.d * da2;
    const CMat dq = dd * m.b + m.d * db;
    const CMat dmu1 = comm(dp1, p1) + comm(dp2, p2) - da1.adjoint() * m.a1 -
                      m.a1.adjoint() * da1 - da2.adjoint() * m.a2 -
                      m.a2.adjoint() * da2 + dq * q.adjoint() + q * dq.adjoint() -
                      dc.adjoint() * m.c - m.c.adjoint() * dc;
    return {dmu0, dmu1};
  }

  static Datum apply(const std::vector<ExpPair>& e, const Datum& m) {
    const ExpPair& g0 = e[0];
    const ExpPair& g1 = e[1];
    return {m.k,
            m.r,
            g0.e * m.a1 * g1.einv,
            g0.e * m.a2 * g1.einv,
            g1.e * m.d * g0.einv,
            g0.e * m.b,
            m.c * g1.einv};
  }

  static double integrability(const Datum& m) {
    return integrability_residual(m).norm();
  }
};

template <typename G>
double objective(const typename G::Datum& m, double zeta) {
  double f = 0;
  for (const auto& r : G::residual(m, zeta)) f += sqnorm(r);
  return f;
}

template <typename G>
std::vector<CMat> gradient(const typename G::Datum& m, double zeta) {
  const auto res = G::residual(m, zeta);
  const auto basis = detail::hermitian_basis(m.k);
  std::vector<CMat> grad(G::factors, CMat::Zero(m.k, m.k));
  std::vector<CMat> dir(G::factors, CMat::Zero(m.k, m.k));
  for (int f = 0; f < G::factors; ++f) {
    for (const CMat& e : basis) {
      dir[f] = e;
      const auto dres = G::dresidual(m, dir);
      grad[f] += 2.0 * inner(res, dres) * e;
    }
    dir[f].setZero();
  }
  return grad;
}

void validate_config(const FlowConfig& cfg) {
  if (!(cfg.step0 > 0) || cfg.max_iter < 1 || cfg.max_iter > 1000000 || !(cfg.tol >= 1e-12) ||
      !(cfg.backtrack > 0 && cfg.backtrack < 1) || !(cfg.grow > 1) || cfg.stall_window < 1 ||
      !(cfg.escape_norm > 0)) {
    throw PreconditionError(
        "FlowConfig: need step0 > 0, 1 <= max_iter <= 1e6, tol >= 1e-12, "
        "0 < backtrack < 1, grow > 1, stall_window >= 1, escape_norm > 0");
  }
}

template <typename G>
FlowResult<typename G::Datum> run_flow(
    const typename G::Datum& start, double zeta, const FlowConfig& cfg,
    const std::function<void(const typename G::Datum&)>& observer) {
  using Datum = typename G::Datum;
  validate_config(cfg);
  const int k = start.k;
  FlowResult<Datum> out{start, {}};
  FlowReport& rep = out.report;

  Datum cur = start;
  double f = objective<G>(cur, zeta);
  rep.final_residual = std::sqrt(f);
  if (rep.final_residual <= cfg.tol || k == 0) {
    rep.converged = rep.final_residual <= cfg.tol;
    return out;
  }

  const double base_integrability = G::integrability(start);
  std::vector<CMat> group(G::factors, CMat::Identity(k, k));
  std::vector<CMat> grad = gradient<G>(cur, zeta);
  std::vector<CMat> prev_step, prev_grad;
  std::deque<std::pair<double, double>> history;
  double eta = cfg.step0;

  while (rep.iterations < cfg.max_iter) {
    const double g2 = inner(grad, grad);
    if (!(g2 > 0.0)) break;

    // Barzilai-Borwein guess for the trial step, falling back to growth.
    if (!prev_step.empty()) {
      std::vector<CMat> y(G::factors);
      for (int i = 0; i < G::factors; ++i) y[i] = grad[i] - prev_grad[i];
      const double sy = inner(prev_step, y);
      const double ss = inner(prev_step, prev_step);
      eta = sy > 0 ? ss / sy : eta * cfg.grow;
    }

    bool accepted = false;
    Datum cand = cur;
    double fc = f;
    std::vector<ExpPair> exps(G::factors);
    std::vector<CMat> step(G::factors);
    for (int ls = 0; ls < 80; ++ls) {
      for (int i = 0; i < G::factors; ++i) {
        step[i] = -eta * grad[i];
        exps[i] = exp_pair(step[i]);
      }
      cand = G::apply(exps, cur);
      fc = objective<G>(cand, zeta);
      if (std::isfinite(fc) && fc <= f - 1e-4 * eta * g2) {
        accepted = true;
        break;
      }
      eta *= cfg.backtrack;
    }
    if (!accepted) break;

    for (int i = 0; i < G::factors; ++i) group[i] = exps[i].e * group[i];
    cur = std::move(cand);
    f = fc;
    ++rep.iterations;
    if (observer) observer(cur);

    rep.integrability_drift = std::max(
        rep.integrability_drift, std::abs(G::integrability(cur) - base_integrability));
    double gn = 0;
    for (const auto& g : group) gn += log_singular_norm(g);
    rep.group_norm = std::sqrt(gn);
    rep.final_residual = std::sqrt(f);

    if (rep.final_residual <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (rep.group_norm > cfg.escape_norm) {
      rep.instability_flag = true;
      break;
    }
    history.emplace_back(f, rep.group_norm);
    if (static_cast<int>(history.size()) > cfg.stall_window) {
      const auto [f_old, gn_old] = history.front();
      history.pop_front();
      if (f_old - f <= 1e-14 * f_old && std::abs(rep.group_norm - gn_old) < 1e-6) break;
    }

    prev_step = step;
    prev_grad = grad;
    grad = gradient<G>(cur, zeta);
  }

  out.datum = std::move(cur);
  return out;
}

template <typename G>
std::vector<ExpPair> exps_of(const std::vector<CMat>& h) {
  if (static_cast<int>(h.size()) != G::factors) {
    throw DimensionError("act_exp: wrong number of group factors");
  }
  std::vector<ExpPair> e;
  for (const auto& x : h) {
    (void)hermitian_exp(x);  // validates Hermiticity
    e.push_back(exp_pair(x));
  }
  return e;
}

CMat pseudo_inverse_solve(const CMat& b, const CMat& rhs) {
  // b has full row rank: b^+ = b* (b b*)^-1
  const CMat gram = b * b.adjoint();
  return b.adjoint() * gram.llt().solve(rhs);
}

template <typename G>
void require_on_level(const typename G::Datum& m, double zeta, const char* what) {
  double res = std::sqrt(objective<G>(m, zeta));
  if (!(res <= kOnLevel)) {
    std::ostringstream os;
    os << what << ": datum is not on the level set (residual " << res << ")";
    throw PreconditionError(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

AdhmDatumS4 dual_datum(const AdhmDatumS4& m) {
  return {m.k, m.r, m.a1.adjoint(), m.a2.adjoint(), -m.c.adjoint(), m.b.adjoint()};
}

double default_scale_s4(int k, int r) { return 1.0 / std::sqrt(double(k + r)); }
double default_scale_p2(int k, int r) { return 1.0 / std::sqrt(double(2 * k + r)); }

AdhmDatumS4 random_integrable_s4(int k, int r, std::uint64_t seed, double scale) {
  if (k < 1) throw DimensionError("random_integrable_s4: k must be >= 1");
  if (r < k) {
    throw SamplerError("random_integrable_s4: sampler needs r >= k (enlarge r)");
  }
  Rng rng(seed);
  AdhmDatumS4 m = AdhmDatumS4::zero(k, r);
  m.a1 = gaussian_matrix(rng, k, k, scale);
  m.a2 = gaussian_matrix(rng, k, k, scale);
  for (int attempt = 0;; ++attempt) {
    m.b = gaussian_matrix(rng, k, r, scale);
    if (numeric_rank(m.b) == k) break;
    if (attempt >= 100) throw SamplerError("random_integrable_s4: b stays rank deficient");
  }
  if (k == 1) {
    m.c = CMat::Zero(r, k);  // the commutator vanishes identically
  } else {
    m.c = -pseudo_inverse_solve(m.b, m.a1 * m.a2 - m.a2 * m.a1);
  }
  return m;
}

MonadDatumP2 random_integrable_p2(int k, int r, std::uint64_t seed, double scale) {
  if (k < 1) throw DimensionError("random_integrable_p2: k must be >= 1");
  if (r < k) {
    throw SamplerError("random_integrable_p2: sampler needs r >= k (enlarge r)");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    MonadDatumP2 m = MonadDatumP2::zero(k, r);
    m.a1 = gaussian_matrix(rng, k, k, scale);
    m.a2 = gaussian_matrix(rng, k, k, scale);
    m.d = gaussian_matrix(rng, k, k, scale);
    m.b = gaussian_matrix(rng, k, r, scale);
    if (numeric_rank(m.b) < k) continue;
    if (k == 1) {
      m.c = CMat::Zero(r, k);  // a1 d a2 - a2 d a1 vanishes for scalars
    } else {
      m.c = -pseudo_inverse_solve(m.b, m.a1 * m.d * m.a2 - m.a2 * m.d * m.a1);
    }
    if (surjectivity_check(m).holds()) return m;
  }
  throw SamplerError("random_integrable_p2: surjectivity not achieved in 100 attempts");
}

MonadDatumP2 random_integrable_p2_cside(int k, int r, std::uint64_t seed, double scale) {
  if (k < 1) throw DimensionError("random_integrable_p2_cside: k must be >= 1");
  if (r < k) {
    throw SamplerError("random_integrable_p2_cside: sampler needs r >= k (enlarge r)");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    MonadDatumP2 m = MonadDatumP2::zero(k, r);
    m.a1 = gaussian_matrix(rng, k, k, scale);
    m.a2 = gaussian_matrix(rng, k, k, scale);
    m.d = gaussian_matrix(rng, k, k, scale);
    m.c = gaussian_matrix(rng, r, k, scale);
    if (numeric_rank(m.c) < k) continue;
    if (k == 1) {
      m.b = CMat::Zero(k, r);
    } else {
      // b = -(a1 d a2 - a2 d a1) c^+ with c^+ = (c* c)^-1 c*
      const CMat bracket = m.a1 * m.d * m.a2 - m.a2 * m.d * m.a1;
      const CMat gram = m.c.adjoint() * m.c;
      m.b = -(bracket * gram.llt().solve(m.c.adjoint()));
    }
    if (surjectivity_check(m).holds()) return m;
  }
  throw SamplerError("random_integrable_p2_cside: surjectivity not achieved in 100 attempts");
}

namespace {

// Directional derivative of the integrability residual along dm.
CMat dintegrability(const AdhmDatumS4& m, const AdhmDatumS4& dm) {
  return dm.a1 * m.a2 + m.a1 * dm.a2 - dm.a2 * m.a1 - m.a2 * dm.a1 + dm.b * m.c + m.b * dm.c;
}

CMat dintegrability(const MonadDatumP2& m, const MonadDatumP2& dm) {
  return dm.a1 * m.d * m.a2 + m.a1 * dm.d * m.a2 + m.a1 * m.d * dm.a2 -
         dm.a2 * m.d * m.a1 - m.a2 * dm.d * m.a1 - m.a2 * m.d * dm.a1 + dm.b * m.c +
         m.b * dm.c;
}

std::vector<CMat*> entries(AdhmDatumS4& m) { return {&m.a1, &m.a2, &m.b, &m.c}; }
std::vector<CMat*> entries(MonadDatumP2& m) { return {&m.a1, &m.a2, &m.d, &m.b, &m.c}; }

// Minimum-norm complex Newton iteration onto the integrable locus. The
// residual is holomorphic, so the complex Jacobian is exact.
template <typename Datum>
Datum newton_project(Datum m, int max_iter = 60) {
  Datum zero = m;
  for (CMat* e : entries(zero)) e->setZero();
  const Eigen::Index k = m.k;
  for (int it = 0; it < max_iter; ++it) {
    const CMat f = integrability_residual(m);
    if (f.norm() <= 1e-14 * (1.0 + std::pow(m.norm(), 3))) return m;
    std::vector<CMat> cols;
    Datum dir = zero;
    for (CMat* e : entries(dir)) {
      for (Eigen::Index j = 0; j < e->size(); ++j) {
        (*e)(j) = 1.0;
        cols.push_back(dintegrability(m, dir).reshaped());
        (*e)(j) = 0.0;
      }
    }
    CMat jac(k * k, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) jac.col(static_cast<Eigen::Index>(j)) = cols[j];
    const CVec rhs = f.reshaped();
    const CVec step = jac.completeOrthogonalDecomposition().solve(rhs);
    Eigen::Index pos = 0;
    for (CMat* e : entries(m)) {
      for (Eigen::Index j = 0; j < e->size(); ++j) (*e)(j) -= step(pos++);
    }
    if (!std::isfinite(m.norm())) break;
  }
  throw NumericalError("newton projection onto the integrable locus did not converge");
}

}  // namespace

AdhmDatumS4 project_integrable(const AdhmDatumS4& m) {
  m.validate();
  return newton_project(m);
}

MonadDatumP2 project_integrable(const MonadDatumP2& m) {
  m.validate();
  return newton_project(m);
}

AdhmDatumS4 random_integrable_newton_s4(int k, int r, std::uint64_t seed, double scale) {
  if (k < 1 || r < 1) throw DimensionError("random_integrable_newton_s4: need k, r >= 1");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    AdhmDatumS4 m{k, r, gaussian_matrix(rng, k, k, scale), gaussian_matrix(rng, k, k, scale),
                  gaussian_matrix(rng, k, r, scale), gaussian_matrix(rng, r, k, scale)};
    try {
      return newton_project(m);
    } catch (const NumericalError&) {
    }
  }
  throw SamplerError("random_integrable_newton_s4: projection failed in 100 attempts");
}

MonadDatumP2 random_integrable_newton_p2(int k, int r, std::uint64_t seed, double scale) {
  if (k < 1 || r < 1) throw DimensionError("random_integrable_newton_p2: need k, r >= 1");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    MonadDatumP2 m{k,
                   r,
                   gaussian_matrix(rng, k, k, scale),
                   gaussian_matrix(rng, k, k, scale),
                   gaussian_matrix(rng, k, k, scale),
                   gaussian_matrix(rng, k, r, scale),
                   gaussian_matrix(rng, r, k, scale)};
    try {
      m = newton_project(m);
    } catch (const NumericalError&) {
      continue;
    }
    if (surjectivity_check(m).holds()) return m;
  }
  throw SamplerError("random_integrable_newton_p2: no surjective datum in 100 attempts");
}

FlowResult<AdhmDatumS4> kempf_ness_flow(const AdhmDatumS4& m, double zeta,
                                        const FlowConfig& cfg,
                                        const ObserverS4& observer) {
  m.validate();
  if (cfg.require_integrable && !is_integrable(m, 1e-8)) {
    throw PreconditionError("kempf_ness_flow: datum is not integrable");
  }
  return run_flow<S4Geometry>(m, zeta, cfg, observer);
}

FlowResult<MonadDatumP2> kempf_ness_flow(const MonadDatumP2& m, double zeta,
                                         const FlowConfig& cfg,
                                         const ObserverP2& observer) {
  m.validate();
  if (cfg.require_integrable && !is_integrable(m, 1e-8)) {
    throw PreconditionError("kempf_ness_flow: datum is not integrable");
  }
  if (!surjectivity_check(m).holds()) {
    throw PreconditionError("kempf_ness_flow: a1(W1) + a2(W1) + b(C^r) != W0");
  }
  auto result = run_flow<P2Geometry>(m, zeta, cfg, observer);
  if (!surjectivity_check(result.datum).holds()) {
    // the orbit escaped towards the non-surjective locus
    result.report.converged = false;
    result.report.instability_flag = true;
  }
  return result;
}

std::vector<CMat> flow_gradient(const AdhmDatumS4& m, double zeta) {
  return gradient<S4Geometry>(m, zeta);
}
std::vector<CMat> flow_gradient(const MonadDatumP2& m, double zeta) {
  return gradient<P2Geometry>(m, zeta);
}
double flow_objective(const AdhmDatumS4& m, double zeta) {
  return objective<S4Geometry>(m, zeta);
}
double flow_objective(const MonadDatumP2& m, double zeta) {
  return objective<P2Geometry>(m, zeta);
}
AdhmDatumS4 act_exp(const std::vector<CMat>& h, const AdhmDatumS4& m) {
  return S4Geometry::apply(exps_of<S4Geometry>(h), m);
}
MonadDatumP2 act_exp(const std::vector<CMat>& h, const MonadDatumP2& m) {
  return P2Geometry::apply(exps_of<P2Geometry>(h), m);
}

std::pair<AdhmDatumS4, LevelSample> sample_on_level_s4(int k, int r, double zeta,
                                                       std::uint64_t seed,
                                                       const FlowConfig& cfg,
                                                       int attempts) {
  for (int i = 0; i < attempts; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    AdhmDatumS4 start;
    if (r < k) {
      start = random_integrable_newton_s4(k, r, s, default_scale_s4(k, r));
    } else {
      start = random_integrable_s4(k, r, s, default_scale_s4(k, r));
      // The sampler favours b (c = 0 when k = 1), which only reaches levels
      // with zeta < 0. For zeta > 0 start from the dual datum instead.
      if (zeta > 0) start = dual_datum(start);
    }
    auto flowed = kempf_ness_flow(start, zeta, cfg);
    if (flowed.report.converged) {
      return {std::move(flowed.datum), LevelSample{s, i + 1, flowed.report}};
    }
  }
  throw SamplerError("sample_on_level_s4: no flow converged within the attempt budget");
}

std::pair<MonadDatumP2, LevelSample> sample_on_level_p2(int k, int r, double zeta,
                                                        std::uint64_t seed,
                                                        const FlowConfig& cfg,
                                                        int attempts) {
  for (int i = 0; i < attempts; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    // zeta < 0 levels need c to dominate (for k = 1 they force b = 0).
    const double scale = default_scale_p2(k, r);
    const MonadDatumP2 start = r < k      ? random_integrable_newton_p2(k, r, s, scale)
                               : zeta < 0 ? random_integrable_p2_cside(k, r, s, scale)
                                          : random_integrable_p2(k, r, s, scale);
    auto flowed = kempf_ness_flow(start, zeta, cfg);
    if (flowed.report.converged) {
      return {std::move(flowed.datum), LevelSample{s, i + 1, flowed.report}};
    }
  }
  throw SamplerError("sample_on_level_p2: no flow converged within the attempt budget");
}

// ---------------------------------------------------------------------------
// Tangent dimension

namespace {

std::vector<CMat*> slots(AdhmDatumS4& m) { return {&m.a1, &m.a2, &m.b, &m.c}; }
std::vector<CMat*> slots(MonadDatumP2& m) { return {&m.a1, &m.a2, &m.d, &m.b, &m.c}; }

template <typename G>
std::vector<double> constraints(const typename G::Datum& m, double zeta) {
  std::vector<double> out;
  detail::push_real(out, integrability_residual(m));
  for (const auto& r : G::residual(m, zeta)) detail::push_hermitian(out, r);
  return out;
}

/// Jacobian of the constraint map in real coordinates. The five-point
/// stencil is exact for polynomials of degree <= 4, which covers every
/// constraint here, so only rounding error remains.
template <typename G>
RMat constraint_jacobian(const typename G::Datum& m, double zeta) {
  using Datum = typename G::Datum;
  const double h = 1e-3 * (1.0 + m.norm());
  std::vector<std::vector<double>> cols;
  Datum probe = m;
  const auto ps = slots(probe);
  for (CMat* mat : ps) {
    for (Eigen::Index j = 0; j < mat->cols(); ++j) {
      for (Eigen::Index i = 0; i < mat->rows(); ++i) {
        for (const cplx unit : {cplx(1, 0), cplx(0, 1)}) {
          const cplx saved = (*mat)(i, j);
          auto eval = [&](double s) {
            (*mat)(i, j) = saved + s * h * unit;
            return constraints<G>(probe, zeta);
          };
          const auto fm2 = eval(-2), fm1 = eval(-1), fp1 = eval(1), fp2 = eval(2);
          (*mat)(i, j) = saved;
          std::vector<double> col(fp1.size());
          for (std::size_t q = 0; q < col.size(); ++q) {
            col[q] = (fm2[q] - 8.0 * fm1[q] + 8.0 * fp1[q] - fp2[q]) / (12.0 * h);
          }
          cols.push_back(std::move(col));
        }
      }
    }
  }
  return detail::columns_to_matrix(cols);
}

template <typename G>
int tangent_dimension_impl(const typename G::Datum& m, double zeta, const Tolerance& tol) {
  m.validate();
  require_on_level<G>(m, zeta, "tangent_dimension");
  if (!is_integrable(m, 1e-7)) {
    throw PreconditionError("tangent_dimension: datum is not integrable");
  }
  const RMat jac = constraint_jacobian<G>(m, zeta);
  const int nullity = real_nullity(jac, tol);
  const int orbit = G::factors * m.k * m.k - stabilizer_dim(m);
  return nullity - orbit;
}

}  // namespace

int tangent_dimension(const AdhmDatumS4& m, double zeta, const Tolerance& tol) {
  return tangent_dimension_impl<S4Geometry>(m, zeta, tol);
}

int tangent_dimension(const MonadDatumP2& m, double zeta, const Tolerance& tol) {
  return tangent_dimension_impl<P2Geometry>(m, zeta, tol);
}

CheckResult df_surjectivity_check(const MonadDatumP2& m, const Tolerance& tol) {
  m.validate();
  const Eigen::Index k = m.k, r = m.r;
  if (k == 0) return CheckResult::hold();
  const CMat ik = detail::identity(k);
  // vec(A X B) = (B^T kron A) vec(X), X : W0 -> W1 stored column-major.
  auto kron = [](const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
      }
    }
    return out;
  };
  const CMat a1d = m.a1 * m.d, a2d = m.a2 * m.d;
  const CMat da1 = m.d * m.a1, da2 = m.d * m.a2;
  const CMat system = vcat({
      kron(ik, m.c),                                          // c x
      kron(m.b.transpose(), ik),                              // x b
      kron(m.a2.transpose(), m.a1) - kron(m.a1.transpose(), m.a2),  // a1 x a2 - a2 x a1
      kron(a1d.transpose(), ik) - kron(ik, da1),             // x a1 d - d a1 x
      kron(a2d.transpose(), ik) - kron(ik, da2),             // x a2 d - d a2 x
  });
  (void)r;
  const Subspace kernel = nullspace(system, tol);
  if (kernel.is_zero()) return CheckResult::hold();
  CheckResult res{Verdict::Fails, {kernel}, std::nullopt};
  const CVec x = kernel.basis.col(0);
  res.witness_map = Eigen::Map<const CMat>(x.data(), k, k);
  return res;
}

// ---------------------------------------------------------------------------
// Resolution experiments

ResolutionRecord resolution_project(const MonadDatumP2& m, double zeta,
                                    const FlowConfig& cfg) {
  m.validate();
  require_on_level<P2Geometry>(m, zeta, "resolution_project");
  ResolutionRecord rec;
  rec.c1p_before = check_c1_prime(m).verdict;
  rec.c2p_before = check_c2_prime(m).verdict;
  rec.p_norm_trace.push_back(p_map(m).norm());
  auto flowed = kempf_ness_flow(m, 0.0, cfg, [&](const MonadDatumP2& x) {
    rec.p_norm_trace.push_back(p_map(x).norm());
  });
  rec.representative = std::move(flowed.datum);
  rec.report = flowed.report;
  rec.p_image = p_map(rec.representative);
  rec.c1p_after = check_c1_prime(rec.representative).verdict;
  rec.c2p_after = check_c2_prime(rec.representative).verdict;
  rec.p_norm_monotone_growth = rec.p_norm_trace.size() > 1;
  for (std::size_t i = 1; i < rec.p_norm_trace.size(); ++i) {
    if (rec.p_norm_trace[i] < rec.p_norm_trace[i - 1]) {
      rec.p_norm_monotone_growth = false;
      break;
    }
  }
  rec.boundary = rec.report.instability_flag || !rec.report.converged ||
                 rec.c1p_after != Verdict::Holds || rec.c2p_after != Verdict::Holds;
  return rec;
}

BoundednessTrace boundedness_trace(const MonadDatumP2& m, double zeta) {
  m.validate();
  require_on_level<P2Geometry>(m, zeta, "boundedness_trace");
  BoundednessTrace t;
  t.a1_sq = sqnorm(m.a1);
  t.a2_sq = sqnorm(m.a2);
  t.b_sq = sqnorm(m.b);
  t.mixed = sqnorm(m.d * m.a1) + sqnorm(m.d * m.a2) + sqnorm(m.c) - sqnorm(m.d);
  t.sum_rule_residual = t.a1_sq + t.a2_sq + t.b_sq - m.k;
  t.mixed_rule_residual = t.mixed - (m.k * (1.0 - zeta) - t.a1_sq - t.a2_sq);
  return t;
}

}  // namespace adhm
