#include "adhm/field_recon.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "adhm/errors.hpp"
#include "adhm/random.hpp"
#include "detail.hpp"

namespace adhm {

namespace {

constexpr std::array<std::pair<int, int>, 6> kPairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

using Point = std::array<double, 4>;

CMat frame_at(const AdhmDatumS4& m, const Point& x, const std::optional<CMat>& ref) {
  return fiber_frame(m, cplx(x[0], x[1]), cplx(x[2], x[3]), ref);
}

Point shifted(Point x, int mu, double s) {
  x[mu] += s;
  return x;
}

CMat anti_hermitian(const CMat& a) { return 0.5 * (a - a.adjoint()); }

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ADHM_KIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::array<double, 4> data_center(const AdhmDatumS4& m) {
  const cplx c1 = m.a1.trace() / double(m.k);
  const cplx c2 = m.a2.trace() / double(m.k);
  return {c1.real(), c1.imag(), c2.real(), c2.imag()};
}

// Width of the radial proposal: the instanton scale plus the spread of the
// positions.
double proposal_width_sq(const AdhmDatumS4& m) {
  const double k = m.k;
  const CMat one = detail::identity(m.k);
  const double spread = (sqnorm(m.a1 - m.a1.trace() / k * one) +
                         sqnorm(m.a2 - m.a2.trace() / k * one)) / k;
  const double scale = (sqnorm(m.b) + sqnorm(m.c)) / (2.0 * k);
  return std::max(scale + spread, 1e-6);
}

Point uniform_direction(Rng& rng) {
  std::normal_distribution<double> g;
  Point u;
  double n = 0;
  do {
    for (double& v : u) v = g(rng);
    n = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
  } while (n < 1e-12);
  for (double& v : u) v /= n;
  return u;
}

struct Accumulator {
  double sum = 0, sum_sq = 0, asd_max = 0;
};

}  // namespace

int curvature_index(int mu, int nu) {
  for (int i = 0; i < 6; ++i) {
    if (kPairs[i].first == mu && kPairs[i].second == nu) return i;
  }
  throw PreconditionError("curvature_index: need 0 <= mu < nu <= 3");
}

void require_regular(const AdhmDatumS4& m) {
  m.validate();
  const double n = m.norm();
  if (!is_integrable(m)) {
    throw PreconditionError("field reconstruction needs an integrable datum");
  }
  if (!(moment(m).norm() <= 1e-8 * (1.0 + n * n))) {
    throw PreconditionError("field reconstruction needs mu = 0 (zeta = 0)");
  }
  if (!check_c1(m).holds() || !check_c2(m).holds()) {
    throw PreconditionError("field reconstruction needs C1 and C2 to hold");
  }
}

std::pair<CMat, CMat> monad_maps(const AdhmDatumS4& m, cplx z1, cplx z2) {
  require_regular(m);
  const CMat one = detail::identity(m.k);
  const CMat p = m.a1 - z1 * one;
  const CMat q = m.a2 - z2 * one;
  return {vcat({p, q, m.c}), hcat({-q, p, m.b})};
}

CMat fiber_frame(const AdhmDatumS4& m, cplx z1, cplx z2, const std::optional<CMat>& gauge_ref) {
  const CMat one = detail::identity(m.k);
  const CMat p = m.a1 - z1 * one;
  const CMat q = m.a2 - z2 * one;
  const CMat alpha = vcat({p, q, m.c});
  const CMat beta = hcat({-q, p, m.b});
  const Subspace fiber = nullspace(vcat({beta, alpha.adjoint()}), {1e-10, 0});
  if (fiber.dim() != m.r) {
    std::ostringstream os;
    os << "fiber_frame: fiber dimension " << fiber.dim() << " != r at z = (" << z1
       << ", " << z2 << ")";
    throw NumericalError(os.str());
  }
  if (!gauge_ref) return fiber.basis;
  if (gauge_ref->rows() != fiber.basis.rows() || gauge_ref->cols() != m.r) {
    throw DimensionError("fiber_frame: reference frame has the wrong shape");
  }
  return fiber.basis * polar_unitary(fiber.basis.adjoint() * *gauge_ref);
}

FieldPoint gauge_field_at(const AdhmDatumS4& m, const Point& x, double h) {
  if (!(h >= 1e-6 && h <= 1e-2)) {
    throw PreconditionError("gauge_field_at: step h must lie in [1e-6, 1e-2]");
  }
  const CMat psi0 = frame_at(m, x, std::nullopt);
  auto psi = [&](const Point& y) { return frame_at(m, y, psi0); };

  // psi at x +- h e_mu and at the diagonal neighbours x +- h e_mu +- h e_nu
  std::array<std::array<CMat, 2>, 4> axis;
  for (int mu = 0; mu < 4; ++mu) {
    axis[mu][0] = psi(shifted(x, mu, -h));
    axis[mu][1] = psi(shifted(x, mu, h));
  }
  // diag[p][s][t] = psi(x + s h e_mu + t h e_nu) for pair p = (mu, nu)
  std::array<std::array<std::array<CMat, 2>, 2>, 6> diag;
  for (int pi = 0; pi < 6; ++pi) {
    const auto [mu, nu] = kPairs[pi];
    for (int s = 0; s < 2; ++s) {
      for (int t = 0; t < 2; ++t) {
        diag[pi][s][t] = psi(shifted(shifted(x, mu, s ? h : -h), nu, t ? h : -h));
      }
    }
  }

  FieldPoint fp;
  fp.x = x;
  for (int mu = 0; mu < 4; ++mu) {
    fp.A[mu] = anti_hermitian(psi0.adjoint() * (axis[mu][1] - axis[mu][0]) / (2 * h));
  }
  for (int pi = 0; pi < 6; ++pi) {
    const auto [mu, nu] = kPairs[pi];
    // A_nu at x +- h e_mu and A_mu at x +- h e_nu
    auto a_nu_at = [&](int s) {
      return anti_hermitian(axis[mu][s].adjoint() * (diag[pi][s][1] - diag[pi][s][0]) /
                            (2 * h));
    };
    auto a_mu_at = [&](int t) {
      return anti_hermitian(axis[nu][t].adjoint() * (diag[pi][1][t] - diag[pi][0][t]) /
                            (2 * h));
    };
    const CMat d_mu_a_nu = (a_nu_at(1) - a_nu_at(0)) / (2 * h);
    const CMat d_nu_a_mu = (a_mu_at(1) - a_mu_at(0)) / (2 * h);
    fp.F[pi] = anti_hermitian(d_mu_a_nu - d_nu_a_mu + fp.A[mu] * fp.A[nu] -
                              fp.A[nu] * fp.A[mu]);
  }
  return fp;
}

double asd_residual(const FieldPoint& fp) {
  // *F: 12 <-> 34, 13 <-> -24, 14 <-> 23
  const std::array<CMat, 6> star{fp.F[5], -fp.F[4], fp.F[3], fp.F[2], -fp.F[1], fp.F[0]};
  double num = 0, den = 0;
  for (int i = 0; i < 6; ++i) {
    num += sqnorm(fp.F[i] + star[i]);
    den += sqnorm(fp.F[i]);
  }
  return den == 0 ? 0.0 : std::sqrt(num / den);
}

double charge_density(const FieldPoint& fp) {
  const cplx t = (fp.F[0] * fp.F[5] - fp.F[1] * fp.F[4] + fp.F[2] * fp.F[3]).trace();
  return 2.0 * t.real() / (8.0 * std::numbers::pi * std::numbers::pi);
}

ChargeReport charge_integral(const AdhmDatumS4& m, const ChargeOptions& opt) {
  ChargeReport rep;
  rep.radius = opt.radius;
  rep.samples = opt.samples;
  rep.h = opt.h;
  rep.importance = opt.importance;
  m.validate();
  if (m.k == 0) return rep;
  if (!(opt.radius > 0) || opt.samples < 1) {
    throw PreconditionError("charge_integral: need radius > 0 and samples >= 1");
  }
  require_regular(m);

  constexpr double pi = std::numbers::pi;
  const double R = opt.radius;
  const Point center = opt.importance ? data_center(m) : Point{0, 0, 0, 0};
  const double s2 = proposal_width_sq(m);
  // Radial proposal p(rho) ~ rho^3 / (rho^2 + s^2)^3 on [0, rho_max] around
  // the center, with CDF proportional to (rho^2 / (rho^2 + s^2))^2. The
  // center may be off the origin, so points outside the ball get weight 0.
  double c_norm = 0;
  for (int i = 0; i < 4; ++i) c_norm += center[i] * center[i];
  const double rho_max = R + std::sqrt(c_norm);
  const double u_max = rho_max * rho_max / (rho_max * rho_max + s2);
  const double z_norm = u_max * u_max / (4.0 * s2);
  const double ball_volume = pi * pi * R * R * R * R / 2.0;

  auto draw = [&](Rng& rng, double& weight) -> Point {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Point dir = uniform_direction(rng);
    Point x;
    if (opt.importance) {
      const double u = u_max * std::sqrt(unif(rng));
      const double rho = std::sqrt(s2 * u / (1.0 - u));
      for (int i = 0; i < 4; ++i) x[i] = center[i] + rho * dir[i];
      const double q = 1.0 / (2.0 * pi * pi * std::pow(rho * rho + s2, 3) * z_norm);
      weight = 1.0 / q;
    } else {
      const double rho = R * std::pow(unif(rng), 0.25);
      for (int i = 0; i < 4; ++i) x[i] = rho * dir[i];
      weight = ball_volume;
    }
    return x;
  };

  constexpr long kChunk = 1024;
  const long chunks = (opt.samples + kChunk - 1) / kChunk;
  std::vector<Accumulator> acc(chunks);
  auto run_chunk = [&](long ci) {
    Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(ci)));
    const long end = std::min(opt.samples, (ci + 1) * kChunk);
    Accumulator& a = acc[ci];
    for (long i = ci * kChunk; i < end; ++i) {
      double w = 0;
      const Point x = draw(rng, w);
      if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] > R * R) continue;
      const FieldPoint fp = gauge_field_at(m, x, opt.h);
      const double v = w * charge_density(fp);
      a.sum += v;
      a.sum_sq += v * v;
      a.asd_max = std::max(a.asd_max, asd_residual(fp));
    }
  };

  const int nthreads = std::min<long>(thread_count(opt.threads), chunks);
  std::exception_ptr failure;
  if (nthreads <= 1) {
    for (long ci = 0; ci < chunks; ++ci) run_chunk(ci);
  } else {
    std::atomic<long> next{0};
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (long ci = next++; ci < chunks; ci = next++) {
          try {
            run_chunk(ci);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);

  double sum = 0, sum_sq = 0;
  for (const auto& a : acc) {
    sum += a.sum;
    sum_sq += a.sum_sq;
    rep.asd_max = std::max(rep.asd_max, a.asd_max);
  }
  const double n = static_cast<double>(opt.samples);
  const double mean = sum / n;
  rep.stderr_ = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n);

  // Tail: density modelled as C / (|x|^2 + s^2)^4, which decays like |x|^-8
  // (|F| = O(|x|^-4)); C is the shell average of density (|x|^2 + s^2)^4
  // over [0.8 R, R].
  Rng rng(derive_seed(opt.seed, ~std::uint64_t{0}));
  std::uniform_real_distribution<double> unif(0.8 * R, R);
  constexpr int kShell = 256;
  double c_est = 0;
  for (int i = 0; i < kShell; ++i) {
    const Point dir = uniform_direction(rng);
    const double rho = unif(rng);
    Point x;
    for (int j = 0; j < 4; ++j) x[j] = rho * dir[j];
    c_est += charge_density(gauge_field_at(m, x, opt.h)) * std::pow(rho * rho + s2, 4);
  }
  c_est /= kShell;
  const double w = R * R + s2;
  rep.tail = pi * pi * c_est * (1.0 / (2.0 * w * w) - s2 / (3.0 * w * w * w));
  rep.charge = mean + rep.tail;
  return rep;
}

double asd_residual_max(const AdhmDatumS4& m, double radius, int points, std::uint64_t seed,
                        double h) {
  require_regular(m);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0;
  for (int i = 0; i < points; ++i) {
    const Point dir = uniform_direction(rng);
    const double rho = radius * std::pow(unif(rng), 0.25);
    Point x;
    for (int j = 0; j < 4; ++j) x[j] = rho * dir[j];
    worst = std::max(worst, asd_residual(gauge_field_at(m, x, h)));
  }
  return worst;
}

AdhmDatumS4 one_instanton(double rho) {
  AdhmDatumS4 m = AdhmDatumS4::zero(1, 2);
  m.b(0, 0) = rho;
  m.c(1, 0) = rho;
  return m;
}

}  // namespace adhm
