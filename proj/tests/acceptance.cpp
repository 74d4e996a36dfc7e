// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "adhm/errors.hpp"
#include "adhm/field_recon.hpp"
#include "adhm/moment_flow.hpp"
#include "adhm/random.hpp"
#include "adhm/stab_limit.hpp"
#include "oracles.hpp"

using namespace adhm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

FlowConfig flow_cfg() {
  FlowConfig cfg;
  cfg.tol = 1e-11;
  return cfg;
}

// Sampled P^2 solutions shared by several criteria. k cycles 1..4 and r
// cycles k..k+1.
std::vector<MonadDatumP2> p2_samples(double zeta, int n, std::uint64_t base) {
  std::vector<MonadDatumP2> out;
  for (int i = 0; i < n; ++i) {
    const int k = 1 + i % 4;
    const int r = k + (i / 4) % 2;
    out.push_back(sample_on_level_p2(k, r, zeta, derive_seed(base, i), flow_cfg()).first);
  }
  return out;
}

CMat upper_triangular(Rng& rng) {
  CMat m = gaussian_matrix(rng, 2, 2, 1.0);
  m(1, 0) = 0;
  return m;
}

// Random k <= 2 data with a share of degenerate shapes.
AdhmDatumS4 oracle_datum(Rng& rng, int i) {
  const int k = i % 5 == 0 ? 1 : 2;
  const int r = 1 + (i / 5) % 2;
  AdhmDatumS4 m{k, r, gaussian_matrix(rng, k, k, 1), gaussian_matrix(rng, k, k, 1),
                gaussian_matrix(rng, k, r, 1), gaussian_matrix(rng, r, k, 1)};
  if (k == 1) {
    if (i % 3 == 0) m.b.setZero();
    if (i % 3 == 1) m.c.setZero();
    return m;
  }
  switch (i % 8) {
    case 0: m.b.setZero(); break;
    case 1: m.c.setZero(); break;
    case 2:  // common invariant line e1, im b inside it
      m.a1 = upper_triangular(rng);
      m.a2 = upper_triangular(rng);
      m.b.row(1).setZero();
      if (r == 2) m.b.col(1) = 0.5 * m.b.col(0);
      break;
    case 3:  // common invariant line e1 inside ker c
      m.a1 = upper_triangular(rng);
      m.a2 = upper_triangular(rng);
      m.c.col(0).setZero();
      break;
    case 4:  // commuting a's, shared eigenlines, rank one b and c
      m.a2 = 2.0 * m.a1 + CMat::Identity(2, 2);
      m.b = m.b.col(0) * CMat::Ones(1, r);
      m.c = CMat::Ones(r, 1) * m.c.row(0);
      break;
    case 5:  // scalar a's: every line is invariant
      m.a1 = cplx(0.7, 0.2) * CMat::Identity(2, 2);
      m.a2 = cplx(-0.3, 0.1) * CMat::Identity(2, 2);
      m.b = m.b.col(0) * CMat::Ones(1, r);
      break;
    default: break;
  }
  return m;
}

AdhmDatumS4 regular_zeta0_datum(int k, int r, std::uint64_t seed) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    const auto s = derive_seed(seed, attempt);
    const auto res = kempf_ness_flow(
        random_integrable_s4(k, r, s, default_scale_s4(k, r)), 0.0, flow_cfg());
    if (res.report.converged && check_c1(res.datum).holds() && check_c2(res.datum).holds()) {
      return res.datum;
    }
  }
  throw SamplerError("no regular zeta = 0 datum");
}

}  // namespace

int main() {
  std::vector<AdhmDatumS4> s4_points;
  std::vector<double> s4_zetas;

  criterion(1, "S4 homotopy preserves level and integrability", [&] {
    const auto t0 = Clock::now();
    std::vector<std::tuple<int, int, double>> configs;
    for (double zeta : {0.5, -0.5})
      for (int k = 1; k <= 4; ++k)
        for (int r = k; r <= 6; ++r) configs.emplace_back(k, r, zeta);

    std::map<std::tuple<int, int, double>, std::vector<AdhmDatumS4>> endpoints;
    double worst_level = 0, worst_int = 0, spread = 0;
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
      const auto [k, r, zeta] = configs[i % configs.size()];
      const AdhmDatumS4 m = sample_on_level_s4(k, r, zeta, derive_seed(101, i), flow_cfg()).first;
      s4_points.push_back(m);
      s4_zetas.push_back(zeta);
      const HomotopyReport rep = verify_null_homotopy(m, zeta, uniform_grid(11));
      worst_level = std::max(worst_level, rep.max_level_residual / (1 + m.norm() * m.norm()));
      worst_int = std::max(worst_int, rep.max_integrability_residual);
      if (rep.max_level_residual > rep.residual_bound || rep.max_integrability_residual > 1e-10 ||
          !rep.start_is_embedding || !rep.endpoint_constancy) {
        ++bad;
      }
      auto& group = endpoints[configs[i % configs.size()]];
      for (const auto& e : group) spread = std::max(spread, (e - rep.endpoint_s4).norm());
      group.push_back(rep.endpoint_s4);
    }
    const double t = seconds_since(t0);
    return Outcome{bad == 0 && spread <= 1e-12 && t < 30,
                   fmt("100 points, level/(1+|m|^2) max %.2e, integrability max %.2e, "
                       "endpoint spread %.1e, %d bad, %.1f s",
                       worst_level, worst_int, spread, bad, t)};
  });

  criterion(2, "P2 composite homotopy at zeta = 0.5", [&] {
    const auto t0 = Clock::now();
    std::map<std::pair<int, int>, std::vector<MonadDatumP2>> endpoints;
    double spread = 0, worst_level = 0;
    int bad = 0, fails = 0, unknown = 0, checks = 0;
    for (int i = 0; i < 100; ++i) {
      const int k = 1 + i % 4, r = k + (i / 4) % 3;
      const MonadDatumP2 m = sample_on_level_p2(k, r, 0.5, derive_seed(202, i), flow_cfg()).first;
      const HomotopyReport rep = verify_null_homotopy(m, 0.5, uniform_grid(11));
      worst_level = std::max(worst_level, rep.max_level_residual / (1 + m.norm() * m.norm()));
      if (rep.max_level_residual > rep.residual_bound ||
          rep.max_integrability_residual > rep.residual_bound || !rep.start_is_embedding ||
          !rep.endpoint_constancy) {
        ++bad;
      }
      fails += rep.regularity_failures;
      unknown += rep.regularity_unknown;
      checks += rep.regularity_checks;
      auto& group = endpoints[{k, r}];
      for (const auto& e : group) spread = std::max(spread, (e - rep.endpoint_p2).norm());
      group.push_back(rep.endpoint_p2);
    }
    const double rate = checks ? double(unknown) / checks : 0.0;
    const double t = seconds_since(t0);
    return Outcome{bad == 0 && fails == 0 && rate < 0.05 && spread <= 1e-12 && t < 120,
                   fmt("100 points, level/(1+|m|^2) max %.2e, endpoint spread %.1e, "
                       "%d bad, C1'/C2' Fails %d, Unknown %d of %d checks (%.2f%%), %.1f s",
                       worst_level, spread, bad, fails, unknown, checks, 100 * rate, t)};
  });

  const auto t_samples = Clock::now();
  const std::vector<MonadDatumP2> pos = p2_samples(0.5, 200, 303);
  const std::vector<MonadDatumP2> neg = p2_samples(-0.5, 200, 404);
  std::printf("(sampled 400 P2 solutions in %.1f s)\n", seconds_since(t_samples));

  criterion(3, "combined and trace identities", [&] {
    Rng rng(5);
    double worst = 0;
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const int k = 1 + i % 4, r = 1 + (i / 4) % 4;
      MonadDatumP2 x = MonadDatumP2::zero(k, r);
      const double scale = 0.3 + (i % 7) * 0.4;
      for (CMat* mat : {&x.a1, &x.a2, &x.d, &x.b, &x.c})
        *mat = gaussian_matrix(rng, mat->rows(), mat->cols(), scale);
      const double rel = combined_identity_residual(x) / (1 + std::pow(x.norm(), 4));
      worst = std::max(worst, rel);
      bad += rel > 1e-11;
    }
    double trace_worst = 0;
    for (const auto* set : {&pos, &neg}) {
      const double zeta = set == &pos ? 0.5 : -0.5;
      for (const auto& m : *set) {
        const BoundednessTrace t = boundedness_trace(m, zeta);
        trace_worst = std::max({trace_worst, std::abs(t.sum_rule_residual),
                                std::abs(t.mixed_rule_residual)});
      }
    }
    return Outcome{bad == 0 && trace_worst <= 1e-8,
                   fmt("1000 random data, max residual/(1+|m|^4) %.2e; 400 solutions, "
                       "max trace identity residual %.2e",
                       worst, trace_worst)};
  });

  criterion(4, "maximal rank margins", [&] {
    double lo = 1e300;
    for (const auto* set : {&pos, &neg})
      for (const auto& m : *set) {
        const auto [a, b] = max_rank_margins(m);
        lo = std::min({lo, a, b});
      }
    return Outcome{lo > 1e-6, fmt("400 solutions at zeta = +-0.5, smallest margin %.3e", lo)};
  });

  criterion(5, "C1' at zeta > 0 and C2' at zeta < 0", [&] {
    int f1 = 0, u1 = 0, f2 = 0, u2 = 0;
    for (const auto& m : pos) {
      const Verdict v = check_c1_prime(m).verdict;
      f1 += v == Verdict::Fails;
      u1 += v == Verdict::Unknown;
    }
    for (const auto& m : neg) {
      const Verdict v = check_c2_prime(m).verdict;
      f2 += v == Verdict::Fails;
      u2 += v == Verdict::Unknown;
    }
    return Outcome{f1 == 0 && f2 == 0,
                   fmt("C1' Fails %d (Unknown %d) of 200 at +0.5; C2' Fails %d (Unknown %d) "
                       "of 200 at -0.5",
                       f1, u1, f2, u2)};
  });

  criterion(6, "free action", [&] {
    int p2_bad = 0, s4_bad = 0;
    for (const auto& m : pos) p2_bad += stabilizer_dim(m) != 0;
    for (const auto& m : s4_points) s4_bad += stabilizer_dim(m) != 0;
    return Outcome{p2_bad == 0 && s4_bad == 0,
                   fmt("nonzero stabilizers: P2 %d of %zu, S4 %d of %zu", p2_bad, pos.size(),
                       s4_bad, s4_points.size())};
  });

  criterion(7, "tangent dimension 4kr and df surjectivity", [&] {
    const auto t0 = Clock::now();
    int bad_dim = 0, bad_df = 0, total = 0;
    for (int k = 1; k <= 4; ++k)
      for (int r = k; r <= k + 1; ++r)
        for (int i = 0; i < 20; ++i) {
          const MonadDatumP2 m =
              sample_on_level_p2(k, r, 0.5, derive_seed(505 + 10 * k + r, i), flow_cfg()).first;
          bad_dim += tangent_dimension(m, 0.5) != 4 * k * r;
          bad_df += !df_surjectivity_check(m).holds();
          ++total;
        }
    const double t = seconds_since(t0);
    return Outcome{bad_dim == 0 && bad_df == 0 && t < 300,
                   fmt("%d samples, dimension mismatches %d, df not surjective %d, %.1f s",
                       total, bad_dim, bad_df, t)};
  });

  criterion(8, "C1/C2 deciders agree with the brute-force oracle", [&] {
    Rng rng(606);
    int disagree = 0, c1_fail = 0, c2_fail = 0;
    for (int i = 0; i < 500; ++i) {
      const AdhmDatumS4 m = oracle_datum(rng, i);
      const bool c1 = check_c1(m).holds(), c2 = check_c2(m).holds();
      disagree += (c1 != oracle::c1_holds(m)) + (c2 != oracle::c2_holds(m));
      c1_fail += !c1;
      c2_fail += !c2;
    }
    return Outcome{disagree == 0, fmt("500 data (C1 fails on %d, C2 fails on %d), %d "
                                      "disagreements",
                                      c1_fail, c2_fail, disagree)};
  });

  criterion(9, "field reconstruction", [&] {
    const auto t0 = Clock::now();
    const AdhmDatumS4 one = one_instanton(1.0);
    const double asd = asd_residual_max(one, 3.0, 100, 707, 1e-3);
    ChargeOptions opt;
    opt.radius = 6.0;
    opt.samples = 200000;
    opt.seed = 708;
    const ChargeReport q1 = charge_integral(one, opt);
    const AdhmDatumS4 two = regular_zeta0_datum(2, 2, 709);
    opt.samples = 100000;
    opt.seed = 710;
    const ChargeReport q2 = charge_integral(two, opt);
    const double t = seconds_since(t0);
    const bool ok = asd <= 1e-3 && std::abs(q1.charge - 1) <= 0.02 &&
                    std::abs(q2.charge - 2) <= 0.05 && t < 600;
    return Outcome{ok, fmt("ASD max %.2e; k=1 charge %.4f +- %.4f (tail %.4f); k=2 charge "
                           "%.4f +- %.4f; %.1f s",
                           asd, q1.charge, q1.stderr_, q1.tail, q2.charge, q2.stderr_, t)};
  });

  criterion(10, "scalar Kempf-Ness flow", [&] {
    AdhmDatumS4 m = AdhmDatumS4::zero(1, 1);
    m.b(0, 0) = 2;
    m.c(0, 0) = 1;
    FlowConfig cfg = flow_cfg();
    cfg.require_integrable = false;  // b c = 2
    const auto res = kempf_ness_flow(m, 1.0, cfg);
    const double lambda = std::sqrt(oracle::scalar_flow_lambda_sq());
    const double err = std::abs(std::abs(res.datum.b(0, 0)) - 2 * lambda) +
                       std::abs(std::abs(res.datum.c(0, 0)) - 1 / lambda);
    const bool ok = res.report.converged && res.report.final_residual <= 1e-10 &&
                    res.report.iterations <= 200 && err <= 1e-9;
    return Outcome{ok, fmt("%d iterations, residual %.2e, distance to closed form %.2e",
                           res.report.iterations, res.report.final_residual, err)};
  });

  criterion(11, "resolution experiments", [&] {
    // the first 50 samples on which both C1' and C2' hold
    int bad = 0, skipped = 0, used = 0;
    for (std::size_t i = 0; i < pos.size() && used < 50; ++i) {
      const MonadDatumP2& m = pos[i];
      if (!(check_c1_prime(m).holds() && check_c2_prime(m).holds())) {
        ++skipped;
        continue;
      }
      ++used;
      const ResolutionRecord rec = resolution_project(m, 0.5);
      bad += !rec.report.converged || rec.c1p_after != rec.c1p_before ||
             rec.c2p_after != rec.c2p_before;
    }
    MonadDatumP2 bp = MonadDatumP2::zero(1, 1);
    bp.a1(0, 0) = std::sqrt(0.5);
    bp.b(0, 0) = std::sqrt(0.5);
    const ResolutionRecord edge = resolution_project(bp, 0.5);
    const bool edge_ok = edge.p_image.norm() == 0 && edge.boundary;
    return Outcome{bad == 0 && used == 50 && edge_ok,
                   fmt("%d regular points (%d non-regular samples skipped): %d not converged or "
                       "verdict changed; boundary example p = 0 and flagged: %s",
                       used, skipped, bad, edge_ok ? "yes" : "no")};
  });

  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
