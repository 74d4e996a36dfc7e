#include "adhm/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "adhm/errors.hpp"
#include "adhm/field_recon.hpp"
#include "adhm/json_io.hpp"
#include "adhm/moment_flow.hpp"
#include "adhm/random.hpp"

namespace adhm {

namespace {

const std::vector<std::string> kCommands{"sample",    "check",   "flow",  "homotopy-verify",
                                         "dimension", "resolve", "field", "identities"};

double zeta_of(const RunConfig& cfg) {
  return cfg.zeta.value_or(cfg.command == "field" ? 0.0 : 0.5);
}

int worker_count() {
  if (const char* env = std::getenv("ADHM_KIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs item(i) for i < n on a small pool; results come back in index order.
// A thrown exception becomes an error record that counts as a violation.
template <typename F>
std::vector<json> batch(int n, F&& item) {
  std::vector<json> out(n);
  auto one = [&](int i) {
    try {
      out[i] = item(i);
    } catch (const std::exception& e) {
      out[i] = {{"error", e.what()}, {"violation", true}};
    }
    out[i]["index"] = i;
  };
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) one(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) one(i);
    });
  }
  return out;
}

FlowConfig flow_config(const RunConfig& cfg) {
  FlowConfig fc;
  fc.tol = cfg.tol;
  return fc;
}

std::uint64_t item_seed(const RunConfig& cfg, int i) {
  return derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
}

// --- commands -----------------------------------------------------------------

json cmd_sample(const RunConfig& cfg, int i) {
  const double zeta = zeta_of(cfg);
  json rec;
  if (cfg.geometry == Geometry::S4) {
    auto [m, info] = sample_on_level_s4(cfg.k, cfg.r, zeta, item_seed(cfg, i), flow_config(cfg));
    rec = {{"datum", m}, {"sample", info}, {"level_residual", level_residual(m, zeta)}};
  } else {
    auto [m, info] = sample_on_level_p2(cfg.k, cfg.r, zeta, item_seed(cfg, i), flow_config(cfg));
    rec = {{"datum", m}, {"sample", info}, {"level_residual", level_residual(m, zeta)}};
    rec["datum"]["zeta"] = zeta;
  }
  rec["zeta"] = zeta;
  rec["violation"] = false;
  return rec;
}

json check_s4(const AdhmDatumS4& m, double zeta) {
  const CheckResult c1 = check_c1(m), c2 = check_c2(m);
  const int stab = stabilizer_dim(m);
  // mu = -zeta 1 forces C1 for zeta < 0 and C2 for zeta > 0.
  const bool violation = (zeta < 0 && !c1.holds()) || (zeta > 0 && !c2.holds()) ||
                         (zeta != 0 && stab != 0);
  return {{"c1", c1}, {"c2", c2}, {"stabilizer_dim", stab},
          {"level_residual", level_residual(m, zeta)}, {"violation", violation}};
}

json check_p2(const MonadDatumP2& m, double zeta) {
  const CheckResult surj = surjectivity_check(m);
  const CheckResult c1 = check_c1_prime(m), c2 = check_c2_prime(m);
  const int stab = stabilizer_dim(m);
  const auto [margin_row, margin_col] = max_rank_margins(m);
  const bool violation = !surj.holds() || (zeta > 0 && c1.fails()) ||
                         (zeta < 0 && c2.fails()) || (zeta != 0 && stab != 0) ||
                         (zeta != 0 && !(std::min(margin_row, margin_col) > 1e-6));
  return {{"surjectivity", surj}, {"c1p", c1}, {"c2p", c2}, {"stabilizer_dim", stab},
          {"rank_margin_abb", margin_row}, {"rank_margin_aac", margin_col},
          {"level_residual", level_residual(m, zeta)}, {"violation", violation}};
}

json cmd_flow(const RunConfig& cfg, int i) {
  const double zeta = zeta_of(cfg);
  const std::uint64_t seed = item_seed(cfg, i);
  json rec{{"seed", seed}, {"zeta", zeta}};
  if (cfg.geometry == Geometry::S4) {
    const double scale = default_scale_s4(cfg.k, cfg.r);
    const auto m = cfg.r < cfg.k ? random_integrable_newton_s4(cfg.k, cfg.r, seed, scale)
                                 : random_integrable_s4(cfg.k, cfg.r, seed, scale);
    const auto res = kempf_ness_flow(m, zeta, flow_config(cfg));
    rec["flow"] = res.report;
    rec["datum"] = res.datum;
    rec["violation"] = !res.report.converged;
  } else {
    const double scale = default_scale_p2(cfg.k, cfg.r);
    const auto m = cfg.r < cfg.k ? random_integrable_newton_p2(cfg.k, cfg.r, seed, scale)
                                 : random_integrable_p2(cfg.k, cfg.r, seed, scale);
    const auto res = kempf_ness_flow(m, zeta, flow_config(cfg));
    rec["flow"] = res.report;
    rec["datum"] = res.datum;
    rec["datum"]["zeta"] = zeta;
    rec["violation"] = !res.report.converged;
  }
  return rec;
}

json cmd_homotopy(const RunConfig& cfg, int i, json& endpoint) {
  const double zeta = zeta_of(cfg);
  const auto grid = uniform_grid(11);
  HomotopyReport rep;
  if (cfg.geometry == Geometry::S4) {
    auto [m, info] = sample_on_level_s4(cfg.k, cfg.r, zeta, item_seed(cfg, i), flow_config(cfg));
    rep = verify_null_homotopy(m, zeta, grid);
    endpoint = rep.endpoint_s4;
  } else {
    auto [m, info] = sample_on_level_p2(cfg.k, cfg.r, zeta, item_seed(cfg, i), flow_config(cfg));
    rep = verify_null_homotopy(m, zeta, grid);
    endpoint = rep.endpoint_p2;
  }
  json rec = rep;
  rec["violation"] = !rep.ok();
  return rec;
}

json cmd_dimension(const RunConfig& cfg, int i) {
  const double zeta = zeta_of(cfg);
  const int expected = 4 * cfg.k * cfg.r;
  json rec{{"expected", expected}, {"zeta", zeta}};
  if (cfg.geometry == Geometry::S4) {
    auto [m, info] = sample_on_level_s4(cfg.k, cfg.r, zeta, item_seed(cfg, i), flow_config(cfg));
    const int dim = tangent_dimension(m, zeta);
    rec["tangent_dimension"] = dim;
    rec["violation"] = dim != expected;
  } else {
    auto [m, info] = sample_on_level_p2(cfg.k, cfg.r, zeta, item_seed(cfg, i), flow_config(cfg));
    const int dim = tangent_dimension(m, zeta);
    const CheckResult df = df_surjectivity_check(m);
    rec["tangent_dimension"] = dim;
    rec["df_surjectivity"] = df;
    rec["violation"] = dim != expected || !df.holds();
  }
  return rec;
}

json cmd_resolve(const RunConfig& cfg, int i) {
  const double zeta = zeta_of(cfg);
  auto [m, info] = sample_on_level_p2(cfg.k, cfg.r, zeta, item_seed(cfg, i), flow_config(cfg));
  FlowConfig fc = flow_config(cfg);
  const ResolutionRecord res = resolution_project(m, zeta, fc);
  const BoundednessTrace trace = boundedness_trace(m, zeta);
  const bool regular = res.c1p_before == Verdict::Holds && res.c2p_before == Verdict::Holds;
  const bool preserved = res.c1p_after == res.c1p_before && res.c2p_after == res.c2p_before;
  const bool bounded = std::abs(trace.sum_rule_residual) <= 1e-8 &&
                       std::abs(trace.mixed_rule_residual) <= 1e-8;
  json rec = res;
  rec["boundedness"] = trace;
  rec["violation"] = !bounded || (regular && (!res.report.converged || !preserved));
  return rec;
}

AdhmDatumS4 regular_datum(int k, int r, std::uint64_t seed, double tol) {
  if (k == 1 && r == 2) return one_instanton(1.0);
  FlowConfig fc;
  fc.tol = tol;
  for (int attempt = 0; attempt < 20; ++attempt) {
    const auto s = derive_seed(seed, static_cast<std::uint64_t>(attempt));
    const double scale = default_scale_s4(k, r);
    const auto m = r < k ? random_integrable_newton_s4(k, r, s, scale)
                         : random_integrable_s4(k, r, s, scale);
    const auto res = kempf_ness_flow(m, 0.0, fc);
    if (res.report.converged && check_c1(res.datum).holds() && check_c2(res.datum).holds()) {
      return res.datum;
    }
  }
  throw SamplerError("no regular zeta = 0 datum found within 20 attempts");
}

json cmd_field(const RunConfig& cfg, int i) {
  const AdhmDatumS4 m = regular_datum(cfg.k, cfg.r, item_seed(cfg, i), cfg.tol);
  ChargeOptions opt;
  opt.radius = cfg.radius;
  opt.samples = cfg.mc_samples;
  opt.seed = item_seed(cfg, i);
  opt.threads = 1;  // items already run in parallel
  const ChargeReport rep = charge_integral(m, opt);
  const double asd = asd_residual_max(m, 3.0, 100, item_seed(cfg, i));
  const double tol = std::max(4.0 * rep.stderr_, 0.02 * cfg.k);
  json rec{{"datum", m}, {"charge", rep}, {"asd_max_ball3", asd}};
  rec["violation"] = std::abs(rep.charge - cfg.k) > tol || asd > 1e-3;
  return rec;
}

json cmd_identities(const RunConfig& cfg, int i) {
  const double zeta = zeta_of(cfg);
  Rng rng(item_seed(cfg, i));
  MonadDatumP2 x = MonadDatumP2::zero(cfg.k, cfg.r);
  for (CMat* mat : {&x.a1, &x.a2, &x.d, &x.b, &x.c}) {
    *mat = gaussian_matrix(rng, mat->rows(), mat->cols(), 1.0);
  }
  const double n = x.norm();
  const double combined = combined_identity_residual(x);
  const double bound = 1e-11 * (1.0 + std::pow(n, 4));
  auto [m, info] = sample_on_level_p2(cfg.k, cfg.r, zeta, item_seed(cfg, i), flow_config(cfg));
  const BoundednessTrace trace = boundedness_trace(m, zeta);
  const bool ok = combined <= bound && std::abs(trace.sum_rule_residual) <= 1e-8 &&
                  std::abs(trace.mixed_rule_residual) <= 1e-8;
  return {{"combined_identity_residual", combined}, {"combined_identity_bound", bound},
          {"trace", trace}, {"violation", !ok}};
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open --input file '" + path + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  return lines;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end()) {
    throw ConfigError("unknown command '" + cfg.command + "'");
  }
  if (cfg.k < 1) throw ConfigError("--k must be >= 1");
  if (cfg.r < 1) throw ConfigError("--r must be >= 1");
  if (cfg.samples < 1) throw ConfigError("--samples must be >= 1");
  if (!(cfg.tol > 0)) throw ConfigError("--tol must be positive");
  const double zeta = zeta_of(cfg);
  if (!std::isfinite(zeta)) throw ConfigError("--zeta must be finite");
  if (cfg.geometry == Geometry::P2 && !(std::abs(zeta) < 1.0)) {
    throw ConfigError("--zeta must satisfy |zeta| < 1 for p2");
  }
  if (cfg.command == "resolve" && cfg.geometry != Geometry::P2) {
    throw ConfigError("resolve needs --geometry p2");
  }
  if (cfg.command == "identities" && cfg.geometry != Geometry::P2) {
    throw ConfigError("identities needs --geometry p2");
  }
  if (cfg.command == "field") {
    if (cfg.geometry != Geometry::S4) throw ConfigError("field needs --geometry s4");
    if (zeta != 0.0) throw ConfigError("field reconstruction needs --zeta 0");
    if (cfg.mc_samples < 1) throw ConfigError("--mc-samples must be >= 1");
    if (!(cfg.radius > 0)) throw ConfigError("--radius must be positive");
  }
  if (cfg.command != "field" && zeta == 0.0 &&
      (cfg.command == "sample" || cfg.command == "homotopy-verify" ||
       cfg.command == "dimension" || cfg.command == "resolve")) {
    throw ConfigError("this command needs a nonzero --zeta");
  }
}

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    log << "adhm-kit: " << e.what() << '\n';
    return kExitConfig;
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.out.empty() && cfg.out != "-") {
    file.open(cfg.out);
    if (!file) {
      log << "adhm-kit: cannot write '" << cfg.out << "'\n";
      return kExitConfig;
    }
    out = &file;
  }

  const double zeta = zeta_of(cfg);
  std::vector<json> records;
  json extra = json::object();
  try {
    if (cfg.command == "sample") {
      records = batch(cfg.samples, [&](int i) { return cmd_sample(cfg, i); });
    } else if (cfg.command == "check") {
      if (cfg.input.empty()) {
        records = batch(cfg.samples, [&](int i) {
          json rec = cmd_sample(cfg, i);
          const json datum = rec["datum"];
          json res = cfg.geometry == Geometry::S4 ? check_s4(datum.get<AdhmDatumS4>(), zeta)
                                                 : check_p2(datum.get<MonadDatumP2>(), zeta);
          res["seed"] = rec["sample"]["seed"];
          return res;
        });
      } else {
        const auto lines = read_lines(cfg.input);
        records = batch(static_cast<int>(lines.size()), [&](int i) {
          json j = json::parse(lines[i]);
          const json& datum = j.contains("datum") ? j["datum"] : j;
          return cfg.geometry == Geometry::S4 ? check_s4(datum.get<AdhmDatumS4>(), zeta)
                                              : check_p2(datum.get<MonadDatumP2>(), zeta);
        });
      }
    } else if (cfg.command == "flow") {
      records = batch(cfg.samples, [&](int i) { return cmd_flow(cfg, i); });
    } else if (cfg.command == "homotopy-verify") {
      std::vector<json> endpoints(cfg.samples);
      records = batch(cfg.samples, [&](int i) { return cmd_homotopy(cfg, i, endpoints[i]); });
      double spread = 0;
      for (int i = 1; i < cfg.samples; ++i) {
        if (endpoints[i].is_null() || endpoints[0].is_null()) continue;
        if (cfg.geometry == Geometry::S4) {
          spread = std::max(spread, (endpoints[i].get<AdhmDatumS4>() -
                                     endpoints[0].get<AdhmDatumS4>()).norm());
        } else {
          spread = std::max(spread, (endpoints[i].get<MonadDatumP2>() -
                                     endpoints[0].get<MonadDatumP2>()).norm());
        }
      }
      extra["endpoint_spread"] = spread;
      extra["endpoint_spread_ok"] = spread <= 1e-12;
    } else if (cfg.command == "dimension") {
      records = batch(cfg.samples, [&](int i) { return cmd_dimension(cfg, i); });
    } else if (cfg.command == "resolve") {
      records = batch(cfg.samples, [&](int i) { return cmd_resolve(cfg, i); });
    } else if (cfg.command == "field") {
      records = batch(cfg.samples, [&](int i) { return cmd_field(cfg, i); });
    } else if (cfg.command == "identities") {
      records = batch(cfg.samples, [&](int i) { return cmd_identities(cfg, i); });
    }
  } catch (const ConfigError& e) {
    log << "adhm-kit: " << e.what() << '\n';
    return kExitConfig;
  }

  int violations = 0, errors = 0;
  json counts = json::object();
  for (const json& rec : records) {
    *out << rec.dump() << '\n';
    if (rec.value("violation", false)) ++violations;
    if (rec.contains("error")) ++errors;
    for (const char* key : {"c1", "c2", "c1p", "c2p", "surjectivity", "df_surjectivity"}) {
      if (rec.contains(key)) {
        std::string name = std::string(key) + "_" + rec[key]["verdict"].get<std::string>();
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        counts[name] = counts.value(name, 0) + 1;
      }
    }
  }
  if (extra.value("endpoint_spread_ok", true) == false) ++violations;

  json summary{{"summary", true},
               {"command", cfg.command},
               {"geometry", to_string(cfg.geometry)},
               {"k", cfg.k},
               {"r", cfg.r},
               {"zeta", zeta},
               {"seed", cfg.seed},
               {"samples", records.size()},
               {"violations", violations},
               {"errors", errors},
               {"verdicts", counts}};
  summary.update(extra);
  *out << summary.dump() << '\n';
  out->flush();
  if (violations > 0) {
    log << "adhm-kit: " << violations << " contract violation(s)\n";
    return kExitViolation;
  }
  return kExitOk;
}

}  // namespace adhm
