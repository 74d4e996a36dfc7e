#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "adhm/stab_limit.hpp"

namespace adhm {

/// Invalid command line or configuration; maps to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;  // sample | check | flow | homotopy-verify | dimension | resolve | field | identities
  Geometry geometry = Geometry::S4;
  int k = 1;
  int r = 1;
  std::optional<double> zeta;  // default 0.5, or 0 for `field`
  std::uint64_t seed = 1;
  double tol = 1e-11;           // flow target for the level residual
  std::string out;              // NDJSON destination; empty or "-" for stdout
  int samples = 10;
  // `field` only
  long mc_samples = 200000;
  double radius = 6.0;
  // `check` only: NDJSON file of data instead of fresh samples
  std::string input;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;

/// Throws ConfigError with an actionable message.
void validate(const RunConfig& cfg);

/// Runs one batch, writing one JSON record per item and a summary record
/// last. Returns kExitOk, kExitViolation or kExitConfig; diagnostics go to
/// `log`.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace adhm
