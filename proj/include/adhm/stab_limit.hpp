#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "adhm/adhm_s4.hpp"
#include "adhm/monad_p2.hpp"

namespace adhm {

enum class Geometry { S4, P2 };

constexpr std::string_view to_string(Geometry g) {
  return g == Geometry::S4 ? "s4" : "p2";
}

/// Positive split of the S^4 level: zeta_c - zeta_b = zeta.
struct SplitParams {
  double zeta_b = 1.0;
  double zeta_c = 1.0;

  /// zeta_b = max(1, 1 - zeta), zeta_c = zeta_b + zeta.
  static SplitParams default_for(double zeta);
};

/// Zero-pads b on the right and c below to rank r_new.
AdhmDatumS4 embed_s4(const AdhmDatumS4& m, int r_new);
MonadDatumP2 embed_p2(const MonadDatumP2& m, int r_new);

/// Rank r + 2k path from the embedding (t = 0) to a constant (t = 1):
///   a_t = sqrt(1-t) a,
///   b_t = (sqrt(1-t) b, 0, sqrt(t zeta_b) 1),
///   c_t = (sqrt(1-t) c; sqrt(t zeta_c) 1; 0).
/// Throws PreconditionError when m is off the level -zeta or the split does
/// not match zeta.
AdhmDatumS4 homotopy_s4(const AdhmDatumS4& m, double zeta, double t,
                        const SplitParams& split);

/// The t = 1 value of homotopy_s4 (independent of the datum).
AdhmDatumS4 homotopy_s4_endpoint(int k, int r, const SplitParams& split);

/// Rank r + 3k path from the embedding (t = 0) to f(m) = (0, 0, d, b1, c1):
///   b_t = (sqrt(1-t) b, 0, sqrt(t) 1, 0),
///   c_t = (sqrt(1-t) c; sqrt(t) d*; 0; sqrt(t (1 - zeta)) 1).
/// The last block makes mu1 = zeta hold for every |zeta| < 1; other values
/// throw UnsupportedParameter.
MonadDatumP2 homotopy_p2_h(const MonadDatumP2& m, double zeta, double t);

/// Second path (0, 0, (1-t) d, b1, (0; (1-t) d*; 0; sqrt(1 - zeta) 1)) from
/// f(m) (t = 0) to a constant (t = 1).
MonadDatumP2 homotopy_p2_htilde(const MonadDatumP2& m, double zeta, double t);

/// The t = 1 value of homotopy_p2_htilde.
MonadDatumP2 homotopy_p2_endpoint(int k, int r, double zeta);

struct HomotopyReport {
  Geometry geometry = Geometry::S4;
  double zeta = 0;
  std::vector<double> grid;
  double max_level_residual = 0;
  double max_integrability_residual = 0;
  double residual_bound = 0;  // 1e-10 (1 + |m|^2)
  bool start_is_embedding = false;  // t = 0 equals the padded datum bit for bit
  double endpoint_distance = 0;     // |output(t=1) - constant|
  bool endpoint_constancy = false;  // endpoint_distance <= 1e-12
  int regularity_failures = 0;      // Fails at some t > 0
  int regularity_unknown = 0;       // Unknown at some t > 0
  int regularity_checks = 0;
  AdhmDatumS4 endpoint_s4;    // S^4 only
  MonadDatumP2 endpoint_p2;   // P^2 only (end of the composite path)

  bool ok() const {
    return max_level_residual <= residual_bound &&
           max_integrability_residual <= residual_bound && start_is_embedding &&
           endpoint_constancy && regularity_failures == 0;
  }
};

/// Evaluates homotopy_s4 on the grid (which must contain 0 and 1) and checks
/// level, integrability, endpoints and C1/C2 for t > 0.
HomotopyReport verify_null_homotopy(const AdhmDatumS4& m, double zeta,
                                    const std::vector<double>& grid,
                                    const std::optional<SplitParams>& split = {});

/// Same for the composite P^2 path: h on the grid, then h-tilde on the
/// grid, with C1' and C2' checked at every t > 0 of both legs.
HomotopyReport verify_null_homotopy(const MonadDatumP2& m, double zeta,
                                    const std::vector<double>& grid);

/// 0, 0.1, ..., 1
std::vector<double> uniform_grid(int points = 11);

}  // namespace adhm
