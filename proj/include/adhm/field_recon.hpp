#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "adhm/adhm_s4.hpp"

namespace adhm {

/// Gauge potential and curvature at a point of R^4 with (z1, z2) =
/// (x1 + i x2, x3 + i x4). F is stored for index pairs in the order
/// 12, 13, 14, 23, 24, 34.
struct FieldPoint {
  std::array<double, 4> x{};
  std::array<CMat, 4> A;
  std::array<CMat, 6> F;
};

/// Index of F_{mu nu} (mu < nu, zero based) in FieldPoint::F.
int curvature_index(int mu, int nu);

/// alpha(z) = (a1 - z1; a2 - z2; c) : W -> W + W + C^r
/// beta(z)  = (-(a2 - z2), a1 - z1, b) : W + W + C^r -> W
/// beta alpha = [a1, a2] + b c for every z. Throws PreconditionError unless
/// the datum is regular at zeta = 0 (integrable, mu = 0, C1 and C2 hold).
std::pair<CMat, CMat> monad_maps(const AdhmDatumS4& m, cplx z1, cplx z2);

/// Throws PreconditionError unless m is a regular datum at zeta = 0.
void require_regular(const AdhmDatumS4& m);

/// Orthonormal basis of ker beta(z) cap (im alpha(z))^perp, (2k + r) x r.
/// With a reference frame the result is rotated by the unitary that brings it
/// closest to the reference. Throws NumericalError if the fiber dimension is
/// not r at z. The datum is assumed regular (no check; see monad_maps).
CMat fiber_frame(const AdhmDatumS4& m, cplx z1, cplx z2,
                 const std::optional<CMat>& gauge_ref = std::nullopt);

/// A_mu = psi* d_mu psi and F_{mu nu} from 33 gauge-aligned frames by central
/// differences with step h in [1e-6, 1e-2].
FieldPoint gauge_field_at(const AdhmDatumS4& m, const std::array<double, 4>& x,
                          double h = 1e-3);

/// |F + *F| / |F| in the orientation dx1 dx2 dx3 dx4 > 0; 0 when F = 0.
double asd_residual(const FieldPoint& fp);

/// (1/8 pi^2) tr(F ^ F) / d^4x.
double charge_density(const FieldPoint& fp);

struct ChargeOptions {
  double radius = 6.0;
  long samples = 200000;
  std::uint64_t seed = 1;
  double h = 1e-3;
  /// Radial importance sampling around the data center; uniform sampling of
  /// the ball otherwise.
  bool importance = true;
  /// Worker threads; 0 reads ADHM_KIT_THREADS, falling back to the hardware.
  int threads = 0;
};

struct ChargeReport {
  double charge = 0;
  double stderr_ = 0;      // Monte Carlo standard error of the ball integral
  double tail = 0;         // analytic estimate of the integral beyond the radius
  double asd_max = 0;      // over the evaluated sample points
  double radius = 0;
  long samples = 0;
  double h = 0;
  bool importance = true;
};

/// Integrates the charge density over the ball of the given radius (centered
/// at the origin) and adds a |F| = O(|x|^-4) tail estimate.
ChargeReport charge_integral(const AdhmDatumS4& m, const ChargeOptions& opt = {});

/// Largest ASD residual over `points` uniform points of the ball.
double asd_residual_max(const AdhmDatumS4& m, double radius, int points,
                        std::uint64_t seed, double h = 1e-3);

/// The standard one-instanton datum k = 1, r = 2, scale rho:
/// a = 0, b = (rho, 0), c = (0, rho)^T.
AdhmDatumS4 one_instanton(double rho = 1.0);

}  // namespace adhm
