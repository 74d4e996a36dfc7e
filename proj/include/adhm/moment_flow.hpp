#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "adhm/adhm_s4.hpp"
#include "adhm/check_result.hpp"
#include "adhm/monad_p2.hpp"

namespace adhm {

struct FlowConfig {
  double step0 = 0.1;
  int max_iter = 20000;
  double tol = 1e-10;       // target |mu - level|_F
  double backtrack = 0.5;
  double grow = 2.0;
  int stall_window = 200;
  double escape_norm = 50.0;  // |log g| beyond which the orbit is declared unstable
  /// The moment flow is defined on any datum; turn this off to flow data
  /// off the integrable locus (the residual is still conserved and reported).
  bool require_integrable = true;
};

struct FlowReport {
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  double group_norm = 0.0;  // |log |g||_F of the accumulated group element
  bool instability_flag = false;
  double integrability_drift = 0.0;  // max change of |integrability residual|
};

template <typename Datum>
struct FlowResult {
  Datum datum;
  FlowReport report;
};

// --- samplers ---------------------------------------------------------------

/// Gaussian a1, a2, b (b of full row rank), c := -b^+ [a1, a2].
/// Requires r >= k; deterministic in `seed`.
AdhmDatumS4 random_integrable_s4(int k, int r, std::uint64_t seed, double scale);

/// Gaussian a1, a2, d, b, c := -b^+ (a1 d a2 - a2 d a1); resampled until the
/// surjectivity check holds (at most 100 attempts).
MonadDatumP2 random_integrable_p2(int k, int r, std::uint64_t seed, double scale);

/// Mirror sampler: Gaussian a1, a2, d, c (c of full column rank),
/// b := -(a1 d a2 - a2 d a1) c^+; resampled until surjectivity holds.
MonadDatumP2 random_integrable_p2_cside(int k, int r, std::uint64_t seed, double scale);

/// Integrable datum near m, reached by minimum-norm complex Newton steps on
/// the integrability residual. Throws NumericalError if it does not converge.
AdhmDatumS4 project_integrable(const AdhmDatumS4& m);
MonadDatumP2 project_integrable(const MonadDatumP2& m);
/// Gaussian data projected onto the integrable locus; no r >= k requirement.
/// The P^2 version resamples until surjectivity holds.
AdhmDatumS4 random_integrable_newton_s4(int k, int r, std::uint64_t seed, double scale);
MonadDatumP2 random_integrable_newton_p2(int k, int r, std::uint64_t seed, double scale);
double default_scale_s4(int k, int r);

/// (a1*, a2*, -c*, b*): integrable iff m is, with moment -mu(m).
AdhmDatumS4 dual_datum(const AdhmDatumS4& m);
double default_scale_p2(int k, int r);

// --- Kempf-Ness flows ---------------------------------------------------------

using ObserverS4 = std::function<void(const AdhmDatumS4&)>;
using ObserverP2 = std::function<void(const MonadDatumP2&)>;

/// Gradient descent of |mu(g m) + zeta 1|^2 over g = exp(h), h Hermitian,
/// with exact gradients and an Armijo line search. The observer (if any)
/// sees every accepted iterate.
FlowResult<AdhmDatumS4> kempf_ness_flow(const AdhmDatumS4& m, double zeta,
                                        const FlowConfig& cfg = {},
                                        const ObserverS4& observer = {});

/// Same for the pair group, objective |mu0|^2 + |mu1 - zeta 1|^2. A result
/// that has lost surjectivity is reported as an unstable, unconverged orbit.
FlowResult<MonadDatumP2> kempf_ness_flow(const MonadDatumP2& m, double zeta,
                                         const FlowConfig& cfg = {},
                                         const ObserverP2& observer = {});

/// Exact gradient of the flow objective with respect to a Hermitian
/// direction (one matrix per group factor). Exposed for cross-checks.
std::vector<CMat> flow_gradient(const AdhmDatumS4& m, double zeta);
std::vector<CMat> flow_gradient(const MonadDatumP2& m, double zeta);
double flow_objective(const AdhmDatumS4& m, double zeta);
double flow_objective(const MonadDatumP2& m, double zeta);
/// exp(h) . m for Hermitian h (one per factor).
AdhmDatumS4 act_exp(const std::vector<CMat>& h, const AdhmDatumS4& m);
MonadDatumP2 act_exp(const std::vector<CMat>& h, const MonadDatumP2& m);

/// Random integrable datum flowed to the level; retries with derived seeds
/// until a flow converges (at most `attempts`). Levels that the plain
/// samplers cannot reach start from dual_datum (S^4, zeta > 0) or the
/// c-side sampler (P^2, zeta < 0); r < k starts from the Newton samplers.
struct LevelSample {
  std::uint64_t seed = 0;
  int attempts = 0;
  FlowReport report;
};
std::pair<AdhmDatumS4, LevelSample> sample_on_level_s4(int k, int r, double zeta,
                                                       std::uint64_t seed,
                                                       const FlowConfig& cfg = {},
                                                       int attempts = 20);
std::pair<MonadDatumP2, LevelSample> sample_on_level_p2(int k, int r, double zeta,
                                                        std::uint64_t seed,
                                                        const FlowConfig& cfg = {},
                                                        int attempts = 20);

// --- smoothness ---------------------------------------------------------------

/// Real nullity of the Jacobian of (integrability, moment - level) minus the
/// real dimension of the orbit through m. Equals 4kr at smooth free points.
/// Throws PreconditionError when the level residual exceeds 1e-6 or the
/// datum is not integrable.
int tangent_dimension(const AdhmDatumS4& m, double zeta, const Tolerance& tol = {1e-8, 0});
int tangent_dimension(const MonadDatumP2& m, double zeta, const Tolerance& tol = {1e-8, 0});

/// Cokernel test for the differential of the integrability map: the system
///   c x = 0, x b = 0, a1 x a2 = a2 x a1, x a_i d = d a_i x
/// on x in Hom(W0, W1). Holds iff only x = 0 solves it; Fails carries a
/// unit-norm solution in `witness_map`.
CheckResult df_surjectivity_check(const MonadDatumP2& m, const Tolerance& tol = {});

// --- resolution experiments ---------------------------------------------------

struct ResolutionRecord {
  MonadDatumP2 representative;  // flowed towards mu = (0, 0)
  FlowReport report;
  AdhmDatumS4 p_image;           // p_map(representative)
  std::vector<double> p_norm_trace;  // |p(m_t)| along accepted steps
  bool p_norm_monotone_growth = false;
  Verdict c1p_before = Verdict::Unknown, c2p_before = Verdict::Unknown;
  Verdict c1p_after = Verdict::Unknown, c2p_after = Verdict::Unknown;
  /// The limit is not a regular instanton: the flow escaped, or the
  /// (0,0)-representative violates C1' or C2'.
  bool boundary = false;
};

/// Flows an on-level point of mu^{-1}(0, zeta) inside its GL x GL orbit to
/// mu^{-1}(0, 0).
ResolutionRecord resolution_project(const MonadDatumP2& m, double zeta,
                                    const FlowConfig& cfg = {});

struct BoundednessTrace {
  double a1_sq = 0, a2_sq = 0, b_sq = 0;
  double mixed = 0;  // sum |d a_i|^2 + |c|^2 - |d|^2
  double sum_rule_residual = 0;    // |a1|^2 + |a2|^2 + |b|^2 - k
  double mixed_rule_residual = 0;  // mixed - (k (1 - zeta) - sum |a_i|^2)
};

/// Norms bounded on mu^{-1}(0, zeta) by the trace identities.
BoundednessTrace boundedness_trace(const MonadDatumP2& m, double zeta);

}  // namespace adhm
