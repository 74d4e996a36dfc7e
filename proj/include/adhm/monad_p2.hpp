#pragma once

#include <utility>

#include "adhm/adhm_s4.hpp"
#include "adhm/check_result.hpp"
#include "adhm/linalg.hpp"

namespace adhm {

/// Monad configuration (a1, a2, d, b, c) for the reversed-orientation
/// projective plane, with W0 = W1 = C^k fixed through hermitian bases:
/// a_i : W1 -> W0, d : W0 -> W1, b : C^r -> W0, c : W1 -> C^r.
struct MonadDatumP2 {
  int k = 0;
  int r = 0;
  CMat a1, a2, d, b, c;

  static MonadDatumP2 zero(int k, int r);
  void validate() const;
  double norm() const;

  /// (a1*, a2*, d*, c*, b*) with the roles of W0 and W1 exchanged. C2' of
  /// this datum is C1' of the adjoint, read through orthogonal complements.
  MonadDatumP2 adjoint() const;

  MonadDatumP2 operator-(const MonadDatumP2& o) const;
};

struct MomentP2 {
  CMat mu0;  // on W0
  CMat mu1;  // on W1
};

/// a1 d a2 - a2 d a1 + b c  (W1 -> W0)
CMat integrability_residual(const MonadDatumP2& m);
bool is_integrable(const MonadDatumP2& m, double rel = 1e-9);

/// a1(W1) + a2(W1) + b(C^r) = W0. Fails with the orthogonal complement of
/// the column span of (a1 a2 b).
CheckResult surjectivity_check(const MonadDatumP2& m, const Tolerance& tol = {});

/// mu0 = a1 a1* + a2 a2* + b b* - 1
/// mu1 = [d a1,(d a1)*] + [d a2,(d a2)*] - a1* a1 - a2* a2 + (d b)(d b)* - c* c + 1
MomentP2 moment(const MonadDatumP2& m);

/// sqrt(|mu0|^2 + |mu1 - zeta 1|^2)
double level_residual(const MonadDatumP2& m, double zeta);

/// (g0, g1) . m = (g0 a1 g1^-1, g0 a2 g1^-1, g1 d g0^-1, g0 b, c g1^-1)
MonadDatumP2 act(const CMat& g0, const CMat& g1, const MonadDatumP2& m);

/// |(-d mu0 d* + mu1) - (-sum a_i*(d* d + 1) a_i - c* c + 1 + d d*)|_F.
/// Vanishes identically (not only on solutions).
double combined_identity_residual(const MonadDatumP2& m);

/// -sum a_i*(d* d + 1) a_i - c* c + 1 + d d*
CMat combined_identity_rhs(const MonadDatumP2& m);

/// Smallest singular values of (a1 a2 b) and of (a1; a2; c).
std::pair<double, double> max_rank_margins(const MonadDatumP2& m);

struct StabilityOptions {
  Tolerance tol{};
  /// Closure evaluations allowed in the enlargement search before giving up
  /// with Unknown.
  int enlargement_budget = 50;
};

/// C1': no proper pair V0' in W0, V1' in W1 with dim V0' = dim V1',
/// im b in V0', d V0' in V1', a_i V1' in V0'. Three-valued:
///  - Holds when the closure of (im b, 0) fills W0 or W1;
///  - Fails when the closure itself (or a budgeted enlargement of it) can be
///    completed to an equal-dimension proper pair; the witness is that pair;
///  - Unknown when the enlargement budget runs out.
CheckResult check_c1_prime(const MonadDatumP2& m, const StabilityOptions& opt = {});

/// C2': no nonzero pair V0, V1 with dim V0 = dim V1, V1 in ker c,
/// d V0 in V1, a_i V1 in V0. Evaluated as C1' of the adjoint datum; the
/// witness (V0, V1) is (complement of V1'', complement of V0'').
CheckResult check_c2_prime(const MonadDatumP2& m, const StabilityOptions& opt = {});

/// Re-checks a C1' witness pair (V0', V1') against the defining clauses.
bool is_c1_prime_witness(const MonadDatumP2& m, const Subspace& v0,
                         const Subspace& v1, double tol = 1e-7);
/// Re-checks a C2' witness pair (V0, V1).
bool is_c2_prime_witness(const MonadDatumP2& m, const Subspace& v0,
                         const Subspace& v1, double tol = 1e-7);

/// Real dimension of { (h0, h1) anti-Hermitian : h0 a_i = a_i h1,
/// h1 d = d h0, h0 b = 0, c h1 = 0 }.
int stabilizer_dim(const MonadDatumP2& m, const Tolerance& tol = {});

/// p(a1, a2, d, b, c) = (d a1, d a2, d b, c), an S^4-shaped datum on W1.
AdhmDatumS4 p_map(const MonadDatumP2& m);

}  // namespace adhm
