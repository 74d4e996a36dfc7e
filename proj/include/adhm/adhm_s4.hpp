#pragma once

#include "adhm/check_result.hpp"
#include "adhm/linalg.hpp"

namespace adhm {

/// ADHM configuration (a1, a2, b, c) for S^4 with W = C^k and framing C^r:
/// a1, a2 : W -> W, b : C^r -> W, c : W -> C^r.
struct AdhmDatumS4 {
  int k = 0;
  int r = 0;
  CMat a1, a2, b, c;

  static AdhmDatumS4 zero(int k, int r);

  /// Throws DimensionError on shape mismatch, PreconditionError on
  /// non-finite entries.
  void validate() const;

  /// sqrt(|a1|^2 + |a2|^2 + |b|^2 + |c|^2)
  double norm() const;

  /// (a1*, a2*, c*, b*): the datum whose C1 closure encodes C2 of this one.
  AdhmDatumS4 adjoint() const;

  AdhmDatumS4 operator-(const AdhmDatumS4& o) const;
};

/// [a1, a2] + b c
CMat integrability_residual(const AdhmDatumS4& m);

/// |[a1,a2] + bc| <= 1e-9 (1 + |m|^2)
bool is_integrable(const AdhmDatumS4& m, double rel = 1e-9);

/// [a1,a1*] + [a2,a2*] + b b* - c* c, symmetrized.
CMat moment(const AdhmDatumS4& m);

/// |moment(m) + zeta 1|_F. The level set mu^{-1}(-zeta) is read as
/// mu = -zeta * identity.
double level_residual(const AdhmDatumS4& m, double zeta);

/// g . (a1, a2, b, c) = (g a1 g^-1, g a2 g^-1, g b, c g^-1).
/// Throws PreconditionError for singular g.
AdhmDatumS4 act(const CMat& g, const AdhmDatumS4& m);

/// Smallest subspace containing `start` and invariant under every operator in
/// `ops` (Krylov closure, at most n steps).
Subspace invariant_closure(const Subspace& start, const std::vector<CMat>& ops,
                           const Tolerance& tol = {});

/// C1: no proper subspace contains im b and is invariant under a1, a2.
/// Exact: Fails carries the closure of im b as witness.
CheckResult check_c1(const AdhmDatumS4& m, const Tolerance& tol = {});

/// C2: no nonzero a-invariant subspace lies in ker c. Computed through the
/// C1 closure of the adjoint datum; the witness is its orthogonal
/// complement, the largest invariant subspace inside ker c.
CheckResult check_c2(const AdhmDatumS4& m, const Tolerance& tol = {});

/// Real dimension of { h anti-Hermitian : [h,a_i] = 0, h b = 0, c h = 0 }.
int stabilizer_dim(const AdhmDatumS4& m, const Tolerance& tol = {});

}  // namespace adhm
