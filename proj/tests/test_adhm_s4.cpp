#include "doctest.h"

#include <cmath>

#include "adhm/adhm_s4.hpp"
#include "adhm/errors.hpp"
#include "adhm/field_recon.hpp"
#include "adhm/random.hpp"
#include "oracles.hpp"

using namespace adhm;

namespace {

AdhmDatumS4 scalar(cplx a1, cplx a2, cplx b, cplx c) {
  AdhmDatumS4 m = AdhmDatumS4::zero(1, 1);
  m.a1(0, 0) = a1;
  m.a2(0, 0) = a2;
  m.b(0, 0) = b;
  m.c(0, 0) = c;
  return m;
}

AdhmDatumS4 random_datum(Rng& rng, int k, int r) {
  return {k, r, gaussian_matrix(rng, k, k, 1), gaussian_matrix(rng, k, k, 1),
          gaussian_matrix(rng, k, r, 1), gaussian_matrix(rng, r, k, 1)};
}

CMat e_col(int i, int n) {
  CMat v = CMat::Zero(n, 1);
  v(i, 0) = 1;
  return v;
}

}  // namespace

TEST_CASE("s4 integrability residual") {
  AdhmDatumS4 m = AdhmDatumS4::zero(2, 1);
  CHECK(integrability_residual(m).norm() == 0);
  CHECK(integrability_residual(scalar(0.3, -1.2, 2, 3))(0, 0) == cplx(6));

  m.a1 << 0, 1, 0, 0;
  m.a2 << 0, 0, 1, 0;
  CMat expected(2, 2);
  expected << 1, 0, 0, -1;
  CHECK((integrability_residual(m) - expected).norm() == 0);
}

TEST_CASE("s4 moment") {
  CHECK(moment(AdhmDatumS4::zero(2, 2)).norm() == 0);
  CHECK(moment(scalar(0, 0, 1, 0))(0, 0) == cplx(1));
  CHECK(level_residual(scalar(0, 0, 1, 0), -1.0) == 0);
  CHECK(moment(one_instanton(1.7)).norm() < 1e-15);

  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const AdhmDatumS4 m = random_datum(rng, 3, 2);
    const CMat mu = moment(m);
    CHECK((mu - mu.adjoint()).norm() == 0);
    CHECK(std::abs(mu.trace().real() - (sqnorm(m.b) - sqnorm(m.c))) < 1e-12);
  }
}

TEST_CASE("s4 action") {
  Rng rng(2);
  const AdhmDatumS4 m = random_datum(rng, 3, 2);
  const AdhmDatumS4 same = act(CMat::Identity(3, 3), m);
  CHECK((same - m).norm() == 0);

  const AdhmDatumS4 s = act(CMat::Constant(1, 1, 2.0), scalar(0.5, 0.1, 1.5, 4.0));
  CHECK(std::abs(s.b(0, 0) - 3.0) < 1e-15);
  CHECK(std::abs(s.c(0, 0) - 2.0) < 1e-15);

  const CMat g = random_unitary(rng, 3);
  const AdhmDatumS4 gm = act(g, m);
  CHECK((moment(gm) - g * moment(m) * g.adjoint()).norm() < 1e-12);
  CHECK((integrability_residual(gm) - g * integrability_residual(m) * g.adjoint()).norm() < 1e-12);

  CHECK_THROWS_AS(act(CMat::Zero(3, 3), m), PreconditionError);
  CHECK_THROWS_AS(act(CMat::Identity(2, 2), m), DimensionError);
}

TEST_CASE("check_c1 examples") {
  CHECK(check_c1(scalar(0.2, 0.3, 1.0, 0.0)).holds());

  AdhmDatumS4 m = AdhmDatumS4::zero(2, 1);
  m.a1 << 0, 1, 0, 0;
  m.b = e_col(0, 2);
  const CheckResult r = check_c1(m);
  REQUIRE(r.fails());
  REQUIRE(r.witness.size() == 1);
  CHECK(same_subspace(r.witness[0], column_span(e_col(0, 2))));
  CHECK(!oracle::c1_holds(m));

  m.b = e_col(1, 2);
  CHECK(check_c1(m).holds());
  CHECK(oracle::c1_holds(m));
}

TEST_CASE("check_c2 examples") {
  CHECK(check_c2(scalar(0.2, 0.3, 0.0, 1.0)).holds());

  AdhmDatumS4 z = AdhmDatumS4::zero(2, 2);
  z.a1 << 1, 2, 3, 4;
  const CheckResult whole = check_c2(z);
  REQUIRE(whole.fails());
  CHECK(whole.witness[0].is_full());

  AdhmDatumS4 m = AdhmDatumS4::zero(2, 1);
  m.a1 << 1, 0, 0, 2;
  m.a2 << 3, 0, 0, -1;
  m.c = e_col(0, 2).transpose();
  const CheckResult r = check_c2(m);
  REQUIRE(r.fails());
  CHECK(same_subspace(r.witness[0], column_span(e_col(1, 2))));
}

TEST_CASE("C1 and C2 verdicts are invariant under GL and dual to each other") {
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    AdhmDatumS4 m = random_datum(rng, 2, 1);
    if (i % 3 == 0) m.b.setZero();
    if (i % 3 == 1) m.a2 = m.a1 * 0.5;  // shared eigenlines
    const CMat g = gaussian_matrix(rng, 2, 2, 1) + 2.0 * CMat::Identity(2, 2);
    CHECK(check_c1(m).verdict == check_c1(act(g, m)).verdict);
    CHECK(check_c2(m).verdict == check_c2(act(g, m)).verdict);
    CHECK(check_c2(m).verdict == check_c1(m.adjoint()).verdict);
    CHECK(check_c1(m).holds() == oracle::c1_holds(m));
    CHECK(check_c2(m).holds() == oracle::c2_holds(m));
  }
}

TEST_CASE("s4 stabilizer dimension") {
  CHECK(stabilizer_dim(scalar(0.4, 0.1, 1.0, 0.0)) == 0);
  CHECK(stabilizer_dim(scalar(0.4, 0.1, 0.0, 0.0)) == 1);
  CHECK(stabilizer_dim(one_instanton(1.0)) == 0);
  CHECK(stabilizer_dim(AdhmDatumS4::zero(2, 1)) == 4);
}

TEST_CASE("s4 datum validation") {
  AdhmDatumS4 m = AdhmDatumS4::zero(2, 3);
  m.b = CMat::Zero(3, 2);
  CHECK_THROWS_AS(m.validate(), DimensionError);
  m = AdhmDatumS4::zero(2, 3);
  m.a1(0, 0) = cplx(std::nan(""), 0);
  CHECK_THROWS_AS(m.validate(), PreconditionError);
}
