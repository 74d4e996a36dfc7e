#include "doctest.h"

#include <cmath>
#include <numbers>

#include "adhm/errors.hpp"
#include "adhm/field_recon.hpp"
#include "adhm/linalg.hpp"
#include "adhm/random.hpp"

using namespace adhm;

namespace {

FieldPoint only_pair(int mu, int nu, const CMat& x, int rho, int sigma) {
  FieldPoint fp;
  for (auto& f : fp.F) f = CMat::Zero(x.rows(), x.cols());
  fp.F[curvature_index(mu, nu)] = x;
  fp.F[curvature_index(rho, sigma)] = x;
  return fp;
}

}  // namespace

TEST_CASE("monad maps") {
  const AdhmDatumS4 m = one_instanton(1.0);
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    const CMat z = gaussian_matrix(rng, 2, 1, 2.0);
    const auto [alpha, beta] = monad_maps(m, z(0, 0), z(1, 0));
    CHECK((beta * alpha).norm() <= 1e-13);
  }
  const auto [a0, b0] = monad_maps(m, 0, 0);
  CHECK((a0 - vcat({m.a1, m.a2, m.c})).norm() == 0);
  CHECK((b0 - hcat({-m.a2, m.a1, m.b})).norm() == 0);

  const auto [far, unused] = monad_maps(m, 1e3, 0);
  CHECK(singular_values(far).minCoeff() > 9e2);

  AdhmDatumS4 bad = m;
  bad.c.setZero();
  CHECK_THROWS_AS(monad_maps(bad, 0, 0), PreconditionError);
}

TEST_CASE("fiber frame") {
  const AdhmDatumS4 m = one_instanton(1.3);
  const cplx z1(0.2, -0.4), z2(0.7, 0.1);
  const CMat f = fiber_frame(m, z1, z2);
  REQUIRE(f.rows() == 4);
  REQUIRE(f.cols() == 2);
  CHECK((f.adjoint() * f - CMat::Identity(2, 2)).norm() <= 1e-12);
  const auto [alpha, beta] = monad_maps(m, z1, z2);
  CHECK((beta * f).norm() <= 1e-11);
  CHECK((alpha.adjoint() * f).norm() <= 1e-11);
  CHECK((fiber_frame(m, z1, z2, f) - f).norm() <= 1e-12);
}

TEST_CASE("asd residual of constructed tensors") {
  const FieldPoint zero = only_pair(0, 1, CMat::Zero(2, 2), 2, 3);
  CHECK(asd_residual(zero) == 0);
  CMat x(2, 2);
  x << cplx(0, 1), 0, 0, cplx(0, -1);
  CHECK(std::abs(asd_residual(only_pair(0, 1, x, 2, 3)) - 2.0) < 1e-14);
  FieldPoint asd = only_pair(0, 1, x, 2, 3);
  asd.F[curvature_index(2, 3)] = -x;
  CHECK(asd_residual(asd) < 1e-15);
  CHECK_THROWS_AS(curvature_index(2, 1), PreconditionError);
}

TEST_CASE("one-instanton field") {
  const AdhmDatumS4 m = one_instanton(1.0);
  const FieldPoint fp = gauge_field_at(m, {0.3, -0.2, 0.5, 0.1});
  for (const auto& a : fp.A) CHECK((a + a.adjoint()).norm() <= 1e-8);
  CHECK(asd_residual(fp) <= 1e-3);

  // BPST density 6 rho^4 / (pi^2 (|x|^2 + rho^2)^4)
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(std::abs(charge_density(gauge_field_at(m, {0, 0, 0, 0})) - 6 / pi2) < 1e-5);
  const double at1 = charge_density(gauge_field_at(m, {1, 0, 0, 0}));
  CHECK(std::abs(at1 - 6 / (16 * pi2)) < 1e-5);

  // radial decay from the center
  double last = charge_density(gauge_field_at(m, {0, 0, 0, 0}));
  for (double r : {0.5, 1.0, 2.0}) {
    const double d = charge_density(gauge_field_at(m, {0, r, 0, 0}));
    CHECK(d < last);
    last = d;
  }
  CHECK_THROWS_AS(gauge_field_at(m, {0, 0, 0, 0}, 0.1), PreconditionError);
}

TEST_CASE("gauge invariance and translation covariance") {
  const AdhmDatumS4 m = one_instanton(0.8);
  Rng rng(4);
  const CMat g = random_unitary(rng, 1);
  const std::array<double, 4> x{0.4, 0.1, -0.3, 0.2};
  const double d0 = charge_density(gauge_field_at(m, x));
  CHECK(std::abs(charge_density(gauge_field_at(act(g, m), x)) - d0) <= 1e-6 * d0);

  AdhmDatumS4 shifted = m;
  shifted.a1(0, 0) += cplx(0.5, 0.25);
  const double d1 = charge_density(gauge_field_at(shifted, {0.9, 0.35, -0.3, 0.2}));
  CHECK(std::abs(d1 - d0) <= 1e-6 * d0);
}

TEST_CASE("charge of the one-instanton") {
  ChargeOptions opt;
  opt.samples = 20000;
  const ChargeReport rep = charge_integral(one_instanton(1.0), opt);
  CHECK(std::abs(rep.charge - 1.0) <= std::max(0.02, 4 * rep.stderr_));
  CHECK(rep.tail > 0);
  CHECK(rep.asd_max <= 1e-3);
  CHECK(rep.samples == 20000);
}

TEST_CASE("empty datum has charge zero") {
  CHECK(charge_integral(AdhmDatumS4::zero(0, 2)).charge == 0);
}
