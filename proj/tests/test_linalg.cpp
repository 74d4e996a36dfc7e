#include "doctest.h"

#include <cmath>

#include "adhm/errors.hpp"
#include "adhm/linalg.hpp"
#include "adhm/random.hpp"

using namespace adhm;

namespace {

CMat mat2(cplx a, cplx b, cplx c, cplx d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

CVec e(int i, int n) {
  CVec v = CVec::Zero(n);
  v(i) = 1;
  return v;
}

Subspace span(const CVec& v) { return column_span(v); }

}  // namespace

TEST_CASE("numeric_rank") {
  CHECK(numeric_rank(CMat(CMat::Identity(2, 2))) == 2);
  CHECK(numeric_rank(CMat(CMat::Zero(2, 2))) == 0);
  CHECK(numeric_rank(mat2(1, 0, 0, 1e-12)) == 1);
}

TEST_CASE("nullspace") {
  CMat row(1, 2);
  row << 1, 0;
  const Subspace n1 = nullspace(row);
  REQUIRE(n1.dim() == 1);
  CHECK(std::abs(std::abs(n1.basis(1, 0)) - 1.0) < 1e-14);

  Rng rng(3);
  CMat inv = gaussian_matrix(rng, 3, 3, 1.0) + 3.0 * CMat::Identity(3, 3);
  CHECK(nullspace(inv).is_zero());

  const Subspace n2 = nullspace(mat2(1, 1, 1, 1));
  REQUIRE(n2.dim() == 1);
  CVec expected(2);
  expected << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  CHECK(same_subspace(n2, span(expected)));
}

TEST_CASE("subspace lattice examples") {
  const Subspace s1 = span(e(0, 2)), s2 = span(e(1, 2));
  CHECK(span_sum(s1, s2).is_full());
  CHECK(intersection(s1, s2).is_zero());
  CHECK(preimage(mat2(0, 1, 0, 0), s1).is_full());
  CHECK(image(mat2(0, 1, 0, 0), Subspace::full(2)).dim() == 1);
  CHECK_THROWS_AS(span_sum(s1, Subspace::full(3)), DimensionError);
}

TEST_CASE("lattice properties on random subspaces") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 5;
    const int da = 1 + trial % 4, db = 1 + (trial / 4) % 4;
    const Subspace a = column_span(gaussian_matrix(rng, n, da, 1.0));
    const Subspace b = column_span(gaussian_matrix(rng, n, db, 1.0));
    CHECK(a.dim() + b.dim() == span_sum(a, b).dim() + intersection(a, b).dim());
    CHECK(a.dim() + orth_complement(a).dim() == n);
    CHECK(same_subspace(orth_complement(orth_complement(a)), a));
    CHECK((a.basis.adjoint() * a.basis - CMat::Identity(a.dim(), a.dim())).norm() < 1e-12);

    const CMat m = gaussian_matrix(rng, n, n, 1.0);
    CHECK(numeric_rank(m) + nullspace(m).dim() == n);
    CHECK(contains(b, image(m, preimage(m, b))));
  }
}

TEST_CASE("hermitian_exp") {
  CHECK((hermitian_exp(CMat::Zero(2, 2)) - CMat::Identity(2, 2)).norm() < 1e-15);
  const CMat d = hermitian_exp(mat2(1, 0, 0, -1));
  CHECK(std::abs(d(0, 0) - std::exp(1.0)) < 1e-14);
  CHECK(std::abs(d(1, 1) - std::exp(-1.0)) < 1e-14);
  const CMat x = hermitian_exp(mat2(0, 1, 1, 0));
  CHECK((x - mat2(std::cosh(1.0), std::sinh(1.0), std::sinh(1.0), std::cosh(1.0))).norm() < 1e-14);

  Rng rng(5);
  const CMat h = random_hermitian(rng, 4, 1.0);
  CHECK((hermitian_exp(h) * hermitian_exp(-h) - CMat::Identity(4, 4)).norm() < 1e-10);
  CHECK_THROWS_AS(hermitian_exp(mat2(0, 1, 0, 0)), PreconditionError);
}

TEST_CASE("polar_unitary aligns a rotated frame") {
  Rng rng(2);
  const CMat u = random_unitary(rng, 3);
  CHECK((u.adjoint() * u - CMat::Identity(3, 3)).norm() < 1e-12);
  CHECK((polar_unitary(u) - u).norm() < 1e-12);
  CHECK((polar_unitary(CMat::Identity(3, 3)) - CMat::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("block helpers") {
  const CMat a = CMat::Ones(2, 1), b = CMat::Zero(2, 3);
  CHECK(hcat({a, b}).cols() == 4);
  CHECK(vcat({a.transpose(), b.transpose()}).rows() == 4);
  CHECK_THROWS_AS(hcat({a, CMat::Zero(3, 1)}), DimensionError);
}

TEST_CASE("derive_seed and gaussian_matrix are deterministic") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  Rng r1(42), r2(42);
  CHECK(gaussian_matrix(r1, 3, 2, 1.0) == gaussian_matrix(r2, 3, 2, 1.0));
}
