#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bures/bures_metric.hpp"
#include "bures/random_matrices.hpp"

using namespace bures;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix diag2(double a, double b) { return mat2(a, 0, 0, b); }

SpdMatrix pure_state(const Vector& u) {
  return SpdMatrix(u * u.transpose(), Definiteness::kPositiveSemidefinite);
}

}  // namespace

TEST_CASE("distance vanishes on equal arguments") {
  const SpdMatrix a(mat2(2, 1, 1, 3));
  CHECK(bures_distance(a, a).d < 1e-12);
}

TEST_CASE("commuting case reduces to the Hellinger distance") {
  const SpdMatrix a(diag2(1, 4)), b(diag2(9, 16));
  // oracle: sqrt((1-3)^2 + (2-4)^2) = 2*sqrt(2)
  const double expected = std::sqrt(8.0);
  CHECK(bures_distance(a, b).d == Catch::Approx(expected).margin(1e-12));
  CHECK(hellinger(a, b) == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("pure states: fidelity is the overlap") {
  Vector u(2), v(2);
  u << 1, 0;
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const SpdMatrix a = pure_state(u), b = pure_state(v);
  CHECK(fidelity(a, b) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-10));
  const double d = bures_distance(a, b).d;
  CHECK(d * d == Catch::Approx(2.0 * (1.0 - 1.0 / std::sqrt(2.0))).margin(1e-10));
}

TEST_CASE("fidelity: identity and commuting values, symmetry") {
  const Matrix id = Matrix::Identity(3, 3);
  CHECK(fidelity(SpdMatrix(id), SpdMatrix(id)) == Catch::Approx(3.0));
  CHECK(fidelity(SpdMatrix(diag2(1, 4)), SpdMatrix(diag2(9, 16))) ==
        Catch::Approx(11.0));

  NormalStream rng(100, 0);
  for (int t = 0; t < 30; ++t) {
    const SpdMatrix a = random_pd(rng, 3), b = random_pd(rng, 3);
    CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) < 1e-10);
  }
}

TEST_CASE("DistanceReport internal consistency") {
  NormalStream rng(101, 0);
  for (int t = 0; t < 30; ++t) {
    const SpdMatrix a = random_pd(rng, 4), b = random_pd(rng, 4);
    const DistanceReport rep = bures_distance(a, b);
    CHECK(std::abs(rep.d * rep.d -
                   (rep.trace_a + rep.trace_b - 2.0 * rep.fidelity)) < 1e-12);
  }
}

TEST_CASE("metric axioms on random triples") {
  NormalStream rng(102, 0);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.next_unit() * 7);
    const SpdMatrix a = random_pd(rng, dim), b = random_pd(rng, dim),
                    c = random_pd(rng, dim);
    const double dab = bures_distance(a, b).d;
    CHECK(dab >= 0.0);
    CHECK(std::abs(dab - bures_distance(b, a).d) < 1e-10);
    CHECK(dab <= bures_distance(a, c).d + bures_distance(c, b).d + 1e-9);
  }
}

TEST_CASE("Hellinger dominates the distance off the commuting case") {
  NormalStream rng(103, 0);
  for (int t = 0; t < 50; ++t) {
    const SpdMatrix a = random_pd(rng, 2), b = random_pd(rng, 2);
    CHECK(hellinger(a, b) >= bures_distance(a, b).d - 1e-12);
  }
}

TEST_CASE("unit-trace states satisfy half d^2 = 1 - F") {
  NormalStream rng(104, 0);
  for (int t = 0; t < 30; ++t) {
    const SpdMatrix a0 = random_pd(rng, 3), b0 = random_pd(rng, 3);
    const SpdMatrix a(a0.matrix() / a0.trace()), b(b0.matrix() / b0.trace());
    const DistanceReport rep = bures_distance(a, b);
    CHECK(std::abs(0.5 * rep.d * rep.d - (1.0 - rep.fidelity)) < 1e-12);
  }
}

TEST_CASE("affine-invariant delta: scalar log, symmetry, inversion") {
  const SpdMatrix one(Matrix::Constant(1, 1, 1.0));
  const SpdMatrix e2(Matrix::Constant(1, 1, std::exp(2.0)));
  CHECK(affine_invariant_delta(one, e2) == Catch::Approx(2.0).margin(1e-12));
  CHECK(affine_invariant_delta(one, one) < 1e-12);

  NormalStream rng(105, 0);
  for (int t = 0; t < 30; ++t) {
    const SpdMatrix a = random_pd(rng, 3), b = random_pd(rng, 3);
    const double delta = affine_invariant_delta(a, b);
    CHECK(std::abs(delta - affine_invariant_delta(b, a)) < 1e-10);
    CHECK(std::abs(delta - affine_invariant_delta(inverse(a), inverse(b))) < 1e-9);
    Matrix x = random_gaussian_matrix(rng, 3, 3) + 3.0 * Matrix::Identity(3, 3);
    const double conj =
        affine_invariant_delta(SpdMatrix(x * a.matrix() * x.transpose()),
                               SpdMatrix(x * b.matrix() * x.transpose()));
    CHECK(std::abs(delta - conj) < 1e-9 * std::max(1.0, delta));
  }
}

TEST_CASE("variational check: identity case and commuting oracle") {
  const Matrix id = Matrix::Identity(3, 3);
  std::vector<SpdMatrix> probes{SpdMatrix(id)};
  const CheckReport rep =
      fidelity_variational_check(SpdMatrix(id), SpdMatrix(id), probes);
  CHECK(rep.all_pass());
  CHECK(rep.fidelity_value == Catch::Approx(3.0));

  // commuting oracle: minimizer diag(sqrt(b_i/a_i)), value sum sqrt(a_i b_i)
  const SpdMatrix a(diag2(1, 4)), b(diag2(9, 16));
  const SpdMatrix x0 = geometric_mean(inverse(a), b);
  CHECK((x0.matrix() - diag2(3.0, 2.0)).norm() < 1e-12);
  CHECK(fidelity(a, b) == Catch::Approx(3.0 + 8.0));

  NormalStream rng(106, 0);
  std::vector<SpdMatrix> random_probes;
  for (int k = 0; k < 100; ++k) random_probes.push_back(random_pd(rng, 2));
  CHECK(fidelity_variational_check(a, b, random_probes).all_pass());
}

TEST_CASE("variational check holds on random pairs with random probes") {
  NormalStream rng(107, 0);
  for (int t = 0; t < 20; ++t) {
    const SpdMatrix a = random_pd(rng, 3), b = random_pd(rng, 3);
    std::vector<SpdMatrix> probes;
    for (int k = 0; k < 50; ++k) probes.push_back(random_pd(rng, 3));
    const CheckReport rep = fidelity_variational_check(a, b, probes);
    for (const CheckClause& clause : rep.clauses) {
      INFO(clause.name << " defect " << clause.defect);
      CHECK(clause.pass);
    }
  }
}

TEST_CASE("orbit minimality and the aligned Procrustes value") {
  const SpdMatrix a(mat2(1, 1, 1, 2)), b(mat2(3, 1, 1, 2));
  const double d = bures_distance(a, b).d;
  const Matrix u = polar_unitary(a, b);
  CHECK(std::abs((a.sqrt_matrix() - b.sqrt_matrix() * u).norm() - d) < 1e-9);

  NormalStream rng(108, 0);
  for (int t = 0; t < 50; ++t) {
    const Matrix q = random_orthogonal(rng, 2);
    CHECK((a.sqrt_matrix() - b.sqrt_matrix() * q).norm() >= d - 1e-9);
  }
}

TEST_CASE("distance is invariant under orthogonal congruence") {
  NormalStream rng(109, 0);
  for (int t = 0; t < 30; ++t) {
    const SpdMatrix a = random_pd(rng, 3), b = random_pd(rng, 3);
    const Matrix q = random_orthogonal(rng, 3);
    const double d = bures_distance(a, b).d;
    const double dq = bures_distance(SpdMatrix(q * a.matrix() * q.transpose()),
                                     SpdMatrix(q * b.matrix() * q.transpose())).d;
    CHECK(std::abs(d - dq) < 1e-10);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  const SpdMatrix a(Matrix::Identity(2, 2));
  const SpdMatrix b(Matrix::Identity(3, 3));
  CHECK_THROWS_AS(bures_distance(a, b), DimensionMismatchError);
  CHECK_THROWS_AS(fidelity(a, b), DimensionMismatchError);
  CHECK_THROWS_AS(hellinger(a, b), DimensionMismatchError);
}
