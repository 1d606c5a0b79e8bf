#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bures/random_matrices.hpp"
#include "bures/spd_core.hpp"

using namespace bures;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix diag2(double a, double b) { return mat2(a, 0, 0, b); }

// Independent closed-form eigendecomposition of a symmetric 2x2 matrix;
// test-only oracle, not sharing the library's solver path.
struct Eig2 {
  double l1, l2;        // l1 >= l2
  double v1x, v1y, v2x, v2y;
};

Eig2 brute_eig2(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  Eig2 e{mean + rad, mean - rad, 0, 0, 0, 0};
  if (std::abs(b) < 1e-300) {
    e.v1x = a >= c ? 1 : 0;
    e.v1y = a >= c ? 0 : 1;
  } else {
    const double nx = e.l1 - c, ny = b;
    const double n = std::hypot(nx, ny);
    e.v1x = nx / n;
    e.v1y = ny / n;
  }
  e.v2x = -e.v1y;
  e.v2y = e.v1x;
  return e;
}

Matrix brute_sqrt2(const Matrix& m) {
  const Eig2 e = brute_eig2(m(0, 0), m(0, 1), m(1, 1));
  const double s1 = std::sqrt(e.l1), s2 = std::sqrt(e.l2);
  Matrix out(2, 2);
  out(0, 0) = s1 * e.v1x * e.v1x + s2 * e.v2x * e.v2x;
  out(0, 1) = s1 * e.v1x * e.v1y + s2 * e.v2x * e.v2y;
  out(1, 0) = out(0, 1);
  out(1, 1) = s1 * e.v1y * e.v1y + s2 * e.v2y * e.v2y;
  return out;
}

}  // namespace

TEST_CASE("sqrt_psd on diagonal and identity matrices") {
  CHECK((sqrt_psd(SpdMatrix(diag2(1, 4))).matrix() - diag2(1, 2)).norm() < 1e-14);
  const Matrix id = Matrix::Identity(3, 3);
  CHECK((sqrt_psd(SpdMatrix(id)).matrix() - id).norm() < 1e-14);
}

TEST_CASE("sqrt_psd matches the brute-force 2x2 oracle") {
  const Matrix a = mat2(2, 1, 1, 2);
  const Eig2 e = brute_eig2(2, 1, 2);
  CHECK(e.l1 == Catch::Approx(3.0));
  CHECK(e.l2 == Catch::Approx(1.0));
  CHECK((sqrt_psd(SpdMatrix(a)).matrix() - brute_sqrt2(a)).norm() < 1e-12);

  NormalStream rng(12, 0);
  for (int t = 0; t < 50; ++t) {
    const SpdMatrix m = random_pd(rng, 2, 0.1, 4.0);
    CHECK((sqrt_psd(m).matrix() - brute_sqrt2(m.matrix())).norm() < 1e-10);
  }
}

TEST_CASE("validation rejects indefinite matrices and clamps rounding noise") {
  CHECK_THROWS_AS(SpdMatrix(diag2(1, -1), Definiteness::kPositiveSemidefinite),
                  NotPsdError);
  CHECK_THROWS_AS(SpdMatrix(diag2(1, 0)), NotPdError);
  CHECK_THROWS_AS(SpdMatrix(diag2(1, -1e-3), Definiteness::kPositiveSemidefinite),
                  NotPsdError);

  // an eigenvalue of -1e-13 is rounding noise relative to the unit scale
  const SpdMatrix clamped(diag2(1, -1e-13), Definiteness::kPositiveSemidefinite);
  CHECK(clamped.min_eigenvalue() >= 0.0);

  CHECK_THROWS_AS(SpdMatrix(Matrix::Ones(2, 3)), DimensionMismatchError);
}

TEST_CASE("geometric mean: idempotence, commuting case, Riccati residual") {
  const SpdMatrix a(mat2(1, 1, 1, 2));
  CHECK((geometric_mean(a, a).matrix() - a.matrix()).norm() < 1e-12);

  const SpdMatrix d1(diag2(1, 4)), d2(diag2(9, 16));
  CHECK((geometric_mean(d1, d2).matrix() - diag2(3, 8)).norm() < 1e-12);

  const SpdMatrix b(mat2(3, 1, 1, 2));
  const Matrix x = geometric_mean(a, b).matrix();
  CHECK((x * a.inverse_matrix() * x - b.matrix()).norm() < 1e-10);
}

TEST_CASE("geometric mean is symmetric in its arguments") {
  NormalStream rng(7, 0);
  for (int t = 0; t < 30; ++t) {
    const SpdMatrix a = random_pd(rng, 3), b = random_pd(rng, 3);
    const Matrix g = geometric_mean(a, b).matrix();
    CHECK((g - geometric_mean(b, a).matrix()).norm() / g.norm() < kReconTol);
  }
}

TEST_CASE("weighted geometric mean endpoints and scalar interpolation") {
  const SpdMatrix a(diag2(1, 16)), b(diag2(16, 1));
  CHECK((weighted_geometric(a, b, 0.0).matrix() - a.matrix()).norm() < 1e-12);
  CHECK((weighted_geometric(a, b, 1.0).matrix() - b.matrix()).norm() < 1e-12);
  CHECK((weighted_geometric(a, b, 0.5).matrix() - diag2(4, 4)).norm() < 1e-12);
  CHECK((weighted_geometric(a, b, 0.25).matrix() - diag2(2, 8)).norm() < 1e-12);
  CHECK((weighted_geometric(a, b, 0.5).matrix() -
         geometric_mean(a, b).matrix()).norm() < 1e-12);
  CHECK_THROWS_AS(weighted_geometric(a, b, 1.5), ParamOutOfRangeError);
}

TEST_CASE("sylvester_solve entrywise formula and residual") {
  const SymMatrix y1(mat2(2, 4, 4, 6));
  const SymMatrix h1 = sylvester_solve(SpdMatrix(diag2(1, 3)), y1);
  CHECK((h1.matrix() - mat2(1, 1, 1, 1)).norm() < 1e-13);

  const SymMatrix h2 = sylvester_solve(SpdMatrix(Matrix::Identity(2, 2)), y1);
  CHECK((h2.matrix() - 0.5 * y1.matrix()).norm() < 1e-14);

  NormalStream rng(3, 0);
  for (int t = 0; t < 20; ++t) {
    const SpdMatrix a = random_pd(rng, 3);
    const SymMatrix y = random_sym(rng, 3);
    const SymMatrix h = sylvester_solve(a, y);
    CHECK((h.matrix() * a.matrix() + a.matrix() * h.matrix() - y.matrix()).norm() <
          1e-10);
  }
}

TEST_CASE("polar_unitary alignment") {
  const SpdMatrix a(mat2(1, 1, 1, 2));
  const Matrix id = Matrix::Identity(2, 2);
  CHECK((polar_unitary(a, a) - id).norm() < 1e-12);
  CHECK((polar_unitary(SpdMatrix(diag2(1, 4)), SpdMatrix(diag2(9, 16))) - id)
            .norm() < 1e-12);

  const SpdMatrix b(mat2(3, 1, 1, 2));
  const Matrix u = polar_unitary(a, b);
  CHECK((u.transpose() * u - id).norm() < kReconTol);
  const Matrix prod = b.sqrt_matrix() * a.sqrt_matrix();
  const SpdMatrix conj(a.sqrt_matrix() * b.matrix() * a.sqrt_matrix());
  CHECK((prod - u * conj.sqrt_matrix()).norm() < 1e-10);
}

TEST_CASE("loewner_leq basics") {
  const Matrix id = Matrix::Identity(3, 3);
  CHECK(loewner_leq(id, 2 * id, 0.0));
  CHECK_FALSE(loewner_leq(2 * id, id, 0.0));
  CHECK(loewner_leq(id, id, 0.0));
  CHECK_THROWS_AS(loewner_leq(id, Matrix::Identity(2, 2), 0.0),
                  DimensionMismatchError);
}

TEST_CASE("power_mean_half scalar and commuting cases") {
  const SpdMatrix a(mat2(2, 1, 1, 3));
  std::vector<SpdMatrix> single{a};
  CHECK((power_mean_half(single, Weights::uniform(1)).matrix() - a.matrix())
            .norm() < 1e-12);

  std::vector<SpdMatrix> scalars{SpdMatrix(Matrix::Constant(1, 1, 1.0)),
                                 SpdMatrix(Matrix::Constant(1, 1, 9.0))};
  CHECK(power_mean_half(scalars, Weights::uniform(2)).matrix()(0, 0) ==
        Catch::Approx(4.0));

  UniformStream unit(5, 0);
  for (int t = 0; t < 10; ++t) {
    std::vector<SpdMatrix> diags;
    std::vector<double> w{0.2, 0.3, 0.5};
    for (int j = 0; j < 3; ++j) diags.push_back(random_diagonal_pd(unit, 3));
    const Matrix q = power_mean_half(diags, Weights(w)).matrix();
    for (int i = 0; i < 3; ++i) {
      double root_sum = 0.0;
      for (int j = 0; j < 3; ++j)
        root_sum += w[static_cast<std::size_t>(j)] *
                    std::sqrt(diags[static_cast<std::size_t>(j)].matrix()(i, i));
      CHECK(q(i, i) == Catch::Approx(root_sum * root_sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("AGM trace inequality with strict gap off the diagonal") {
  NormalStream rng(11, 0);
  for (int t = 0; t < 40; ++t) {
    const SpdMatrix a = random_pd(rng, 3), b = random_pd(rng, 3);
    const Matrix ra = a.sqrt_matrix();
    const double geo = sqrt_psd_matrix(ra * b.matrix() * ra).trace();
    const double arith = 0.5 * (a.trace() + b.trace());
    CHECK(geo <= arith + 1e-12);
    if ((a.matrix() - b.matrix()).norm() > 1e-6) CHECK(arith - geo > 0.0);
  }
}

TEST_CASE("harmonic-geometric-arithmetic operator chain") {
  NormalStream rng(13, 0);
  for (int t = 0; t < 30; ++t) {
    const SpdMatrix a = random_pd(rng, 3), b = random_pd(rng, 3);
    const Matrix g = geometric_mean(a, b).matrix();
    const Matrix harm =
        SpdMatrix(0.5 * (a.inverse_matrix() + b.inverse_matrix())).inverse_matrix();
    CHECK(loewner_leq(harm, g, 1e-9));
    CHECK(loewner_leq(g, 0.5 * (a.matrix() + b.matrix()), 1e-9));
  }
}

TEST_CASE("weights normalize and reject nonpositive entries") {
  const Weights w(std::vector<double>{2.0, 6.0});
  CHECK(w[0] == Catch::Approx(0.25));
  CHECK(w[1] == Catch::Approx(0.75));
  CHECK_THROWS_AS(Weights(std::vector<double>{1.0, 0.0}), ParamOutOfRangeError);
  CHECK_THROWS_AS(Weights(std::vector<double>{}), ParamOutOfRangeError);
}
