#include <doctest.h>

#include <cmath>
#include <random>

#include <spinsense/numerics.hpp>

using namespace spinsense;

namespace {

ComplexMatrix random_hermitian(int dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      a(i, j) = Complex(dist(gen), dist(gen));
    }
  }
  return 0.5 * (a + a.adjoint().eval());
}

}  // namespace

TEST_CASE("hermitian_eig identity and diagonal inputs") {
  const EigDecomposition id = hermitian_eig(ComplexMatrix::Identity(2, 2));
  CHECK(id.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((id.eigenvectors.adjoint() * id.eigenvectors -
         ComplexMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-10);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.3;
  d(1, 1) = 0.7;
  const EigDecomposition de = hermitian_eig(d);
  CHECK(de.eigenvalues(0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(de.eigenvalues(1) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(std::abs(de.eigenvectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(de.eigenvectors(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig matches the 2x2 closed form for a dephased qubit") {
  // rho_1(t) at gamma = 0.25, t = 1, phi = 0; eigenvalues (1 +- e^{-1/2})/2.
  const double c = std::exp(-0.5);
  ComplexMatrix rho(2, 2);
  rho << 0.5, 0.5 * c, 0.5 * c, 0.5;
  const EigDecomposition eig = hermitian_eig(rho);
  CHECK(eig.eigenvalues(0) ==
        doctest::Approx(0.5 * (1.0 - c)).epsilon(1e-12));
  CHECK(eig.eigenvalues(1) ==
        doctest::Approx(0.5 * (1.0 + c)).epsilon(1e-12));
}

TEST_CASE("hermitian_eig contract on random Hermitian matrices") {
  for (int dim : {2, 3, 8, 16}) {
    const ComplexMatrix m = random_hermitian(dim, 1234u + dim);
    const EigDecomposition eig = hermitian_eig(m);
    for (int i = 0; i + 1 < dim; ++i) {
      CHECK(eig.eigenvalues(i) <= eig.eigenvalues(i + 1));
    }
    const ComplexMatrix vhv = eig.eigenvectors.adjoint() * eig.eigenvectors;
    CHECK((vhv - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <
          1e-10);
    const ComplexMatrix rec = eig.eigenvectors *
                              eig.eigenvalues.asDiagonal() *
                              eig.eigenvectors.adjoint();
    CHECK((rec - m).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(eig.eigenvalues.sum() ==
          doctest::Approx(m.trace().real()).epsilon(1e-10));
  }
}

TEST_CASE("hermitian_eig rejects asymmetric input and reports the magnitude") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  try {
    hermitian_eig(m);
    FAIL("expected NonHermitianError");
  } catch (const NonHermitianError& e) {
    CHECK(e.max_asymmetry() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("adaptive_quadrature on decaying exponentials") {
  const auto r1 = adaptive_quadrature(
      [](double t) { return std::exp(-4.0 * t); }, 0.0, 20.0, 1e-9);
  const double exact1 = 0.25 * (1.0 - std::exp(-80.0));
  CHECK(std::abs(r1.value - exact1) <= 1e-9 * exact1);

  // N = 2, gamma = 1 integrand of the GHZ dephasing gain; integral N/4gamma.
  const auto r2 = adaptive_quadrature(
      [](double t) { return 4.0 * std::exp(-8.0 * t); }, 0.0, 10.0, 1e-9);
  CHECK(std::abs(r2.value - 0.5) <= 1e-8 * 0.5);

  // N = 1 emission integrand in x: 2 x^0 / (1 + (1-x) + x) = 1.
  const auto r3 = adaptive_quadrature(
      [](double x) { return 2.0 / (1.0 + (1.0 - x) + x); }, 0.0, 1.0, 1e-9);
  CHECK(r3.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adaptive_quadrature is exact on polynomials up to degree 5") {
  std::mt19937 gen(77u);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int degree = 0; degree <= 5; ++degree) {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1);
    for (auto& v : c) v = coeff(gen);
    const auto poly = [&c](double x) {
      double acc = 0.0;
      for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
      return acc;
    };
    double exact = 0.0;  // antiderivative on [0, 1]
    for (std::size_t i = 0; i < c.size(); ++i) {
      exact += c[i] / static_cast<double>(i + 1);
    }
    const auto r = adaptive_quadrature(poly, 0.0, 1.0, 1e-13);
    CHECK(std::abs(r.value - exact) <= 1e-12);
  }
}

TEST_CASE("adaptive_quadrature reports non-convergence with a best estimate") {
  // Integrable singularity at an irrational interior point: the dyadic
  // subdivision can never resolve it within the depth cap.
  const double c = 1.0 / 3.141592653589793;
  const auto f = [c](double x) { return 1.0 / std::sqrt(std::abs(x - c)); };
  try {
    adaptive_quadrature(f, 0.0, 1.0, 1e-9);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("adaptive_quadrature validates its inputs") {
  const auto f = [](double) { return 1.0; };
  CHECK_THROWS_AS(adaptive_quadrature(f, 1.0, 0.0, 1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(adaptive_quadrature(f, 0.0, 1.0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("spin_parity_sum examples") {
  CHECK(spin_parity_sum(0b000, 3) == 3);
  CHECK(spin_parity_sum(0b111, 3) == -3);
  CHECK(spin_parity_sum(0b0101, 4) == 0);
  CHECK_THROWS_AS(spin_parity_sum(0b100, 2), std::invalid_argument);
  CHECK_THROWS_AS(spin_parity_sum(0, 0), std::invalid_argument);
}

TEST_CASE("spin_parity_sum + 2 popcount recovers N for every basis index") {
  for (int n = 1; n <= kMaxSites; ++n) {
    for (std::uint64_t k = 0; k < (std::uint64_t(1) << n); ++k) {
      CHECK(spin_parity_sum(k, n) + 2 * popcount_index(k) == n);
    }
  }
}

TEST_CASE("log_spaced endpoints and monotonicity") {
  const auto grid = log_spaced(20, 0.01, 5.0);
  REQUIRE(grid.size() == 20);
  CHECK(grid.front() == doctest::Approx(0.01));
  CHECK(grid.back() == doctest::Approx(5.0));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}
