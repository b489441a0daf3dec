#include "fixtures.hpp"

#include "repro/spectral.hpp"

#include <doctest.h>

#include <algorithm>
#include <complex>

using namespace repro;
using fixtures::kRootA;
using fixtures::nonneg;

TEST_CASE("spectral_radius of the worked example") {
  const auto r = spectral_radius(nonneg({{1, 1}, {0.5, 0}}));
  CHECK(std::abs(r.radius - kRootA) < 1e-10);
  CHECK(r.method == SpectralMethod::PowerIteration);
  CHECK(r.residual < 1e-9);
}

TEST_CASE("spectral_radius of zero and periodic matrices") {
  for (Index n : {1, 3, 6}) CHECK(spectral_radius(NonNegMatrix<double>::zero(n)).radius == 0);
  CHECK(spectral_radius(nonneg({{0, 1}, {1, 0}})).radius == doctest::Approx(1.0).epsilon(1e-12));
  const auto cyc = nonneg({{0, 0, 2}, {2, 0, 0}, {0, 2, 0}});
  CHECK(spectral_radius(cyc).radius == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spectral_radius of reducible and nilpotent matrices") {
  const auto tri = nonneg({{1.5, 1}, {0, 0}});
  CHECK(std::abs(spectral_radius(tri).radius - 1.5) < 1e-10);
  const auto jordan = nonneg({{0.7, 1, 0}, {0, 0.7, 1}, {0, 0, 0.7}});
  CHECK(std::abs(spectral_radius(jordan).radius - 0.7) < 1e-9);
  const auto nil = nonneg({{0, 1, 3}, {0, 0, 2}, {0, 0, 0}});
  CHECK(std::abs(spectral_radius(nil).radius) < 1e-10);
}

TEST_CASE("spectral_radius honours tol_spec") {
  Tolerances loose;
  loose.tol_spec = 1e-4;
  const auto r = spectral_radius(nonneg({{1, 1}, {0.5, 0}}), loose);
  CHECK(std::abs(r.radius - kRootA) < 1e-4);
}

TEST_CASE("gelfand_estimate") {
  for (Index k : {1, 5, 20}) {
    CHECK(gelfand_estimate(nonneg({{0.5}}), k).radius == doctest::Approx(0.5));
  }
  const auto nil = gelfand_estimates(nonneg({{0, 1}, {0, 0}}), 5);
  CHECK(nil[0] == 1);
  CHECK(nil.back() == 0);
  CHECK(nil.size() == 2);
  const auto g = gelfand_estimate(nonneg({{1, 1}, {0.5, 0}}), 20);
  CHECK(std::abs(g.radius - kRootA) < 1e-6);
  CHECK(g.method == SpectralMethod::Gelfand);
}

TEST_CASE("gelfand estimates bound the radius from above") {
  const auto A = nonneg({{0.2, 0.9, 0}, {0, 0.1, 0.4}, {0.7, 0, 0.3}});
  const double r = spectral_radius(A).radius;
  for (double e : gelfand_estimates(A, 30)) CHECK(e >= r - 1e-10);
}

TEST_CASE("characteristic_polynomial") {
  const auto c = characteristic_polynomial(fixtures::dense({{1, 1}, {0.5, 0}}));
  REQUIRE(c.size() == 3);
  CHECK(c[2] == doctest::Approx(1));
  CHECK(c[1] == doctest::Approx(-1));
  CHECK(c[0] == doctest::Approx(-0.5));
}

TEST_CASE("eig_oracle") {
  const auto ev = eig_oracle(nonneg({{1, 1}, {0.5, 0}}));
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].real() == doctest::Approx(kRootA).epsilon(1e-12));
  CHECK(ev[1].real() == doctest::Approx((1 - std::sqrt(3.0)) / 2).epsilon(1e-12));
  CHECK(std::abs(ev[0].imag()) < 1e-12);

  const auto id = eig_oracle(NonNegMatrix<double>::identity(3));
  REQUIRE(id.size() == 3);
  for (const auto& z : id) CHECK(std::abs(z - std::complex<double>(1, 0)) < 1e-5);

  auto swap = eig_oracle(nonneg({{0, 1}, {1, 0}}));
  std::sort(swap.begin(), swap.end(), [](auto a, auto b) { return a.real() < b.real(); });
  CHECK(swap[0].real() == doctest::Approx(-1));
  CHECK(swap[1].real() == doctest::Approx(1));
  CHECK(oracle_radius(nonneg({{0, 1}, {1, 0}})).radius == doctest::Approx(1));
}

TEST_CASE("eig_oracle dimension cap") {
  try {
    eig_oracle(NonNegMatrix<double>::identity(13));
    FAIL("13x13 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionTooLarge);
  }
}

TEST_CASE("method names") {
  CHECK(std::string(to_string(SpectralMethod::PowerIteration)) == "power_iteration");
  CHECK(std::string(to_string(SpectralMethod::Gelfand)) == "gelfand");
  CHECK(std::string(to_string(SpectralMethod::CharPolyOracle)) == "char_poly_oracle");
}

TEST_CASE("long double instantiation") {
  Matrix<long double> m(2, 2);
  m << 1, 1, 0.5L, 0;
  const NonNegMatrix<long double> A(m);
  const long double exact = (1 + std::sqrt(3.0L)) / 2;
  CHECK(std::abs(spectral_radius(A).radius - exact) < 1e-10L);
  CHECK(std::abs(gelfand_estimate(A, 30).radius - exact) < 1e-6L);
}

TEST_CASE("Gelfand fallback is certified on nearly decomposable matrices") {
  const auto A = nonneg({{1, 1e-9}, {4e-9, 1}});
  const auto r = spectral_radius(A);
  CHECK(r.method == SpectralMethod::Gelfand);
  CHECK(std::abs(r.radius - (1 + 2e-9)) <= 1e-10);
  CHECK(r.residual <= 1e-10);
}

TEST_CASE("reducible matrices are split into strong components") {
  const auto comps = detail::strong_components(fixtures::dense({{0.5, 0, 0}, {1, 0.2, 3}, {0, 1, 0}}));
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<Index>{1, 2});
  CHECK(comps[1] == std::vector<Index>{0});

  const auto A = nonneg({{0.5, 0, 0}, {1, 0.2, 3}, {0, 1, 0}});
  CHECK(std::abs(spectral_radius(A).radius - oracle_radius(A).radius) < 1e-10);
  CHECK(spectral_radius(nonneg({{1.5, 1}, {0, 0}})).radius == 1.5);
}
