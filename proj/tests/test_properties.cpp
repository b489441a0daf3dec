// Seeded random-instance properties of every module.

#include "fixtures.hpp"

#include "repro/dynamics.hpp"
#include "repro/harness.hpp"
#include "repro/leslie.hpp"
#include "repro/resolvent.hpp"
#include "repro/structure.hpp"
#include "repro/trichotomy.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace repro;

namespace {

constexpr int kInstances = 200;

Matrix<double> random_matrix(Rng& rng, Index n, double density, double scale) {
  Matrix<double> m = Matrix<double>::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (rng.uniform() < density) m(i, j) = rng.uniform(0, scale);
  return m;
}

SplitSystem<double> random_split(std::uint64_t seed, double target) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.target_rT = target;
  cfg.scale = 0.05 + 1.5 * Rng(seed + 17).uniform();
  return gen_split(cfg);
}

double radius(const Matrix<double>& m) { return spectral_radius(NonNegMatrix<double>(m)).radius; }

}  // namespace

TEST_CASE("construction identity and subcriticality") {
  for (std::uint64_t s = 0; s < kInstances; ++s) {
    const auto sys = random_split(s, 0.9);
    CHECK((sys.A().matrix() - sys.T().matrix() - sys.F().matrix()).isZero());
    CHECK(spectral_radius(sys.T()).radius < 1);
  }
}

TEST_CASE("spectral scaling, shift and order") {
  Rng rng(2024);
  for (int k = 0; k < kInstances; ++k) {
    const Index n = 1 + static_cast<Index>(rng.below(8));
    const Matrix<double> A = random_matrix(rng, n, rng.uniform(0.2, 1), rng.uniform(0.1, 5));
    const double r = radius(A);
    const double tol = 1e-8 * std::max(1.0, r);
    for (double alpha : {0.0, 0.5, 2.0, 10.0}) {
      CHECK(std::abs(radius(alpha * A) - alpha * r) <= tol * std::max(1.0, alpha));
    }
    const double c = rng.uniform(0.1, 3);
    CHECK(std::abs(radius(A + c * Matrix<double>::Identity(n, n)) - (r + c)) <= 1e-8 * (r + c + 1));
    Matrix<double> B = A;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) B(i, j) *= rng.uniform();
    CHECK(radius(B) <= r + tol);
  }
}

TEST_CASE("power iteration agrees with the characteristic-polynomial oracle") {
  Rng rng(77);
  for (int k = 0; k < kInstances; ++k) {
    const Index n = 1 + static_cast<Index>(rng.below(8));
    const NonNegMatrix<double> A(random_matrix(rng, n, rng.uniform(0.3, 1), 1));
    if (!is_irreducible(A)) continue;
    const double r = spectral_radius(A).radius;
    CHECK(std::abs(r - oracle_radius(A).radius) <= 1e-8 * std::max(1.0, r));
    for (double e : gelfand_estimates(A, 12)) CHECK(e >= r - 1e-9 * std::max(1.0, r));
  }
}

TEST_CASE("resolvent identities") {
  for (std::uint64_t s = 0; s < kInstances; ++s) {
    const auto sys = random_split(1000 + s, s % 2 ? 0.5 : 0.9);
    const double rA = spectral_radius(sys.A()).radius;
    CHECK(resolvent_factorization_gap(sys, std::max(rA, sys.rT()) + 0.5) <= 1e-8);

    const double lambda = 1.0;
    const auto exact = resolvent_T(sys, lambda).matrix;
    const double scale = exact.cwiseAbs().rowwise().sum().maxCoeff();
    const double e1 = (neumann_resolvent(sys, lambda, 100) - exact).cwiseAbs().maxCoeff();
    const double e2 = (neumann_resolvent(sys, lambda, 400) - exact).cwiseAbs().maxCoeff();
    CHECK(e2 <= e1 + 1e-12 * scale);
    CHECK(e2 <= 1e-8 * scale);
  }
}

TEST_CASE("curve audits, bisection and R0 scaling") {
  for (std::uint64_t s = 0; s < kInstances; ++s) {
    const auto sys = random_split(5000 + s, std::array{0.1, 0.5, 0.9}[s % 3]);
    const auto c = curve(sys, 1.0, 4.0, 16);
    CHECK(c.monotone_ok);
    CHECK(c.convex_ok);

    const double R0 = r0(sys).radius;
    if (R0 >= 1 + 1e-6) {
      CHECK(std::abs(bisect_radius(sys).lambda_star - spectral_radius(sys.A()).radius) <= 1e-7);
    }
    const double alpha = 0.5 + 2 * Rng(s).uniform();
    const auto scaled = make_split(sys.T(), alpha * sys.F());
    CHECK(std::abs(r0(scaled).radius - alpha * R0) <= 1e-8 * std::max(1.0, alpha * R0));
  }
}

TEST_CASE("trichotomy on random splits") {
  for (std::uint64_t s = 0; s < kInstances; ++s) {
    const auto sys = random_split(9000 + s, std::array{0.1, 0.5, 0.9}[s % 3]);
    const auto v = classify(sys);
    const double slack = 1e-7 * std::max(1.0, v.rA);
    const auto side = [](double x) { return x > 1 + 1e-9 ? 1 : (x < 1 - 1e-9 ? -1 : 0); };
    CHECK(side(v.r0) == side(v.rA));
    switch (v.kase) {
      case TrichotomyCase::Supercritical:
        CHECK(v.rA > 1);
        CHECK(v.r0 >= v.rA - slack);
        break;
      case TrichotomyCase::Critical:
        CHECK(std::abs(v.rA - 1) <= 1e-9);
        break;
      case TrichotomyCase::Subcritical:
        CHECK(v.rA < 1);
        CHECK(v.r0 <= v.rA + slack);
        break;
    }
    if (v.r0 > 1e-6) CHECK(std::abs(verify_unit_radius(sys) - 1) <= 1e-7);
  }
}

TEST_CASE("strict trichotomy on irreducible splits") {
  int certified = 0;
  for (std::uint64_t s = 0; s < kInstances; ++s) {
    GenConfig cfg;
    cfg.seed = 40000 + s;
    cfg.irreducible = true;
    cfg.target_rT = std::array{0.1, 0.5, 0.9}[s % 3];
    const auto v = classify_strict(gen_split(cfg));
    if (!v.strict) continue;
    ++certified;
    CHECK(std::abs(v.r0 - v.rA) > 1e-9);
    if (v.kase == TrichotomyCase::Supercritical) CHECK(v.r0 > v.rA);
    if (v.kase == TrichotomyCase::Subcritical) CHECK(v.r0 < v.rA);
  }
  CHECK(certified > kInstances / 2);
}

TEST_CASE("irreducibility is preserved upwards and under positive recombination") {
  Rng rng(31);
  for (std::uint64_t s = 0; s < kInstances; ++s) {
    GenConfig cfg;
    cfg.seed = s;
    cfg.n_max = 10;
    cfg.density = 0.2;
    const auto B = gen_irreducible(cfg);
    const Matrix<double> C = B.matrix() + random_matrix(rng, B.dim(), 0.3, 1);
    CHECK(is_irreducible(NonNegMatrix<double>(C)));

    cfg.irreducible = true;
    const auto sys = gen_split(cfg);
    const double a = rng.uniform(1e-3, 10), b = rng.uniform(1e-3, 10);
    CHECK(is_irreducible(NonNegMatrix<double>(a * sys.T().matrix() + b * sys.F().matrix())));
  }
}

TEST_CASE("Perron pairs of random irreducible matrices") {
  Rng rng(8);
  for (std::uint64_t s = 0; s < kInstances; ++s) {
    GenConfig cfg;
    cfg.seed = 70000 + s;
    cfg.n_max = 10;
    const auto A = gen_irreducible(cfg);
    const auto p = perron_pair(A);
    const auto& M = A.matrix();
    CHECK((M * p.right_vec - p.value * p.right_vec).cwiseAbs().maxCoeff() <=
          1e-8 * std::max(1.0, p.value));
    CHECK(is_almost_interior(p.right_vec, 1e-12));
    Vector<double> start(A.dim());
    for (Index i = 0; i < start.size(); ++i) start(i) = rng.uniform(0.01, 10);
    const auto q = perron_pair(A, {}, std::optional<Vector<double>>(start));
    CHECK((p.right_vec - q.right_vec).cwiseAbs().maxCoeff() <= 1e-7);
  }
}

TEST_CASE("Leslie truncations increase towards the closed form") {
  Rng rng(12);
  for (int k = 0; k < 50; ++k) {
    const LeslieModel m(Geometric{rng.uniform(0, 2), rng.uniform(0, 0.9)},
                        ConstantSurvival{rng.uniform(0, 0.95)});
    const double exact = closed_form_r0(m).value;
    double previous = 0;
    for (const auto& [n, value] : truncated_r0_series(m, {2, 4, 8, 16, 32})) {
      CHECK(value >= previous - 1e-12 * std::max(1.0, value));
      CHECK(exact - value <= truncation_tail_bound(m, n) + 1e-10 * std::max(1.0, exact));
      previous = value;
    }
  }
}

TEST_CASE("dynamics agree with the spectral verdict") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    GenConfig cfg;
    cfg.seed = 90000 + s;
    cfg.irreducible = true;
    cfg.target_rT = 0.5;
    cfg.scale = std::array{0.1, 0.4, 1.0}[s % 3];
    const auto sys = gen_split(cfg);
    const double rA = spectral_radius(sys.A()).radius;
    if (std::abs(rA - 1) <= 0.05) continue;
    const auto traj = iterate(sys.A(), Vector<double>(Vector<double>::Ones(sys.dim())), 500);
    for (const auto& x : traj.states) CHECK((x.array() >= 0).all());
    const double g = growth_rate(traj, 100);
    CHECK(std::abs(g - rA) <= 1e-3);
    CHECK((g > 1) == (rA > 1));
    CHECK((r0(sys).radius > 1) == (rA > 1));
  }
}
