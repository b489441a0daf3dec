#include "repro/harness.hpp"

#include "repro/dynamics.hpp"
#include "repro/resolvent.hpp"
#include "repro/spectral.hpp"
#include "repro/structure.hpp"
#include "repro/trichotomy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace repro {

std::uint64_t instance_seed(std::uint64_t base, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 engine(seq);
  return engine();
}

void GenConfig::validate() const {
  const bool ok = n_max >= 1 && density > 0 && density <= 1 && scale >= 0 &&
                  std::isfinite(scale) && target_rT > 0 && target_rT < 1 &&
                  (!irreducible || n_max >= 2);
  if (!ok) throw Error(ErrorCode::ValidationError, "GenConfig out of range");
}

namespace {

Matrix<double> random_entries(Rng& rng, Index n, double density, double scale) {
  Matrix<double> m = Matrix<double>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const bool on = rng.uniform() < density;
      const double v = rng.uniform();
      if (on) m(i, j) = scale * v;
    }
  }
  return m;
}

void add_cycle(Rng& rng, Matrix<double>& m, double scale) {
  const Index n = m.rows();
  for (Index i = 0; i < n; ++i) m((i + 1) % n, i) = scale * rng.uniform(0.5, 1.0);
}

}  // namespace

SplitSystem<double> gen_split(const GenConfig& cfg, const Tolerances& tol) {
  constexpr int kMaxDraws = 64;
  cfg.validate();
  Rng rng(cfg.seed);
  const Index lo = cfg.irreducible ? 2 : 1;
  const Index n = lo + static_cast<Index>(rng.below(static_cast<std::uint64_t>(cfg.n_max - lo + 1)));

  Matrix<double> T;
  double rT = 0;
  for (int draw = 0; draw < kMaxDraws && rT == 0; ++draw) {
    T = random_entries(rng, n, cfg.density, 1.0);
    rT = spectral_radius(NonNegMatrix<double>(T), tol).radius;
  }
  if (rT == 0) {
    throw Error(ErrorCode::DegenerateDraw, "no draw of T had positive spectral radius");
  }
  T *= cfg.target_rT / rT;
  T *= cfg.target_rT / spectral_radius(NonNegMatrix<double>(T), tol).radius;

  Matrix<double> F = random_entries(rng, n, cfg.density, cfg.scale);
  if (cfg.irreducible) add_cycle(rng, F, cfg.scale > 0 ? cfg.scale : 1.0);
  return make_split(NonNegMatrix<double>(std::move(T)), NonNegMatrix<double>(std::move(F)),
                    tol);
}

NonNegMatrix<double> gen_irreducible(const GenConfig& cfg) {
  cfg.validate();
  if (cfg.n_max < 2) throw Error(ErrorCode::ValidationError, "gen_irreducible needs n_max >= 2");
  Rng rng(cfg.seed);
  const Index n = 2 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(cfg.n_max - 1)));
  const double scale = cfg.scale > 0 ? cfg.scale : 1.0;
  Matrix<double> m = random_entries(rng, n, cfg.density, scale);
  add_cycle(rng, m, scale);
  return NonNegMatrix<double>(std::move(m));
}

bool ValidationReport::all_passed() const {
  return std::all_of(invariants.begin(), invariants.end(),
                     [](const InvariantResult& r) { return r.passed(); });
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "selftest: %lld instances, seed %llu\n",
                static_cast<long long>(instances), static_cast<unsigned long long>(seed));
  os << line;
  std::snprintf(line, sizeof line, "%-26s %8s %7s %11s %9s  %s\n", "invariant", "checked",
                "failed", "worst", "limit", "status");
  os << line;
  for (const auto& r : invariants) {
    std::snprintf(line, sizeof line, "%-26s %8lld %7lld %11.3e %9.1e  %s\n", r.name.c_str(),
                  static_cast<long long>(r.checked), static_cast<long long>(r.failed), r.worst,
                  r.limit, r.passed() ? "pass" : "FAIL");
    os << line;
  }
  for (const auto& r : invariants) {
    if (!r.passed()) os << "  " << r.name << ": " << r.first_failure << "\n";
  }
  os << "near-boundary stress cases: " << near_boundary << "\n";
  if (all_passed()) {
    os << "all invariants passed\n";
  } else {
    const auto bad = std::count_if(invariants.begin(), invariants.end(),
                                   [](const InvariantResult& r) { return !r.passed(); });
    os << bad << " invariant(s) FAILED\n";
  }
  return os.str();
}

namespace {

double rel(double err, double magnitude) { return std::abs(err) / std::max(1.0, std::abs(magnitude)); }

// Accumulates one invariant's results across instances.
class Battery {
 public:
  void define(const std::string& name, double limit) {
    index_[name] = results_.size();
    results_.push_back({name, limit, 0, 0, 0.0, {}});
  }

  // Runs `metric` (a violation magnitude, pass iff <= limit); any exception is
  // a failure with infinite magnitude.
  void check(const std::string& name, Index instance, const std::function<double()>& metric) {
    auto& r = results_[index_.at(name)];
    ++r.checked;
    double value = 0;
    std::string why;
    try {
      value = metric();
      if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
    } catch (const std::exception& e) {
      value = std::numeric_limits<double>::infinity();
      why = e.what();
    }
    r.worst = std::max(r.worst, value);
    if (!(value <= r.limit)) {
      if (r.failed++ == 0) {
        std::ostringstream os;
        os.precision(6);
        os << "instance " << instance << ": violation " << value;
        if (!why.empty()) os << " (" << why << ")";
        r.first_failure = os.str();
      }
    }
  }

  std::vector<InvariantResult> take() { return std::move(results_); }

 private:
  std::vector<InvariantResult> results_;
  std::map<std::string, std::size_t> index_;
};

int band_sign(double x, double band) { return x > 1 + band ? 1 : (x < 1 - band ? -1 : 0); }

}  // namespace

GenConfig sweep_config(const GenConfig& base, const SweepPlan& plan, Index index) {
  const auto& targets = plan.target_radii;
  const auto& scales = plan.fertility_scales;
  const auto i = static_cast<std::size_t>(index);
  GenConfig c = base;
  c.seed = instance_seed(base.seed, static_cast<std::uint64_t>(index));
  if (!targets.empty()) c.target_rT = targets[i % targets.size()];
  if (!scales.empty()) {
    const std::size_t k = targets.empty() ? 1 : targets.size();
    c.scale = scales[(i / k) % scales.size()];
  }
  return c;
}

ValidationReport cross_validate(Index count, const GenConfig& cfg, const Tolerances& tol,
                                const SweepPlan& plan) {
  cfg.validate();
  tol.validate();
  ValidationReport report;
  report.instances = std::max<Index>(count, 0);
  report.seed = cfg.seed;

  Battery b;
  b.define("generator_validity", 1e-9);
  b.define("scaling", 1e-8);
  b.define("shift", 1e-8);
  b.define("order", 1e-9);
  b.define("oracle_equivalence", 1e-8);
  b.define("gelfand_upper_bias", 1e-9);
  b.define("resolvent_factorization", 1e-8);
  b.define("neumann_agreement", 1e-8);
  b.define("curve_audit", 1e-7);
  b.define("bisection_identity", 1e-7);
  b.define("r0_scaling", 1e-8);
  b.define("unit_radius", 1e-7);
  b.define("trichotomy", 1e-7);
  b.define("sign_equivalence", 0);
  b.define("strict_trichotomy", 0);
  b.define("perron_residual", 1e-8);
  b.define("perron_uniqueness", 1e-7);
  b.define("irreducible_order", 0);
  b.define("irreducible_splitting", 0);
  b.define("dynamics_consistency", 1e-3);

  for (Index i = 0; i < report.instances; ++i) {
    const GenConfig c = sweep_config(cfg, plan, i);
    if (c.target_rT >= 0.99) ++report.near_boundary;
    Rng rng(c.seed ^ 0x5eedULL);

    // Instance generation itself can fail (DegenerateDraw); that is a
    // generator_validity failure and the remaining checks are skipped.
    std::optional<SplitSystem<double>> sys;
    b.check("generator_validity", i, [&] {
      sys.emplace(gen_split(c, tol));
      return std::abs(sys->rT() - c.target_rT);
    });
    if (!sys) continue;
    const auto& A = sys->A();
    const double rA = spectral_radius(A, tol).radius;
    const double R0 = r0(*sys, tol).radius;

    b.check("scaling", i, [&] {
      double worst = 0;
      for (double alpha : {0.0, 0.5, 2.0, 10.0}) {
        const NonNegMatrix<double> scaled(alpha * A.matrix());
        worst = std::max(worst, rel(spectral_radius(scaled, tol).radius - alpha * rA, alpha * rA));
      }
      return worst;
    });
    b.check("shift", i, [&] {
      double worst = 0;
      for (double shift : {0.5, 3.0}) {
        const NonNegMatrix<double> shifted(
            A.matrix() + shift * Matrix<double>::Identity(A.dim(), A.dim()));
        worst = std::max(worst, rel(spectral_radius(shifted, tol).radius - (rA + shift), rA + shift));
      }
      return worst;
    });
    b.check("order", i, [&] {
      Matrix<double> lower = A.matrix();
      for (Index r = 0; r < lower.rows(); ++r)
        for (Index s = 0; s < lower.cols(); ++s) lower(r, s) *= rng.uniform();
      const NonNegMatrix<double> B(lower);
      if (!entrywise_leq(B, A)) return std::numeric_limits<double>::infinity();
      return std::max(0.0, spectral_radius(B, tol).radius - rA) / std::max(1.0, rA);
    });
    b.check("gelfand_upper_bias", i, [&] {
      double worst = 0;
      for (double est : gelfand_estimates(A, 20)) worst = std::max(worst, rA - est);
      return worst / std::max(1.0, rA);
    });
    b.check("resolvent_factorization", i, [&] {
      return resolvent_factorization_gap(*sys, std::max(rA, sys->rT()) + 1.0, tol);
    });
    b.check("neumann_agreement", i, [&] {
      const double lambda = 1.0;
      const double ratio = sys->rT() / lambda;
      const Index terms = std::min<Index>(
          50000, static_cast<Index>(std::ceil(2 * std::log(1e-14) / std::log(ratio))) + 10);
      const auto R = resolvent_T(*sys, lambda, tol).matrix;
      const Matrix<double> N = neumann_resolvent(*sys, lambda, terms);
      return detail::inf_norm<double>(R - N) / detail::inf_norm(R);
    });
    b.check("curve_audit", i, [&] {
      const auto cs = curve(*sys, 1.0, 4.0, 16, tol);
      if (!cs.monotone_ok || !cs.convex_ok) return std::numeric_limits<double>::infinity();
      return cs.max_violation;
    });
    if (R0 >= 1 + 1e-6) {
      b.check("bisection_identity", i, [&] {
        const auto br = bisect_radius(*sys, tol);
        return std::abs(br.lambda_star - rA);
      });
    }
    b.check("r0_scaling", i, [&] {
      double worst = 0;
      for (double alpha : {0.5, 3.0}) {
        const auto scaled = make_split(sys->T(), NonNegMatrix<double>(alpha * sys->F().matrix()), tol);
        worst = std::max(worst, rel(r0(scaled, tol).radius - alpha * R0, alpha * R0));
      }
      return worst;
    });
    if (R0 > 1e-6) {
      b.check("unit_radius", i, [&] { return std::abs(verify_unit_radius(*sys, tol) - 1.0); });
    }
    b.check("trichotomy", i, [&] {
      const auto v = classify(*sys, tol);
      switch (v.kase) {
        case TrichotomyCase::Supercritical: return std::max(0.0, v.rA - v.r0);
        case TrichotomyCase::Subcritical: return std::max(0.0, v.r0 - v.rA);
        case TrichotomyCase::Critical: return std::max(v.r0_margin, v.rA_margin);
      }
      return std::numeric_limits<double>::infinity();
    });
    b.check("sign_equivalence", i, [&] {
      return band_sign(R0, tol.tol_eq) * band_sign(rA, tol.tol_eq) < 0 ? 1.0 : 0.0;
    });

    // Irreducible instances: strict trichotomy, Perron pairs, dynamics.
    GenConfig ci = c;
    ci.irreducible = true;
    ci.n_max = std::max<Index>(c.n_max, 2);
    std::optional<SplitSystem<double>> irr;
    b.check("generator_validity", i, [&] {
      irr.emplace(gen_split(ci, tol));
      return is_irreducible(irr->A()) ? std::abs(irr->rT() - ci.target_rT)
                                      : std::numeric_limits<double>::infinity();
    });
    const auto G = gen_irreducible(ci);
    b.check("generator_validity", i, [&] { return is_irreducible(G) ? 0.0 : 1.0; });

    b.check("oracle_equivalence", i, [&] {
      const double sr = spectral_radius(G, tol).radius;
      return rel(sr - oracle_radius(G).radius, sr);
    });
    b.check("perron_residual", i, [&] {
      const auto pp = perron_pair(G, tol);
      const auto& M = G.matrix();
      const double right = (M * pp.right_vec - pp.value * pp.right_vec).cwiseAbs().maxCoeff();
      const double left =
          (M.transpose() * pp.left_vec - pp.value * pp.left_vec).cwiseAbs().maxCoeff();
      return std::max(right, left) / std::max(1.0, pp.value);
    });
    b.check("perron_uniqueness", i, [&] {
      Vector<double> start(G.dim());
      for (Index k = 0; k < start.size(); ++k) start(k) = rng.uniform(0.1, 10.0);
      const auto p1 = perron_pair(G, tol);
      const auto p2 = perron_pair(G, tol, std::optional<Vector<double>>(start));
      return (p1.right_vec - p2.right_vec).cwiseAbs().maxCoeff();
    });
    b.check("irreducible_order", i, [&] {
      Matrix<double> bigger = G.matrix();
      for (Index r = 0; r < bigger.rows(); ++r)
        for (Index s = 0; s < bigger.cols(); ++s)
          if (rng.uniform() < 0.3) bigger(r, s) += rng.uniform();
      return is_irreducible(NonNegMatrix<double>(bigger)) ? 0.0 : 1.0;
    });
    if (!irr) continue;
    b.check("irreducible_splitting", i, [&] {
      const double a = rng.uniform(1e-3, 10.0);
      const double w = rng.uniform(1e-3, 10.0);
      const NonNegMatrix<double> mix(a * irr->T().matrix() + w * irr->F().matrix());
      return is_irreducible(mix) ? 0.0 : 1.0;
    });
    const double R0i = r0(*irr, tol).radius;
    const double rAi = spectral_radius(irr->A(), tol).radius;
    if (!irr->T().is_zero() && R0i > 1e-6 && std::abs(R0i - 1) > 1e-3) {
      b.check("strict_trichotomy", i, [&] {
        const auto v = classify_strict(*irr, tol);
        const double gap = v.kase == TrichotomyCase::Supercritical ? v.r0 - v.rA : v.rA - v.r0;
        return v.strict && gap > 1e-7 ? 0.0 : 1.0;
      });
    }
    if (std::abs(rAi - 1) > 0.05) {
      b.check("dynamics_consistency", i, [&] {
        Vector<double> x0(irr->dim());
        for (Index k = 0; k < x0.size(); ++k) x0(k) = rng.uniform(0.5, 1.0);
        const double g = growth_rate(iterate(irr->A(), x0, 500), 100);
        const bool signs = (g > 1) == (rAi > 1) && (R0i > 1) == (rAi > 1);
        return signs ? std::abs(g - rAi) : std::numeric_limits<double>::infinity();
      });
    }
  }
  report.invariants = b.take();
  return report;
}

}  // namespace repro
