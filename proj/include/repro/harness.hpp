#pragma once

// Seeded random instances and the invariant battery behind `selftest`.

#include "repro/core.hpp"
#include "repro/split.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace repro {

/// Deterministic stream: std::mt19937_64 with hand-rolled conversions, so the
/// same seed yields the same draws on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

/// Seed of instance `index` in a sweep rooted at `base`.
std::uint64_t instance_seed(std::uint64_t base, std::uint64_t index);

struct GenConfig {
  Index n_max = 8;
  double density = 0.5;    // probability that an entry is nonzero
  double scale = 1.0;      // fertility entries are drawn from [0, scale)
  std::uint64_t seed = 0;
  double target_rT = 0.5;  // T is rescaled to this spectral radius
  bool irreducible = false;  // superimpose a positive cycle on F

  void validate() const;
};

/// Random split with r(T) = target_rT. T is redrawn while it has zero spectral
/// radius (at most 64 times, then DegenerateDraw).
SplitSystem<double> gen_split(const GenConfig& cfg, const Tolerances& tol = {});

/// Random matrix of size 2..n_max with a positive cycle i -> i+1 (mod n).
NonNegMatrix<double> gen_irreducible(const GenConfig& cfg);

struct InvariantResult {
  std::string name;
  double limit = 0;   // pass iff worst <= limit
  Index checked = 0;
  Index failed = 0;
  double worst = 0;
  std::string first_failure;

  bool passed() const { return failed == 0; }
};

struct ValidationReport {
  Index instances = 0;
  std::uint64_t seed = 0;
  Index near_boundary = 0;  // instances with target_rT >= 0.99
  std::vector<InvariantResult> invariants;

  bool all_passed() const;
  std::string to_text() const;
};

/// Instance i uses target_radii[i % k] and fertility_scales[(i / k) % m].
/// Empty lists fall back to the values in GenConfig.
struct SweepPlan {
  std::vector<double> target_radii{0.1, 0.5, 0.9};
  std::vector<double> fertility_scales{0.05, 0.15, 0.4, 1.0};
};

/// Configuration of instance `index` in a sweep: its own seed plus the
/// target radius and fertility scale the plan assigns to it.
GenConfig sweep_config(const GenConfig& base, const SweepPlan& plan, Index index);

/// Runs every invariant check over `count` seeded instances. Failures are
/// recorded in the report, never thrown.
ValidationReport cross_validate(Index count, const GenConfig& cfg,
                                const Tolerances& tol = {},
                                const SweepPlan& plan = {});

}  // namespace repro
