#pragma once

// Age-structured Leslie operators on l_p with countably many age classes,
// given by parametric fertility and survival sequences.

#include "repro/core.hpp"
#include "repro/split.hpp"

#include <limits>
#include <utility>
#include <variant>
#include <vector>

namespace repro {

/// f_i = values[i-1], zero beyond the list.
struct FiniteSupport {
  std::vector<double> values;
};

/// f_i = c * beta^(i-1), 0 <= beta < 1.
struct Geometric {
  double c = 0;
  double beta = 0;
};

/// t_i = t for all i, 0 <= t < 1.
struct ConstantSurvival {
  double t = 0;
};

/// t_i = values[i-1] for i <= values.size(), then `tail` (< 1) forever.
struct FiniteListSurvival {
  std::vector<double> values;
  double tail = 0;
};

using Fertility = std::variant<FiniteSupport, Geometric>;
using Survival = std::variant<ConstantSurvival, FiniteListSurvival>;

/// Fertility f in l_q and survival t with limsup t_i < 1, both checked
/// structurally at construction. p in [1, inf] is carried for reporting;
/// nothing computed here depends on it.
class LeslieModel {
 public:
  LeslieModel(Fertility fertility, Survival survival,
              double p = std::numeric_limits<double>::infinity());

  const Fertility& fertility() const noexcept { return fertility_; }
  const Survival& survival() const noexcept { return survival_; }
  double p() const noexcept { return p_; }
  /// Conjugate exponent q with 1/p + 1/q = 1.
  double q() const noexcept;

  /// 1-based sequence access.
  double f(Index i) const;
  double t(Index i) const;

 private:
  Fertility fertility_;
  Survival survival_;
  double p_;
};

struct SeriesValue {
  double value = 0;
  double error_bound = 0;  // bound on |value - exact series|, excluding roundoff
};

/// R0 = f_1 + sum_{i>=2} f_i prod_{j<i} t_j, the (1,1) entry of the rank-one
/// operator F (I - T)^-1.
SeriesValue closed_form_r0(const LeslieModel& model);

/// Upper bound on the part of the R0 series dropped by an n-class truncation,
/// sum_{i>n} f_i prod_{j<i} t_j.
double truncation_tail_bound(const LeslieModel& model, Index n);

/// First n age classes: F has first row (f_1..f_n), T has subdiagonal
/// (t_1..t_{n-1}); outflow from class n is dropped. T is nilpotent.
SplitSystem<double> truncate(const LeslieModel& model, Index n,
                             const Tolerances& tol = {});

struct SurvivalBound {
  double bound = 0;    // r(T) <= bound for the infinite survival operator
  Index m = 0;         // t_i <= bound for all i > m
  double epsilon = 1;  // bound = 1 - epsilon
};

SurvivalBound survival_radius_bound(const LeslieModel& model);

/// (n, R0 of the n-class truncation) for each n in the ascending list.
std::vector<std::pair<Index, double>> truncated_r0_series(
    const LeslieModel& model, const std::vector<Index>& n_list,
    const Tolerances& tol = {});

}  // namespace repro
