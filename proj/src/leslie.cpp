#include "repro/leslie.hpp"

#include "repro/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace repro {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidModel, what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0; }

// Number of explicitly listed survival rates; t_i is the tail value beyond it.
Index listed_survival(const Survival& s) {
  return std::visit(
      Overloaded{[](const ConstantSurvival&) { return Index{0}; },
                 [](const FiniteListSurvival& l) { return static_cast<Index>(l.values.size()); }},
      s);
}

double survival_tail(const Survival& s) {
  return std::visit(Overloaded{[](const ConstantSurvival& c) { return c.t; },
                               [](const FiniteListSurvival& l) { return l.tail; }},
                    s);
}

// Sum of f_i prod_{j<i} t_j over first < i <= last.
double partial_series(const LeslieModel& m, Index first, Index last) {
  double survive = 1;  // prod_{j<i} t_j
  double sum = 0;
  for (Index i = 1; i <= last; ++i) {
    if (i > first) sum += m.f(i) * survive;
    survive *= m.t(i);
  }
  return sum;
}

}  // namespace

LeslieModel::LeslieModel(Fertility fertility, Survival survival, double p)
    : fertility_(std::move(fertility)), survival_(std::move(survival)), p_(p) {
  require(p_ >= 1, "p must lie in [1, inf]");
  std::visit(Overloaded{
                 [](const FiniteSupport& f) {
                   for (double v : f.values) {
                     require(finite_nonneg(v), "fertility values must be finite and >= 0");
                   }
                 },
                 [](const Geometric& g) {
                   require(finite_nonneg(g.c), "geometric fertility needs c >= 0");
                   require(finite_nonneg(g.beta) && g.beta < 1,
                           "geometric fertility needs 0 <= beta < 1");
                 }},
             fertility_);
  std::visit(Overloaded{
                 [](const ConstantSurvival& c) {
                   require(finite_nonneg(c.t) && c.t < 1,
                           "constant survival needs 0 <= t < 1");
                 },
                 [](const FiniteListSurvival& l) {
                   for (double v : l.values) {
                     require(finite_nonneg(v) && v <= 1, "survival values must lie in [0, 1]");
                   }
                   require(finite_nonneg(l.tail) && l.tail < 1,
                           "survival tail must lie in [0, 1)");
                 }},
             survival_);
}

double LeslieModel::q() const noexcept {
  if (std::isinf(p_)) return 1;
  if (p_ == 1) return std::numeric_limits<double>::infinity();
  return p_ / (p_ - 1);
}

double LeslieModel::f(Index i) const {
  return std::visit(
      Overloaded{[i](const FiniteSupport& f) {
                   return i >= 1 && i <= static_cast<Index>(f.values.size())
                              ? f.values[static_cast<std::size_t>(i - 1)]
                              : 0.0;
                 },
                 [i](const Geometric& g) {
                   return g.c * std::pow(g.beta, static_cast<double>(i - 1));
                 }},
      fertility_);
}

double LeslieModel::t(Index i) const {
  return std::visit(
      Overloaded{[](const ConstantSurvival& c) { return c.t; },
                 [i](const FiniteListSurvival& l) {
                   return i >= 1 && i <= static_cast<Index>(l.values.size())
                              ? l.values[static_cast<std::size_t>(i - 1)]
                              : l.tail;
                 }},
      survival_);
}

SeriesValue closed_form_r0(const LeslieModel& model) {
  SeriesValue out;
  if (const auto* fs = std::get_if<FiniteSupport>(&model.fertility())) {
    out.value = partial_series(model, 0, static_cast<Index>(fs->values.size()));
    return out;
  }
  // Geometric fertility. Past the listed survival rates, consecutive terms
  // shrink by the constant ratio beta * tail, so the remainder sums exactly.
  const auto& g = std::get<Geometric>(model.fertility());
  const double ratio = g.beta * survival_tail(model.survival());
  if (!(ratio < 1)) throw Error(ErrorCode::DivergentSeries, "beta * t_tail >= 1");
  const Index listed = listed_survival(model.survival());
  double survive = 1;
  for (Index i = 1; i <= listed; ++i) {
    out.value += model.f(i) * survive;
    survive *= model.t(i);
  }
  out.value += model.f(listed + 1) * survive / (1 - ratio);
  return out;
}

double truncation_tail_bound(const LeslieModel& model, Index n) {
  n = std::max<Index>(n, 0);
  if (const auto* fs = std::get_if<FiniteSupport>(&model.fertility())) {
    const auto support = static_cast<Index>(fs->values.size());
    return n >= support ? 0.0 : partial_series(model, n, support);
  }
  // Terms beyond n: f_{n+1} prod_{j<=n} t_j, then ratios at most beta * t_max.
  const auto& g = std::get<Geometric>(model.fertility());
  double survive = 1;
  for (Index i = 1; i <= n; ++i) survive *= model.t(i);
  double t_max = survival_tail(model.survival());
  for (Index i = n + 1; i <= listed_survival(model.survival()); ++i) {
    t_max = std::max(t_max, model.t(i));
  }
  return model.f(n + 1) * survive / (1 - g.beta * t_max);
}

SplitSystem<double> truncate(const LeslieModel& model, Index n, const Tolerances& tol) {
  if (n < 1) throw Error(ErrorCode::BadRange, "truncation size must be >= 1");
  Matrix<double> T = Matrix<double>::Zero(n, n);
  Matrix<double> F = Matrix<double>::Zero(n, n);
  for (Index i = 0; i < n; ++i) F(0, i) = model.f(i + 1);
  for (Index i = 0; i + 1 < n; ++i) T(i + 1, i) = model.t(i + 1);
  return make_split(NonNegMatrix<double>(std::move(T)), NonNegMatrix<double>(std::move(F)),
                    tol);
}

SurvivalBound survival_radius_bound(const LeslieModel& model) {
  SurvivalBound out;
  out.bound = std::max(survival_tail(model.survival()), 0.0);
  out.epsilon = 1 - out.bound;
  const Index listed = listed_survival(model.survival());
  for (Index i = listed; i >= 1; --i) {
    if (model.t(i) > out.bound) {
      out.m = i;
      break;
    }
  }
  return out;
}

std::vector<std::pair<Index, double>> truncated_r0_series(const LeslieModel& model,
                                                          const std::vector<Index>& n_list,
                                                          const Tolerances& tol) {
  if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end()) ||
      n_list.front() < 1) {
    throw Error(ErrorCode::BadRange, "truncation sizes must be ascending and >= 1");
  }
  std::vector<std::pair<Index, double>> out;
  out.reserve(n_list.size());
  for (Index n : n_list) out.emplace_back(n, r0(truncate(model, n, tol), tol).radius);
  return out;
}

}  // namespace repro
