#pragma once

// Classification of (R0, r(A)) into the three stability cases, with the
// strict variant certified through irreducibility.

#include "repro/core.hpp"
#include "repro/resolvent.hpp"
#include "repro/spectral.hpp"
#include "repro/split.hpp"
#include "repro/structure.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace repro {

enum class TrichotomyCase {
  Supercritical,  // (a) R0 >= r(A) > 1
  Critical,       // (b) R0 = r(A) = 1
  Subcritical,    // (c) R0 <= r(A) < 1
};

inline const char* case_label(TrichotomyCase c) noexcept {
  switch (c) {
    case TrichotomyCase::Supercritical: return "a";
    case TrichotomyCase::Critical: return "b";
    case TrichotomyCase::Subcritical: return "c";
  }
  return "?";
}

inline const char* to_string(TrichotomyCase c) noexcept {
  switch (c) {
    case TrichotomyCase::Supercritical: return "supercritical";
    case TrichotomyCase::Critical: return "critical";
    case TrichotomyCase::Subcritical: return "subcritical";
  }
  return "unknown";
}

/// Why classify_strict could not certify strict inequalities.
enum class StrictPrecondition {
  Reducible,      // A is not irreducible
  ZeroTransition, // T = 0
  ZeroR0,         // R0 <= tol_eq
  GapUnresolved,  // |R0 - r(A)| is inside the numerical band
};

inline const char* to_string(StrictPrecondition p) noexcept {
  switch (p) {
    case StrictPrecondition::Reducible: return "reducible";
    case StrictPrecondition::ZeroTransition: return "T=0";
    case StrictPrecondition::ZeroR0: return "R0=0";
    case StrictPrecondition::GapUnresolved: return "gap_unresolved";
  }
  return "unknown";
}

template <typename Scalar>
struct TrichotomyVerdict {
  TrichotomyCase kase = TrichotomyCase::Critical;
  Scalar r0 = 0;
  Scalar rA = 0;
  bool strict = false;
  Scalar r0_margin = 0;  // |R0 - 1|
  Scalar rA_margin = 0;  // |r(A) - 1|
  bool boundary_flag = false;
  std::vector<StrictPrecondition> unmet;  // filled by classify_strict only
};

namespace detail {

template <typename Scalar>
std::string describe(const TrichotomyVerdict<Scalar>& v) {
  std::ostringstream os;
  os.precision(12);
  os << "R0=" << v.r0 << ", r(A)=" << v.rA;
  return os.str();
}

template <typename Scalar>
TrichotomyVerdict<Scalar> classify_values(Scalar r0v, Scalar rA, const Tolerances& tol) {
  const Scalar band = static_cast<Scalar>(tol.tol_eq);
  TrichotomyVerdict<Scalar> v;
  v.r0 = r0v;
  v.rA = rA;
  v.r0_margin = std::abs(r0v - 1);
  v.rA_margin = std::abs(rA - 1);
  v.boundary_flag = v.r0_margin <= band || v.rA_margin <= band;

  if (v.r0_margin <= band && v.rA_margin <= band) {
    v.kase = TrichotomyCase::Critical;
    return v;
  }
  if (v.rA_margin <= band) {
    // r(A) sits in the band but R0 does not: accept only if both sit on the
    // same side of 1.
    if ((r0v > 1) != (rA > 1) || rA == 1) {
      const auto code = v.r0_margin <= 3 * band ? ErrorCode::AmbiguousBoundary
                                                : ErrorCode::TheoremViolation;
      throw Error(code, "R0 and r(A) straddle 1: " + describe(v));
    }
  }
  v.kase = rA > 1 ? TrichotomyCase::Supercritical : TrichotomyCase::Subcritical;

  // Paired inequality of the assigned case, band scaled with r(A).
  const Scalar slack = band * std::max(Scalar(1), rA);
  const bool ok = v.kase == TrichotomyCase::Supercritical ? r0v >= rA - slack
                                                          : r0v <= rA + slack;
  if (!ok) {
    throw Error(ErrorCode::TheoremViolation,
                std::string("case (") + case_label(v.kase) +
                    ") inequality fails: " + describe(v));
  }
  return v;
}

}  // namespace detail

/// Nonstrict trichotomy: exactly one of R0 >= r(A) > 1, R0 = r(A) = 1,
/// R0 <= r(A) < 1, with equality to 1 meaning within tol_eq.
template <typename Scalar>
TrichotomyVerdict<Scalar> classify(const SplitSystem<Scalar>& sys,
                                   const Tolerances& tol = {}) {
  const Scalar r0v = r0(sys, tol).radius;
  const Scalar rA = spectral_radius(sys.A(), tol).radius;
  return detail::classify_values(r0v, rA, tol);
}

/// r(T + F / R0), which equals 1 whenever R0 > 0.
template <typename Scalar>
Scalar verify_unit_radius(const SplitSystem<Scalar>& sys, const Tolerances& tol = {}) {
  const Scalar r0v = r0(sys, tol).radius;
  if (!(r0v > static_cast<Scalar>(tol.tol_eq))) {
    throw Error(ErrorCode::R0Zero, "R0 is zero", -1, -1, static_cast<double>(r0v));
  }
  const NonNegMatrix<Scalar> scaled(sys.T().matrix() + sys.F().matrix() / r0v);
  return spectral_radius(scaled, tol).radius;
}

/// classify, then certify strict inequalities when A is irreducible, T != 0
/// and R0 > 0. Unmet preconditions are listed in `unmet` and leave
/// strict = false.
template <typename Scalar>
TrichotomyVerdict<Scalar> classify_strict(const SplitSystem<Scalar>& sys,
                                          const Tolerances& tol = {}) {
  auto v = classify(sys, tol);
  const Scalar band = static_cast<Scalar>(tol.tol_eq);
  if (!is_irreducible(sys.A())) v.unmet.push_back(StrictPrecondition::Reducible);
  if (sys.T().is_zero()) v.unmet.push_back(StrictPrecondition::ZeroTransition);
  if (!(v.r0 > band)) v.unmet.push_back(StrictPrecondition::ZeroR0);
  if (!v.unmet.empty() || v.kase == TrichotomyCase::Critical) return v;

  const Scalar gap = v.r0 - v.rA;
  const bool right_direction =
      v.kase == TrichotomyCase::Supercritical ? gap > 0 : gap < 0;
  if (std::abs(gap) > band && !right_direction) {
    throw Error(ErrorCode::TheoremViolation,
                "strict inequality has the wrong direction: " + detail::describe(v));
  }
  if (std::abs(gap) <= band) {
    v.unmet.push_back(StrictPrecondition::GapUnresolved);
    return v;
  }
  v.strict = true;
  return v;
}

}  // namespace repro
