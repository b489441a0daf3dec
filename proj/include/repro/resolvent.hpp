#pragma once

// Resolvents (lambda I - T)^-1, next-generation operators F (lambda I - T)^-1,
// R0, the curve lambda -> r(F (lambda I - T)^-1) and recovery of r(A) from it.

#include "repro/core.hpp"
#include "repro/spectral.hpp"
#include "repro/split.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace repro {

template <typename Scalar>
struct Resolvent {
  Matrix<Scalar> matrix;
  Scalar max_clamp = 0;  // largest roundoff negative that was set to zero
};

namespace detail {

template <typename Scalar>
void require_resolvent_point(const SplitSystem<Scalar>& sys, Scalar lambda,
                             const Tolerances& tol) {
  const Scalar floor = sys.rT() + static_cast<Scalar>(tol.tol_split);
  if (!(lambda > floor)) {
    throw Error(ErrorCode::LambdaTooSmall,
                "lambda = " + std::to_string(static_cast<double>(lambda)) +
                    " must exceed r(T) + tol_split = " +
                    std::to_string(static_cast<double>(floor)),
                -1, -1, static_cast<double>(lambda));
  }
}

template <typename Scalar>
Matrix<Scalar> checked_inverse(const Matrix<Scalar>& m) {
  const Eigen::PartialPivLU<Matrix<Scalar>> lu(m);
  const auto diag = lu.matrixLU().diagonal();
  const bool singular =
      (diag.array() == Scalar(0)).any() || !diag.allFinite() ||
      lu.rcond() < std::numeric_limits<Scalar>::epsilon();
  if (singular) {
    throw Error(ErrorCode::SingularSolve, "LU factorization is singular");
  }
  return lu.inverse();
}

}  // namespace detail

/// (lambda I - T)^-1 by partial-pivot LU. Mathematically nonnegative; negatives
/// down to -1e-12 ||R||_inf are roundoff and clamped to zero. Anything more
/// negative is left in place.
template <typename Scalar>
Resolvent<Scalar> resolvent_T(const SplitSystem<Scalar>& sys, Scalar lambda,
                              const Tolerances& tol = {}) {
  detail::require_resolvent_point(sys, lambda, tol);
  const Index n = sys.dim();
  Resolvent<Scalar> out;
  out.matrix = detail::checked_inverse<Scalar>(
      lambda * Matrix<Scalar>::Identity(n, n) - sys.T().matrix());
  const Scalar threshold = Scalar(1e-12) * detail::inf_norm(out.matrix);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      Scalar& v = out.matrix(i, j);
      if (v < Scalar(0) && -v <= threshold) {
        out.max_clamp = std::max(out.max_clamp, -v);
        v = 0;
      }
    }
  }
  return out;
}

/// Partial Neumann sum sum_{k<terms} lambda^(-k-1) T^k. Cross-check for
/// resolvent_T only.
template <typename Scalar>
Matrix<Scalar> neumann_resolvent(const SplitSystem<Scalar>& sys, Scalar lambda,
                                 Index terms) {
  if (!(lambda > sys.rT())) {
    throw Error(ErrorCode::LambdaTooSmall, "Neumann series needs lambda > r(T)",
                -1, -1, static_cast<double>(lambda));
  }
  const Index n = sys.dim();
  Matrix<Scalar> term = Matrix<Scalar>::Identity(n, n) / lambda;
  Matrix<Scalar> sum = term;
  for (Index k = 1; k < terms; ++k) {
    term = sys.T().matrix() * term / lambda;
    sum += term;
  }
  return sum;
}

template <typename Scalar>
NonNegMatrix<Scalar> next_generation(const SplitSystem<Scalar>& sys,
                                     Scalar lambda, const Tolerances& tol = {}) {
  const auto R = resolvent_T(sys, lambda, tol);
  return NonNegMatrix<Scalar>(sys.F().matrix() * R.matrix);
}

/// R0 = r(F (I - T)^-1).
template <typename Scalar>
SpectralResult<Scalar> r0(const SplitSystem<Scalar>& sys,
                          const Tolerances& tol = {}) {
  return spectral_radius(next_generation(sys, Scalar(1), tol), tol);
}

/// r(F (lambda I - T)^-1).
template <typename Scalar>
Scalar curve_value(const SplitSystem<Scalar>& sys, Scalar lambda,
                   const Tolerances& tol = {}) {
  return spectral_radius(next_generation(sys, lambda, tol), tol).radius;
}

template <typename Scalar>
struct CurvePoint {
  Scalar lambda;
  Scalar radius;
};

template <typename Scalar>
struct CurveSample {
  std::vector<CurvePoint<Scalar>> points;
  bool monotone_ok = true;
  bool convex_ok = true;
  Scalar max_violation = 0;
};

/// Samples lambda -> r(F (lambda I - T)^-1) on an even grid and audits it for
/// being non-increasing and convex, both up to tol_eq on sampled differences.
template <typename Scalar>
CurveSample<Scalar> curve(const SplitSystem<Scalar>& sys, Scalar lambda_min,
                          Scalar lambda_max, Index samples,
                          const Tolerances& tol = {}) {
  const Scalar floor = sys.rT() + static_cast<Scalar>(tol.tol_split);
  if (!(lambda_min > floor) || !(lambda_max > lambda_min) || samples < 3) {
    throw Error(ErrorCode::BadRange,
                "need r(T) + tol_split < lambda_min < lambda_max and samples >= 3");
  }
  CurveSample<Scalar> out;
  out.points.reserve(static_cast<std::size_t>(samples));
  const Scalar step = (lambda_max - lambda_min) / Scalar(samples - 1);
  for (Index i = 0; i < samples; ++i) {
    const Scalar lambda = i + 1 == samples ? lambda_max : lambda_min + Scalar(i) * step;
    out.points.push_back({lambda, curve_value(sys, lambda, tol)});
  }

  const Scalar band = static_cast<Scalar>(tol.tol_eq);
  const auto& p = out.points;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const Scalar rise = p[i + 1].radius - p[i].radius;
    out.max_violation = std::max(out.max_violation, rise);
    if (rise > band) out.monotone_ok = false;
  }
  for (std::size_t i = 0; i + 2 < p.size(); ++i) {
    const Scalar second = p[i + 2].radius - 2 * p[i + 1].radius + p[i].radius;
    out.max_violation = std::max(out.max_violation, -second);
    if (second < -band) out.convex_ok = false;
  }
  return out;
}

enum class BisectionPath {
  Bisection,     // R0 > 1: bracketed and bisected on [1, lambda_hi]
  Subcritical,   // R0 < 1: r(A) returned directly
  NearBoundary,  // R0 within tol_eq of 1: lambda* = 1
};

inline const char* to_string(BisectionPath p) noexcept {
  switch (p) {
    case BisectionPath::Bisection: return "bisection";
    case BisectionPath::Subcritical: return "subcritical";
    case BisectionPath::NearBoundary: return "near_boundary";
  }
  return "unknown";
}

template <typename Scalar>
struct BisectionResult {
  Scalar lambda_star = 0;
  Scalar curve_at_star = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar r0 = 0;
  Scalar rA = 0;  // independent spectral_radius(A) for comparison
  BisectionPath path = BisectionPath::Bisection;
  // 1: the curve stays below 1 on (r(T), inf) and r(A) = r(T).
  // 2: the curve crosses 1, exactly at lambda = r(A).
  int curve_case = 2;
  Index evaluations = 0;
};

/// Recovers r(A) as the point where r(F (lambda I - T)^-1) = 1. The curve is
/// non-increasing, so (curve - 1) changes sign exactly once past r(T) and
/// doubling from lambda = 1 brackets the crossing when R0 > 1.
template <typename Scalar>
BisectionResult<Scalar> bisect_radius(const SplitSystem<Scalar>& sys,
                                      const Tolerances& tol = {}) {
  constexpr int kMaxDoublings = 1000;
  constexpr int kMaxHalvings = 200;
  const Scalar band = static_cast<Scalar>(tol.tol_eq);

  BisectionResult<Scalar> out;
  out.r0 = r0(sys, tol).radius;
  out.rA = spectral_radius(sys.A(), tol).radius;

  if (std::abs(out.r0 - 1) <= band) {
    out.path = BisectionPath::NearBoundary;
    out.lambda_star = 1;
    out.curve_at_star = out.r0;
    return out;
  }
  if (out.r0 < 1) {
    out.path = BisectionPath::Subcritical;
    out.lambda_star = out.rA;
    out.curve_case = out.rA - sys.rT() > band ? 2 : 1;
    if (out.lambda_star > sys.rT() + static_cast<Scalar>(tol.tol_split)) {
      out.curve_at_star = curve_value(sys, out.lambda_star, tol);
    }
    return out;
  }

  auto above_one = [&](Scalar lambda) {
    ++out.evaluations;
    return curve_value(sys, lambda, tol) >= Scalar(1);
  };

  Scalar lo = 1;
  Scalar hi = 2;
  int doublings = 0;
  while (above_one(hi)) {
    lo = hi;
    hi *= 2;
    if (++doublings > kMaxDoublings) {
      throw Error(ErrorCode::NoConvergence, "could not bracket the crossing");
    }
  }
  const Scalar width_tol = static_cast<Scalar>(tol.tol_spec);
  for (int i = 0; i < kMaxHalvings && hi - lo > width_tol * hi; ++i) {
    const Scalar mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    (above_one(mid) ? lo : hi) = mid;
  }
  out.lambda_star = lo + (hi - lo) / 2;
  out.curve_at_star = curve_value(sys, out.lambda_star, tol);
  return out;
}

/// Relative inf-norm gap between (lambda I - A)^-1 computed directly and via
/// (lambda I - T)^-1 (I - F (lambda I - T)^-1)^-1. Needs lambda > r(A), r(T).
template <typename Scalar>
Scalar resolvent_factorization_gap(const SplitSystem<Scalar>& sys, Scalar lambda,
                                   const Tolerances& tol = {}) {
  const Index n = sys.dim();
  const Matrix<Scalar> I = Matrix<Scalar>::Identity(n, n);
  const Matrix<Scalar> direct =
      detail::checked_inverse<Scalar>(lambda * I - sys.A().matrix());
  const auto RT = resolvent_T(sys, lambda, tol);
  const Matrix<Scalar> ngm = sys.F().matrix() * RT.matrix;
  const Matrix<Scalar> factored = RT.matrix * detail::checked_inverse<Scalar>(I - ngm);
  const Scalar denom = detail::inf_norm(direct);
  return detail::inf_norm<Scalar>(direct - factored) / (denom > 0 ? denom : Scalar(1));
}

}  // namespace repro
