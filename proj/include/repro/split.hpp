#pragma once

#include "repro/core.hpp"
#include "repro/spectral.hpp"

#include <string>

namespace repro {

/// A = T + F with T, F nonnegative and r(T) < 1 - tol_split. r(T) is computed
/// once at construction and cached; instances only come out of make_split.
template <typename Scalar>
class SplitSystem {
 public:
  const NonNegMatrix<Scalar>& T() const noexcept { return T_; }
  const NonNegMatrix<Scalar>& F() const noexcept { return F_; }
  const NonNegMatrix<Scalar>& A() const noexcept { return A_; }
  const SpectralResult<Scalar>& transition_radius() const noexcept { return rT_; }
  Scalar rT() const noexcept { return rT_.radius; }
  Index dim() const noexcept { return A_.dim(); }

 private:
  template <typename S>
  friend SplitSystem<S> make_split(NonNegMatrix<S>, NonNegMatrix<S>,
                                   const Tolerances&);

  SplitSystem(NonNegMatrix<Scalar> T, NonNegMatrix<Scalar> F,
              NonNegMatrix<Scalar> A, SpectralResult<Scalar> rT)
      : T_(std::move(T)), F_(std::move(F)), A_(std::move(A)), rT_(rT) {}

  NonNegMatrix<Scalar> T_;
  NonNegMatrix<Scalar> F_;
  NonNegMatrix<Scalar> A_;
  SpectralResult<Scalar> rT_;
};

template <typename Scalar>
SplitSystem<Scalar> make_split(NonNegMatrix<Scalar> T, NonNegMatrix<Scalar> F,
                               const Tolerances& tol = {}) {
  tol.validate();
  if (T.dim() != F.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "T is " + std::to_string(T.dim()) + "x" + std::to_string(T.dim()) +
                    ", F is " + std::to_string(F.dim()) + "x" +
                    std::to_string(F.dim()));
  }
  const auto rT = spectral_radius(T, tol);
  if (rT.radius >= Scalar(1) - static_cast<Scalar>(tol.tol_split)) {
    throw Error(ErrorCode::SubcriticalityViolated,
                "r(T) = " + std::to_string(static_cast<double>(rT.radius)) +
                    " is not below 1",
                -1, -1, static_cast<double>(rT.radius));
  }
  NonNegMatrix<Scalar> A(T.matrix() + F.matrix());
  return SplitSystem<Scalar>(std::move(T), std::move(F), std::move(A), rT);
}

}  // namespace repro
