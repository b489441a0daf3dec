#pragma once

// Iteration of x_{t+1} = A x_t and the observed asymptotic growth factor.

#include "repro/core.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace repro {

/// states[t] is x_t rescaled to inf-norm 1; the unscaled state is
/// exp(log_norms[t]) * states[t].
template <typename Scalar>
struct Trajectory {
  std::vector<Vector<Scalar>> states;
  std::vector<Scalar> log_norms;
  Index steps = 0;
  bool absorbed = false;  // reached the zero vector; log_norms ends in -inf

  Vector<Scalar> unscaled(std::size_t t) const {
    return std::exp(log_norms[t]) * states[t];
  }
};

template <typename Scalar>
Trajectory<Scalar> iterate(const NonNegMatrix<Scalar>& A, const Vector<Scalar>& x0,
                           Index steps) {
  if (x0.size() != A.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "x0 has length " + std::to_string(x0.size()) + ", A is " +
                    std::to_string(A.dim()) + "x" + std::to_string(A.dim()));
  }
  if (!x0.allFinite() || (x0.array() < Scalar(0)).any()) {
    throw Error(ErrorCode::ValidationError, "x0 must be finite and nonnegative");
  }
  const Scalar norm0 = x0.cwiseAbs().maxCoeff();
  if (norm0 == Scalar(0)) throw Error(ErrorCode::ZeroInitialState, "x0 is zero");
  if (steps < 1) throw Error(ErrorCode::TooFewSteps, "steps must be >= 1");

  Trajectory<Scalar> traj;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.log_norms.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.push_back(x0 / norm0);
  traj.log_norms.push_back(std::log(norm0));

  for (Index t = 1; t <= steps; ++t) {
    Vector<Scalar> y = A.matrix() * traj.states.back();
    const Scalar nrm = y.maxCoeff();
    traj.steps = t;
    if (nrm == Scalar(0)) {
      traj.states.push_back(Vector<Scalar>::Zero(y.size()));
      traj.log_norms.push_back(-std::numeric_limits<Scalar>::infinity());
      traj.absorbed = true;
      break;
    }
    traj.log_norms.push_back(traj.log_norms.back() + std::log(nrm));
    traj.states.push_back(y / nrm);
  }
  return traj;
}

/// exp of the least-squares slope of log ||x_t|| over t in [burn_in, steps].
/// Absorbed trajectories grow at rate 0.
template <typename Scalar>
Scalar growth_rate(const Trajectory<Scalar>& traj, Index burn_in) {
  if (burn_in < 0 || traj.steps <= burn_in + 1) {
    throw Error(ErrorCode::TooFewSteps,
                "need steps > burn_in + 1 (steps = " + std::to_string(traj.steps) +
                    ", burn_in = " + std::to_string(burn_in) + ")");
  }
  if (traj.absorbed) return 0;
  Scalar n = 0, mean_t = 0, mean_y = 0;
  for (Index t = burn_in; t <= traj.steps; ++t) {
    n += 1;
    mean_t += Scalar(t);
    mean_y += traj.log_norms[static_cast<std::size_t>(t)];
  }
  mean_t /= n;
  mean_y /= n;
  Scalar sxy = 0, sxx = 0;
  for (Index t = burn_in; t <= traj.steps; ++t) {
    const Scalar dt = Scalar(t) - mean_t;
    sxy += dt * (traj.log_norms[static_cast<std::size_t>(t)] - mean_y);
    sxx += dt * dt;
  }
  return std::exp(sxy / sxx);
}

}  // namespace repro
