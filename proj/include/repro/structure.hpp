#pragma once

// Irreducibility, almost-interior points and Perron eigenpairs.

#include "repro/core.hpp"
#include "repro/spectral.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace repro {

namespace detail {

// Nodes reachable from node 0, following i -> j when adj(j, i) > 0.
template <typename Scalar>
std::vector<char> reachable_from_first(const Matrix<Scalar>& adj) {
  const Index n = adj.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const Index i = stack.back();
    stack.pop_back();
    for (Index j = 0; j < n; ++j) {
      if (adj(j, i) > Scalar(0) && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = 1;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace detail

/// Strong connectivity of the digraph with an edge i -> j whenever A(j, i) > 0
/// (column to row, the direction mass flows under x -> Ax). A 1x1 matrix is
/// irreducible iff its entry is positive.
template <typename Scalar>
bool is_irreducible(const NonNegMatrix<Scalar>& A) {
  const Index n = A.dim();
  if (n == 1) return A(0, 0) > Scalar(0);
  const auto all = [](const std::vector<char>& v) {
    return std::all_of(v.begin(), v.end(), [](char c) { return c != 0; });
  };
  // Node 0 reaches everything, and everything reaches node 0.
  return all(detail::reachable_from_first<Scalar>(A.matrix())) &&
         all(detail::reachable_from_first<Scalar>(A.matrix().transpose()));
}

/// Orthant interior test: every coordinate strictly above `floor`. Use
/// floor = 0 for exact inputs; computed eigenvectors get 1e-12 ||x||_inf.
template <typename Scalar>
bool is_almost_interior(const Vector<Scalar>& x, Scalar floor = 0) {
  if (x.size() == 0) throw Error(ErrorCode::EmptyVector, "empty vector");
  return (x.array() > floor).all();
}

template <typename Scalar>
struct PerronPair {
  Scalar value = 0;
  Vector<Scalar> right_vec;  // inf-norm 1, strictly positive
  Vector<Scalar> left_vec;   // inf-norm 1, strictly positive
  Index iterations = 0;
};

/// Perron root with right and left eigenvectors of an irreducible matrix, by
/// power iteration on A + I and A^T + I (both primitive).
template <typename Scalar>
PerronPair<Scalar> perron_pair(const NonNegMatrix<Scalar>& A,
                               const Tolerances& tol = {},
                               std::optional<Vector<Scalar>> start = std::nullopt) {
  if (!is_irreducible(A)) {
    throw Error(ErrorCode::NotIrreducible, "perron_pair needs an irreducible matrix");
  }
  const Index n = A.dim();
  const Scalar tol_spec = static_cast<Scalar>(tol.tol_spec);
  Vector<Scalar> x0 = start ? *start : Vector<Scalar>::Ones(n);
  if (x0.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "start vector has wrong length");
  }
  if (!is_almost_interior<Scalar>(x0)) {
    throw Error(ErrorCode::ValidationError, "start vector must be strictly positive");
  }

  const Scalar scale = detail::inf_norm(A.matrix());
  const Matrix<Scalar> scaled = A.matrix() / scale;
  const Matrix<Scalar> scaled_t = scaled.transpose();

  const Scalar target = tol_spec / 100;
  auto right = detail::shifted_power_iteration<Scalar>(scaled, x0, target / scale,
                                                       target, tol.max_iter);
  auto left = detail::shifted_power_iteration<Scalar>(
      scaled_t, Vector<Scalar>::Ones(n), target / scale, target, tol.max_iter);
  if (!right.converged || !left.converged) {
    // Roundoff floor: accept a bracket within tol_spec if the tight one stalled.
    const auto ok = [&](const detail::PowerRun<Scalar>& r) {
      const Scalar est = std::max(Scalar(0), (r.lower + r.upper) / 2 - 1);
      return (r.upper - r.lower) / 2 <= std::max(tol_spec / scale, tol_spec * est);
    };
    if (!ok(right) || !ok(left)) {
      throw Error(ErrorCode::NoConvergence, "Perron power iteration did not converge");
    }
  }

  PerronPair<Scalar> out;
  out.value = std::max(Scalar(0), (right.lower + right.upper) / 2 - 1) * scale;
  out.right_vec = right.x / right.x.maxCoeff();
  out.left_vec = left.x / left.x.maxCoeff();
  out.iterations = right.iterations + left.iterations;
  const Scalar floor = Scalar(1e-12);
  if (!is_almost_interior<Scalar>(out.right_vec, floor) ||
      !is_almost_interior<Scalar>(out.left_vec, floor)) {
    throw Error(ErrorCode::NoConvergence, "Perron vector is not strictly positive");
  }
  return out;
}

}  // namespace repro
