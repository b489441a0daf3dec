#pragma once

// Validated nonnegative matrices, tolerances and the library error type.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace repro {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

enum class ErrorCode {
  NotSquare,
  NegativeEntry,
  NonFiniteEntry,
  DimensionMismatch,
  SubcriticalityViolated,
  InvalidTolerances,
  NoConvergence,
  DimensionTooLarge,
  RootFindingStalled,
  LambdaTooSmall,
  SingularSolve,
  BadRange,
  TheoremViolation,
  AmbiguousBoundary,
  R0Zero,
  NotIrreducible,
  EmptyVector,
  ZeroInitialState,
  TooFewSteps,
  DivergentSeries,
  InvalidModel,
  DegenerateDraw,
  ParseError,
  ValidationError,
};

inline const char* to_string(ErrorCode code) noexcept;

/// Every failure in the library is reported through this type. `row()`/`col()`
/// locate offending entries (or -1), `value()` carries the quantity that
/// tripped the check where there is one (e.g. r(T) for SubcriticalityViolated).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, Index row = -1,
        Index col = -1, double value = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        row_(row),
        col_(col),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  Index row() const noexcept { return row_; }
  Index col() const noexcept { return col_; }
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  Index row_;
  Index col_;
  double value_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SubcriticalityViolated: return "SubcriticalityViolated";
    case ErrorCode::InvalidTolerances: return "InvalidTolerances";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::RootFindingStalled: return "RootFindingStalled";
    case ErrorCode::LambdaTooSmall: return "LambdaTooSmall";
    case ErrorCode::SingularSolve: return "SingularSolve";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::TheoremViolation: return "TheoremViolation";
    case ErrorCode::AmbiguousBoundary: return "AmbiguousBoundary";
    case ErrorCode::R0Zero: return "R0Zero";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::EmptyVector: return "EmptyVector";
    case ErrorCode::ZeroInitialState: return "ZeroInitialState";
    case ErrorCode::TooFewSteps: return "TooFewSteps";
    case ErrorCode::DivergentSeries: return "DivergentSeries";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::DegenerateDraw: return "DegenerateDraw";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

struct Tolerances {
  double tol_eq = 1e-9;     // band around 1 treated as equality
  double tol_spec = 1e-10;  // spectral radius accuracy target
  double tol_split = 1e-8;  // required margin in r(T) < 1
  Index max_iter = 100000;

  void validate() const {
    if (!(tol_eq > 0) || !(tol_spec > 0) || !(tol_split > 0) || max_iter < 1) {
      throw Error(ErrorCode::InvalidTolerances,
                  "tolerances must be positive and max_iter >= 1");
    }
  }
};

/// Square matrix with finite, nonnegative entries, i.e. an operator that maps
/// the nonnegative orthant into itself. Immutable once built.
template <typename Scalar>
class NonNegMatrix {
 public:
  using MatrixType = Matrix<Scalar>;

  NonNegMatrix() = default;

  /// Validating constructor; throws NotSquare, NonFiniteEntry or NegativeEntry.
  explicit NonNegMatrix(MatrixType m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
      throw Error(ErrorCode::NotSquare,
                  "matrix is " + std::to_string(m_.rows()) + "x" +
                      std::to_string(m_.cols()));
    }
    // Report the first offending entry in row-major order.
    for (Index i = 0; i < m_.rows(); ++i) {
      for (Index j = 0; j < m_.cols(); ++j) {
        const Scalar v = m_(i, j);
        if (!std::isfinite(static_cast<double>(v))) {
          throw Error(ErrorCode::NonFiniteEntry,
                      "entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") is not finite",
                      i, j);
        }
        if (v < Scalar(0)) {
          throw Error(ErrorCode::NegativeEntry,
                      "entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") is negative",
                      i, j, static_cast<double>(v));
        }
      }
    }
  }

  static NonNegMatrix zero(Index n) {
    return NonNegMatrix(MatrixType::Zero(n, n));
  }
  static NonNegMatrix identity(Index n) {
    return NonNegMatrix(MatrixType::Identity(n, n));
  }

  const MatrixType& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }
  bool is_zero() const { return (m_.array() == Scalar(0)).all(); }

 private:
  MatrixType m_;
};

template <typename Derived>
NonNegMatrix<typename Derived::Scalar> validate_matrix(
    const Eigen::MatrixBase<Derived>& raw) {
  return NonNegMatrix<typename Derived::Scalar>(raw.eval());
}

/// Row-major nested input, as it arrives from model files. Ragged or
/// non-square input is NotSquare.
template <typename Scalar = double>
NonNegMatrix<Scalar> validate_matrix(
    const std::vector<std::vector<Scalar>>& rows) {
  const auto n = static_cast<Index>(rows.size());
  Matrix<Scalar> m(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Index>(row.size()) != n) {
      throw Error(ErrorCode::NotSquare,
                  "row " + std::to_string(i) + " has " +
                      std::to_string(row.size()) + " entries, expected " +
                      std::to_string(n));
    }
    for (Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return NonNegMatrix<Scalar>(std::move(m));
}

/// B <= A in the orthant order (A - B nonnegative). Exact comparison.
template <typename Scalar>
bool entrywise_leq(const NonNegMatrix<Scalar>& B, const NonNegMatrix<Scalar>& A) {
  if (A.dim() != B.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "entrywise_leq on " +
                                                  std::to_string(B.dim()) +
                                                  " vs " + std::to_string(A.dim()));
  }
  return (B.matrix().array() <= A.matrix().array()).all();
}

template <typename Scalar>
NonNegMatrix<Scalar> operator+(const NonNegMatrix<Scalar>& a,
                               const NonNegMatrix<Scalar>& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "sum of differently sized matrices");
  }
  return NonNegMatrix<Scalar>(a.matrix() + b.matrix());
}

template <typename Scalar>
NonNegMatrix<Scalar> operator*(Scalar alpha, const NonNegMatrix<Scalar>& a) {
  return NonNegMatrix<Scalar>(alpha * a.matrix());
}

}  // namespace repro
