#pragma once

// Spectral radius of nonnegative matrices: shifted power iteration with a
// Collatz–Wielandt certificate, Gelfand's formula by repeated squaring, and a
// characteristic-polynomial oracle for small matrices.

#include "repro/core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace repro {

enum class SpectralMethod { PowerIteration, Gelfand, CharPolyOracle };

inline const char* to_string(SpectralMethod m) noexcept {
  switch (m) {
    case SpectralMethod::PowerIteration: return "power_iteration";
    case SpectralMethod::Gelfand: return "gelfand";
    case SpectralMethod::CharPolyOracle: return "char_poly_oracle";
  }
  return "unknown";
}

template <typename Scalar>
struct SpectralResult {
  Scalar radius = 0;
  SpectralMethod method = SpectralMethod::PowerIteration;
  Index iterations = 0;
  // Power iteration: ||Ax - rho x||_inf / ||x||_inf. Gelfand: half-width of
  // the final bracket.
  Scalar residual = 0;
};

namespace detail {

template <typename Scalar>
Scalar inf_norm(const Matrix<Scalar>& m) {
  return m.rows() == 0 ? Scalar(0) : m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Scalar>
struct PowerRun {
  Vector<Scalar> x;  // strictly positive, inf-norm 1
  Scalar lower = 0;  // Collatz–Wielandt bracket on r(A + I)
  Scalar upper = 0;
  Index iterations = 0;
  bool converged = false;
};

/// Power iteration on A + I from a strictly positive start vector. The shift
/// keeps every iterate strictly positive and removes the rotational part of the
/// peripheral spectrum, so min/max of (Bx)_i / x_i always bracket r(A) + 1.
/// Stops once the bracket half-width is below max(abs_tol, rel_tol * estimate),
/// or gives up early when the observed contraction rate cannot reach that
/// target within the remaining budget (typical for reducible matrices).
template <typename Scalar>
PowerRun<Scalar> shifted_power_iteration(const Matrix<Scalar>& A,
                                         Vector<Scalar> x, Scalar abs_tol,
                                         Scalar rel_tol, Index max_iter) {
  constexpr Index kWindow = 256;
  PowerRun<Scalar> run;
  x /= x.maxCoeff();
  Scalar window_width = std::numeric_limits<Scalar>::infinity();

  for (Index k = 0; k < max_iter; ++k) {
    Vector<Scalar> y = A * x + x;
    Scalar lo = std::numeric_limits<Scalar>::infinity();
    Scalar hi = 0;
    for (Index i = 0; i < x.size(); ++i) {
      if (x(i) > Scalar(0)) {
        const Scalar ratio = y(i) / x(i);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    run.lower = lo;
    run.upper = hi;
    run.iterations = k + 1;
    x = y / y.maxCoeff();

    const Scalar half_width = (hi - lo) / 2;
    const Scalar estimate = std::max(Scalar(0), (hi + lo) / 2 - 1);
    const Scalar target = std::max(abs_tol, rel_tol * estimate);
    if (half_width <= target) {
      run.converged = true;
      break;
    }
    if (k == 0) {
      window_width = half_width;
    } else if ((k + 1) % kWindow == 0) {
      // Contraction over the last window decides whether to keep going.
      const Scalar shrink = half_width / window_width;
      if (!(shrink < Scalar(1))) break;
      const Scalar needed =
          Scalar(kWindow) * std::log(target / half_width) / std::log(shrink);
      if (needed > Scalar(max_iter - k - 1)) break;
      window_width = half_width;
    }
  }
  run.x = std::move(x);
  return run;
}

template <typename Scalar>
struct GelfandRun {
  std::vector<Scalar> estimates;  // estimates[k] = ||A^(2^k)||^(1/2^k)
  Scalar lower = 0;               // best certified lower bound seen
  Scalar upper = 0;               // smallest estimate seen
  bool converged = false;
};

/// Repeated squaring with per-step normalisation; the log of the discarded
/// scale is carried so no power ever overflows. The min and max row sums of
/// A^m bracket r(A)^m (Collatz–Wielandt with x = 1). When `abs_tol` > 0 the
/// sequence stops once that bracket, tightened by `lower_bound`, has
/// half-width below max(abs_tol, rel_tol * upper).
template <typename Scalar>
GelfandRun<Scalar> gelfand_sequence(const Matrix<Scalar>& A, Index k_max,
                                    Scalar abs_tol, Scalar rel_tol,
                                    Scalar lower_bound) {
  GelfandRun<Scalar> run;
  const Scalar norm0 = inf_norm(A);
  if (norm0 == Scalar(0)) {
    run.estimates.push_back(0);
    run.converged = true;
    return run;
  }
  Matrix<Scalar> m = A / norm0;
  Scalar log_scale = std::log(norm0);  // A^(2^k) = exp(log_scale) * m
  Scalar power = 1;                    // 2^k
  run.lower = lower_bound;
  run.upper = norm0;

  const auto record = [&](Scalar est) {
    run.estimates.push_back(est);
    run.upper = std::min(run.upper, est);
    const Scalar min_row = m.rowwise().sum().minCoeff();
    if (min_row > Scalar(0)) {
      run.lower = std::max(run.lower, std::exp((log_scale + std::log(min_row)) / power));
    }
    const Scalar target = std::max(abs_tol, rel_tol * run.upper);
    return abs_tol > Scalar(0) && (run.upper - run.lower) / 2 <= target;
  };

  if (record(norm0)) {
    run.converged = true;
    return run;
  }
  for (Index k = 1; k <= k_max; ++k) {
    Matrix<Scalar> sq = m * m;
    const Scalar nrm = inf_norm(sq);
    power *= 2;
    if (nrm == Scalar(0)) {
      // A is nilpotent: every later power vanishes.
      run.estimates.push_back(0);
      run.lower = run.upper = 0;
      run.converged = true;
      return run;
    }
    log_scale = 2 * log_scale + std::log(nrm);
    m = sq / nrm;
    if (record(std::exp(log_scale / power))) {
      run.converged = true;
      return run;
    }
  }
  return run;
}

}  // namespace detail

/// ||A^(2^k)||_inf^(1/2^k) for k = 0..k_max (fewer if A is nilpotent, in
/// which case the last entry is 0). Every entry bounds r(A) from above.
template <typename Scalar>
std::vector<Scalar> gelfand_estimates(const NonNegMatrix<Scalar>& A,
                                      Index k_max) {
  return detail::gelfand_sequence<Scalar>(A.matrix(), std::max<Index>(k_max, 0),
                                          0, 0, 0)
      .estimates;
}

/// Last Gelfand estimate ||A^(2^k_max)||^(1/2^k_max); residual is the
/// half-width of the row-sum bracket at that power.
template <typename Scalar>
SpectralResult<Scalar> gelfand_estimate(const NonNegMatrix<Scalar>& A,
                                        Index k_max) {
  const auto run = detail::gelfand_sequence<Scalar>(
      A.matrix(), std::max<Index>(k_max, 1), 0, 0, 0);
  SpectralResult<Scalar> r;
  r.method = SpectralMethod::Gelfand;
  r.radius = run.estimates.back();
  r.iterations = static_cast<Index>(run.estimates.size()) - 1;
  r.residual = std::max(Scalar(0), (run.upper - run.lower) / 2);
  return r;
}

namespace detail {

/// Strongly connected components of the digraph with an edge j -> i whenever
/// A(i, j) > 0. Iterative Tarjan; components come out in reverse topological
/// order, each listing its nodes in ascending order.
template <typename Scalar>
std::vector<std::vector<Index>> strong_components(const Matrix<Scalar>& A) {
  const std::size_t n = static_cast<std::size_t>(A.rows());
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> order(n, kUnvisited), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> frames;  // (node, next candidate)
  std::vector<std::vector<Index>> comps;
  std::size_t counter = 0;

  const auto open = [&](std::size_t v) {
    order[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    frames.emplace_back(v, 0);
  };

  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    open(root);
    while (!frames.empty()) {
      const std::size_t v = frames.back().first;
      const std::size_t w = frames.back().second++;
      if (w < n) {
        if (!(A(static_cast<Index>(w), static_cast<Index>(v)) > Scalar(0))) continue;
        if (order[w] == kUnvisited) {
          open(w);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[v]);
      }
      if (low[v] != order[v]) continue;
      std::vector<Index> comp;
      std::size_t x = 0;
      do {
        x = stack.back();
        stack.pop_back();
        on_stack[x] = 0;
        comp.push_back(static_cast<Index>(x));
      } while (x != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  }
  return comps;
}

/// Power iteration on M/||M|| + I from the all-ones vector; Gelfand's formula
/// when the Collatz–Wielandt bracket stalls.
template <typename Scalar>
SpectralResult<Scalar> certified_radius(const Matrix<Scalar>& M, const Tolerances& tol) {
  constexpr Index kGelfandSteps = 64;
  const Scalar tol_spec = static_cast<Scalar>(tol.tol_spec);
  SpectralResult<Scalar> out;

  const Scalar scale = detail::inf_norm(M);
  if (scale == Scalar(0)) return out;
  const Matrix<Scalar> scaled = M / scale;
  const Scalar floor = std::min(tol_spec / scale,
                                64 * std::numeric_limits<Scalar>::epsilon());

  auto run = detail::shifted_power_iteration<Scalar>(
      scaled, Vector<Scalar>::Ones(M.rows()), floor, tol_spec, tol.max_iter);
  if (run.converged) {
    out.radius = std::max(Scalar(0), (run.lower + run.upper) / 2 - 1) * scale;
    out.method = SpectralMethod::PowerIteration;
    out.iterations = run.iterations;
    out.residual = (M * run.x - out.radius * run.x).cwiseAbs().maxCoeff();
    return out;
  }

  const Scalar lower = std::max(Scalar(0), run.lower - 1);
  auto g = detail::gelfand_sequence<Scalar>(scaled, kGelfandSteps, floor,
                                            tol_spec, lower);
  if (!g.converged) {
    throw Error(ErrorCode::NoConvergence,
                "power iteration and Gelfand bracket both failed to converge");
  }
  out.radius = (g.upper + g.lower) / 2 * scale;
  out.method = SpectralMethod::Gelfand;
  out.iterations = run.iterations + static_cast<Index>(g.estimates.size()) - 1;
  out.residual = (g.upper - g.lower) / 2 * scale;
  return out;
}

}  // namespace detail

/// r(A) to within tol_spec * r(A), or a roundoff floor of 64 eps ||A||_inf
/// capped at tol_spec. A reducible A is split into
/// its strongly connected components: r(A) is the largest radius among the
/// diagonal blocks, a 1x1 block contributing its entry.
template <typename Scalar>
SpectralResult<Scalar> spectral_radius(const NonNegMatrix<Scalar>& A,
                                       const Tolerances& tol = {}) {
  const Matrix<Scalar>& M = A.matrix();
  const auto comps = detail::strong_components(M);
  if (comps.size() == 1) return detail::certified_radius(M, tol);

  SpectralResult<Scalar> out;
  Index iterations = 0;
  for (const auto& comp : comps) {
    SpectralResult<Scalar> block;
    if (comp.size() == 1) {
      block.radius = M(comp[0], comp[0]);
    } else {
      block = detail::certified_radius<Scalar>(M(comp, comp), tol);
    }
    iterations += block.iterations;
    if (block.radius > out.radius) out = block;
  }
  out.iterations = iterations;
  return out;
}

/// Monic characteristic polynomial det(zI - A) by Faddeev–LeVerrier.
/// Returns coefficients c[0..n] with c[n] = 1, lowest degree first.
template <typename Scalar>
std::vector<Scalar> characteristic_polynomial(const Matrix<Scalar>& A) {
  const Index n = A.rows();
  std::vector<Scalar> c(static_cast<std::size_t>(n) + 1, Scalar(0));
  c[static_cast<std::size_t>(n)] = 1;
  Matrix<Scalar> M = Matrix<Scalar>::Zero(n, n);
  for (Index k = 1; k <= n; ++k) {
    M = A * M;
    M.diagonal().array() += c[static_cast<std::size_t>(n - k + 1)];
    const Matrix<Scalar> AM = A * M;
    c[static_cast<std::size_t>(n - k)] = -AM.trace() / static_cast<Scalar>(k);
  }
  return c;
}

/// All eigenvalues of a small matrix (n <= 12) as roots of the characteristic
/// polynomial, found by Durand–Kerner iteration. Test oracle only: independent
/// of the power iteration path.
template <typename Scalar>
std::vector<std::complex<Scalar>> eig_oracle(const NonNegMatrix<Scalar>& A) {
  using Wide = long double;
  using Complex = std::complex<Wide>;
  constexpr Index kMaxDim = 12;
  constexpr int kMaxSweeps = 20000;
  constexpr Wide kResidual = 1e-12L;

  const Index n = A.dim();
  if (n > kMaxDim) {
    throw Error(ErrorCode::DimensionTooLarge,
                "eig_oracle supports n <= 12, got " + std::to_string(n));
  }
  const Matrix<Wide> M = A.matrix().template cast<Wide>();
  const Wide scale = detail::inf_norm(M);
  if (scale == 0) return std::vector<std::complex<Scalar>>(static_cast<std::size_t>(n));

  // Roots of the scaled matrix lie in the closed unit disc.
  const auto c = characteristic_polynomial<Wide>(M / scale);
  Wide cauchy = 0;
  for (Index k = 0; k < n; ++k) cauchy = std::max(cauchy, std::abs(c[static_cast<std::size_t>(k)]));
  cauchy += 1;

  auto eval = [&](const Complex& z, Wide& magnitude) {
    Complex p = 1;
    Wide mag = 1;
    for (Index k = n - 1; k >= 0; --k) {
      p = p * z + c[static_cast<std::size_t>(k)];
      mag = mag * std::abs(z) + std::abs(c[static_cast<std::size_t>(k)]);
    }
    magnitude = mag;
    return p;
  };

  std::vector<Complex> z(static_cast<std::size_t>(n));
  const Wide two_pi = 2 * std::numbers::pi_v<Wide>;
  for (Index j = 0; j < n; ++j) {
    z[static_cast<std::size_t>(j)] =
        std::polar(cauchy, two_pi * static_cast<Wide>(j) / static_cast<Wide>(n) + Wide(0.4));
  }

  // Once the residual is acceptable, polish for at most kPolishSweeps more.
  constexpr int kPolishSweeps = 200;
  const Wide floor = 64 * std::numeric_limits<Wide>::epsilon();
  bool done = false;
  int polish = 0;
  for (int sweep = 0; sweep < kMaxSweeps && polish < kPolishSweeps; ++sweep) {
    Wide worst = 0;
    for (Index j = 0; j < n; ++j) {
      auto& zj = z[static_cast<std::size_t>(j)];
      Wide mag = 0;
      const Complex p = eval(zj, mag);
      Complex denom = 1;
      for (Index k = 0; k < n; ++k) {
        if (k != j) denom *= zj - z[static_cast<std::size_t>(k)];
      }
      if (std::abs(denom) > 0) zj -= p / denom;
      worst = std::max(worst, std::abs(p) / mag);
    }
    done = done || worst <= kResidual;
    if (done && (++polish, worst <= floor)) break;
  }
  if (!done) {
    throw Error(ErrorCode::RootFindingStalled,
                "Durand-Kerner residual did not reach 1e-12");
  }

  std::vector<std::complex<Scalar>> roots;
  roots.reserve(z.size());
  for (const auto& r : z) {
    roots.emplace_back(static_cast<Scalar>(r.real() * scale),
                       static_cast<Scalar>(r.imag() * scale));
  }
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    return std::abs(a) > std::abs(b);
  });
  return roots;
}

/// max |lambda| over eig_oracle(A).
template <typename Scalar>
SpectralResult<Scalar> oracle_radius(const NonNegMatrix<Scalar>& A) {
  const auto roots = eig_oracle(A);
  SpectralResult<Scalar> r;
  r.method = SpectralMethod::CharPolyOracle;
  for (const auto& z : roots) r.radius = std::max(r.radius, std::abs(z));
  return r;
}

}  // namespace repro
