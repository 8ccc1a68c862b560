#pragma once

// Truncated discrete-series representation of su(1,1):
//   J+|k,n> = sqrt((n+1)(2k+n)) |k,n+1>
//   J-|k,n> = sqrt(n(2k+n-1))   |k,n-1>
//   J0|k,n> = (n+k)             |k,n>
// Operators act matrix-free on coefficient vectors; nothing is stored densely.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "su11/error.hpp"

namespace su11 {

using complex = std::complex<double>;

class RepLabel {
 public:
  RepLabel(double k, std::size_t dim) : k_(k), dim_(dim) {
    detail::require(std::isfinite(k) && k > 0.0, "RepLabel: Bargmann index k must be > 0");
    detail::require(dim >= 2, "RepLabel: dim must be >= 2");
  }

  double k() const { return k_; }
  std::size_t dim() const { return dim_; }
  double casimir() const { return k_ * (k_ - 1.0); }

  RepLabel resized(std::size_t dim) const { return RepLabel(k_, dim); }

  bool same_space(const RepLabel& other) const {
    return dim_ == other.dim_ && std::abs(k_ - other.k_) <= 1e-12 * std::max(1.0, k_);
  }

 private:
  double k_;
  std::size_t dim_;
};

/// J+ matrix element <n+1|J+|n>, equal to <n|J-|n+1>.
inline double raising_element(double k, std::size_t n) {
  const double nn = static_cast<double>(n);
  return std::sqrt((nn + 1.0) * (2.0 * k + nn));
}

/// Coefficients C_n on |k,n>, n < rep.dim(), plus a bound on the squared norm
/// of the part of the state that lives beyond the truncation.
class StateVector {
 public:
  explicit StateVector(RepLabel rep) : rep_(rep), coeffs_(rep.dim(), complex{}) {}

  StateVector(RepLabel rep, std::vector<complex> coeffs, double tail_bound = 0.0)
      : rep_(rep), coeffs_(std::move(coeffs)), tail_bound_(tail_bound) {
    detail::require(coeffs_.size() == rep_.dim(), "StateVector: coefficient count must equal rep.dim()");
    detail::require(tail_bound_ >= 0.0, "StateVector: tail_bound must be nonnegative");
  }

  static StateVector basis(RepLabel rep, std::size_t n) {
    detail::require(n < rep.dim(), "StateVector::basis: index outside truncation");
    std::vector<complex> c(rep.dim(), complex{});
    c[n] = 1.0;
    return StateVector(rep, std::move(c));
  }

  const RepLabel& rep() const { return rep_; }
  std::size_t dim() const { return coeffs_.size(); }
  std::span<const complex> coeffs() const { return coeffs_; }
  complex operator[](std::size_t n) const { return coeffs_[n]; }
  double tail_bound() const { return tail_bound_; }

  double norm2() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  bool is_normalized() const { return std::abs(norm2() - 1.0) <= 10.0 * tail_bound_ + 1e-12; }

  /// Scales to unit norm; tail_bound is rescaled with the state.
  StateVector normalized() const {
    const double n2 = norm2();
    if (!(n2 > 0.0)) throw NumericError("StateVector::normalized: zero vector");
    return scaled(1.0 / std::sqrt(n2));
  }

  StateVector scaled(complex factor) const {
    std::vector<complex> c(coeffs_);
    for (auto& v : c) v *= factor;
    return StateVector(rep_, std::move(c), tail_bound_ * std::norm(factor));
  }

  /// Index of the first coefficient with |C_n| > threshold (dim() if none).
  std::size_t first_nonzero(double threshold = 0.0) const {
    for (std::size_t n = 0; n < coeffs_.size(); ++n)
      if (std::abs(coeffs_[n]) > threshold) return n;
    return coeffs_.size();
  }

  /// Global phase chosen so that the first nonzero coefficient is real positive.
  StateVector with_canonical_phase() const {
    const std::size_t n = first_nonzero(0.0);
    if (n == coeffs_.size()) return *this;
    const complex c = coeffs_[n];
    return scaled(std::conj(c) / std::abs(c));
  }

  /// Same state with the truncation changed; extra components are zero,
  /// dropped components move into tail_bound.
  StateVector resized(std::size_t dim) const {
    std::vector<complex> c(dim, complex{});
    double dropped = 0.0;
    for (std::size_t n = 0; n < coeffs_.size(); ++n) {
      if (n < dim)
        c[n] = coeffs_[n];
      else
        dropped += std::norm(coeffs_[n]);
    }
    return StateVector(rep_.resized(dim), std::move(c), tail_bound_ + dropped);
  }

  friend StateVector operator+(const StateVector& a, const StateVector& b) {
    detail::require(a.rep_.same_space(b.rep_), "StateVector: representation mismatch");
    std::vector<complex> c(a.coeffs_);
    for (std::size_t n = 0; n < c.size(); ++n) c[n] += b.coeffs_[n];
    const double t = std::sqrt(a.tail_bound_) + std::sqrt(b.tail_bound_);
    return StateVector(a.rep_, std::move(c), t * t);
  }
  friend StateVector operator-(const StateVector& a, const StateVector& b) { return a + b.scaled(-1.0); }
  friend StateVector operator*(complex s, const StateVector& v) { return v.scaled(s); }

 private:
  RepLabel rep_;
  std::vector<complex> coeffs_;
  double tail_bound_ = 0.0;
};

inline StateVector apply_jplus(const StateVector& state) {
  const std::size_t dim = state.dim();
  const double k = state.rep().k();
  std::vector<complex> out(dim, complex{});
  for (std::size_t n = 0; n + 1 < dim; ++n) out[n + 1] = raising_element(k, n) * state[n];
  const double top = static_cast<double>(dim);
  const double lost = std::norm(state[dim - 1]) * top * (2.0 * k + top - 1.0);
  return StateVector(state.rep(), std::move(out), state.tail_bound() + lost);
}

inline StateVector apply_jminus(const StateVector& state) {
  const std::size_t dim = state.dim();
  const double k = state.rep().k();
  std::vector<complex> out(dim, complex{});
  for (std::size_t n = 1; n < dim; ++n) out[n - 1] = raising_element(k, n - 1) * state[n];
  return StateVector(state.rep(), std::move(out), state.tail_bound());
}

inline StateVector apply_j0(const StateVector& state) {
  const double k = state.rep().k();
  std::vector<complex> out(state.coeffs().begin(), state.coeffs().end());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] *= static_cast<double>(n) + k;
  return StateVector(state.rep(), std::move(out), state.tail_bound());
}

inline complex inner_product(const StateVector& a, const StateVector& b) {
  detail::require(a.rep().same_space(b.rep()), "inner_product: representation mismatch");
  complex s{};
  for (std::size_t n = 0; n < a.dim(); ++n) s += std::conj(a[n]) * b[n];
  return s;
}

/// max_n |a_n - e^{i phi} b_n| with phi chosen so that the two vectors agree
/// in phase on the largest-magnitude coefficient of a.
inline double phase_aligned_distance(std::span<const complex> a, std::span<const complex> b) {
  const std::size_t len = std::min(a.size(), b.size());
  std::size_t pivot = 0;
  for (std::size_t n = 0; n < len; ++n)
    if (std::abs(a[n]) > std::abs(a[pivot])) pivot = n;
  complex phase = 1.0;
  if (std::abs(b[pivot]) > 0.0) {
    phase = a[pivot] / b[pivot];
    phase /= std::abs(phase);
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < len; ++n) worst = std::max(worst, std::abs(a[n] - phase * b[n]));
  for (std::size_t n = len; n < a.size(); ++n) worst = std::max(worst, std::abs(a[n]));
  for (std::size_t n = len; n < b.size(); ++n) worst = std::max(worst, std::abs(b[n]));
  return worst;
}

inline double phase_aligned_distance(const StateVector& a, const StateVector& b) {
  return phase_aligned_distance(a.coeffs(), b.coeffs());
}

// ---------------------------------------------------------------------------
// Factorial bracket [[f(n)]]! = f(n) f(n-1) ... f(1),  [[f(0)]]! = 1.

template <class T>
struct LogBracket {
  double log_magnitude;  ///< log |[[f(n)]]!|, -inf when a factor vanishes
  T phase;               ///< unit-modulus sign or phase
};

template <class F>
auto log_bracket_factorial(F&& f, std::size_t n) {
  using T = std::decay_t<decltype(f(std::size_t{1}))>;
  double log_mag = 0.0;
  T phase = T(1);
  for (std::size_t m = 1; m <= n; ++m) {
    const T v = f(m);
    const double a = std::abs(v);
    if (a == 0.0) return LogBracket<T>{-std::numeric_limits<double>::infinity(), T(0)};
    log_mag += std::log(a);
    phase *= v / a;
  }
  return LogBracket<T>{log_mag, phase};
}

template <class F>
auto bracket_factorial(F&& f, std::size_t n) {
  using T = std::decay_t<decltype(f(std::size_t{1}))>;
  T product = T(1);
  bool finite = true;
  for (std::size_t m = 1; m <= n; ++m) {
    product *= f(m);
    if (!std::isfinite(std::abs(product))) {
      finite = false;
      break;
    }
  }
  if (finite) return product;
  const auto lb = log_bracket_factorial(f, n);
  if (lb.log_magnitude > std::log(std::numeric_limits<double>::max()))
    throw NumericError("bracket_factorial: value exceeds double range even in log domain");
  return static_cast<T>(lb.phase * std::exp(lb.log_magnitude));
}

/// log [[A+n]]! = log Gamma(A+n+1) - log Gamma(A+1), for A > -1.
inline double log_rising_bracket(double A, std::size_t n) {
  detail::require(A > -1.0, "log_rising_bracket: requires A > -1");
  if (n == 0) return 0.0;
  if (n <= 30) {
    double s = 0.0;
    for (std::size_t m = 1; m <= n; ++m) s += std::log(A + static_cast<double>(m));
    return s;
  }
  return std::lgamma(A + static_cast<double>(n) + 1.0) - std::lgamma(A + 1.0);
}

/// [[A+n]]! = Gamma(A+n+1)/Gamma(A+1); log-gamma route for n > 30.
inline double rising_bracket(double A, std::size_t n) {
  if (n <= 30 || A <= -1.0)
    return bracket_factorial([A](std::size_t m) { return A + static_cast<double>(m); }, n);
  const double lg = log_rising_bracket(A, n);
  if (lg > std::log(std::numeric_limits<double>::max()))
    throw NumericError("rising_bracket: overflow");
  return std::exp(lg);
}

/// log of n! * [[2k+n-1]]!, the squared norm of (J+)^n |k,0>.
inline double log_ladder_norm2(double k, std::size_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0) + std::lgamma(2.0 * k + static_cast<double>(n)) -
         std::lgamma(2.0 * k);
}

}  // namespace su11
