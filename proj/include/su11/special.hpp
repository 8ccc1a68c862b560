#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "su11/error.hpp"

namespace su11::special {

/// Generalized Laguerre L_n^{(a)}(t) by the three-term recurrence in n.
inline double laguerre(std::size_t n, double a, double t) {
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + a - t;
  for (std::size_t m = 1; m < n; ++m) {
    const double mm = static_cast<double>(m);
    const double next = ((2.0 * mm + 1.0 + a - t) * cur - (mm + a) * prev) / (mm + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// L_0^{(a)}(t) ... L_{nmax}^{(a)}(t).
inline std::vector<double> laguerre_sequence(std::size_t nmax, double a, double t) {
  std::vector<double> out(nmax + 1);
  out[0] = 1.0;
  if (nmax == 0) return out;
  out[1] = 1.0 + a - t;
  for (std::size_t m = 1; m < nmax; ++m) {
    const double mm = static_cast<double>(m);
    out[m + 1] = ((2.0 * mm + 1.0 + a - t) * out[m] - (mm + a) * out[m - 1]) / (mm + 1.0);
  }
  return out;
}

/// n-point Gauss-Legendre rule on [-1, 1]; nodes by Newton iteration on P_n.
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t n) : nodes_(n), weights_(n) {
    su11::detail::require(n >= 1, "GaussLegendre: need at least one node");
    const std::size_t half = (n + 1) / 2;
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < half; ++i) {
      double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
          const double jj = static_cast<double>(j);
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * jj - 1.0) * z * p1 - (jj - 1.0) * p2) / jj;
        }
        dp = nn * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      nodes_[i] = -z;
      nodes_[n - 1 - i] = z;
      weights_[i] = weights_[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <class F>
  auto integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(a)) sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
    return sum * half;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Fixed composite rule: `panels` equal panels of an `order`-point rule.
template <class F>
auto integrate_composite(F&& f, double a, double b, std::size_t panels, std::size_t order = 20) {
  const GaussLegendre rule(order);
  const double h = (b - a) / static_cast<double>(panels);
  decltype(f(a)) sum{};
  for (std::size_t p = 0; p < panels; ++p) sum += rule.integrate(f, a + h * static_cast<double>(p), a + h * static_cast<double>(p + 1));
  return sum;
}

struct QuadratureResult {
  double value;
  double error_estimate;
  std::size_t evaluations;
};

namespace detail {

template <class F>
void adaptive_step(const F& f, const GaussLegendre& rule, double a, double b, double whole, double tol,
                   int depth, QuadratureResult& acc) {
  const double mid = 0.5 * (a + b);
  const double left = rule.integrate(f, a, mid);
  const double right = rule.integrate(f, mid, b);
  acc.evaluations += 2 * rule.size();
  const double err = std::abs(left + right - whole);
  if (err <= tol || depth <= 0) {
    acc.value += left + right;
    acc.error_estimate += err;
    return;
  }
  adaptive_step(f, rule, a, mid, left, 0.5 * tol, depth - 1, acc);
  adaptive_step(f, rule, mid, b, right, 0.5 * tol, depth - 1, acc);
}

}  // namespace detail

/// Adaptive Gauss-Legendre by interval bisection; stops when two halves agree
/// with the parent panel to `tol` (absolute).
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double tol = 1e-13, std::size_t order = 20,
                                    int max_depth = 30) {
  const GaussLegendre rule(order);
  QuadratureResult acc{0.0, 0.0, rule.size()};
  const double whole = rule.integrate(f, a, b);
  detail::adaptive_step(f, rule, a, b, whole, tol, max_depth, acc);
  return acc;
}

/// J_0(x) ... J_{nmax}(x) for x > 0 by Miller's backward recurrence,
/// normalized with J_0 + 2 sum J_{2m} = 1.
inline std::vector<double> bessel_j_sequence(double x, std::size_t nmax) {
  su11::detail::require(x > 0.0, "bessel_j_sequence: x must be positive");
  const std::size_t start =
      std::max(nmax, static_cast<std::size_t>(x)) + 40 + static_cast<std::size_t>(10.0 * std::cbrt(x));
  std::vector<double> j(start + 2, 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-300;
  double norm = 0.0;
  for (std::size_t m = start; m >= 1; --m) {
    j[m - 1] = 2.0 * static_cast<double>(m) / x * j[m] - j[m + 1];
    if (std::abs(j[m - 1]) > 1e250) {
      for (std::size_t i = m - 1; i <= start; ++i) j[i] *= 1e-250;
      norm *= 1e-250;
    }
    if ((m - 1) % 2 == 0 && m - 1 > 0) norm += 2.0 * j[m - 1];
  }
  norm += j[0];
  std::vector<double> out(nmax + 1);
  for (std::size_t m = 0; m <= nmax; ++m) out[m] = j[m] / norm;
  return out;
}

}  // namespace su11::special
