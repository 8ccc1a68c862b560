#pragma once

// Convergence of operator power series on the discrete series.
//
// The middle-term subseries of D(alpha) = sum (alpha J+ - conj(alpha) J-)^N / N! in <k,n|.|k,n>
// has coefficients
//   d_m = (n+m)! (n+2k+m-1)! / ((2m)! n! (n+2k-1)!),   d_m / d_{m+1} -> 4,
// so the series in r^2 diverges for r > 2. For exponentials of higher powers the analogous
// d_m = (nm)!/(2m)! has ratio -> 0 and the radius collapses.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "su11/algebra.hpp"
#include "su11/displacement.hpp"
#include "su11/error.hpp"
#include "su11/squeezed.hpp"

namespace su11 {

struct SeriesReport {
  std::string label;
  std::vector<double> log_coefficients;  ///< log d_m, m = 0..m_max
  std::vector<double> ratios;            ///< d_m / d_{m+1}, m = 0..m_max-1
  double radius = std::numeric_limits<double>::quiet_NaN();
  double radius_error = std::numeric_limits<double>::quiet_NaN();
  std::size_t m_max = 0;
};

/// Report from log d_m; ratios are exp(log d_m - log d_{m+1}).
inline SeriesReport series_from_log_coefficients(std::vector<double> log_d, std::string label = "custom") {
  detail::require(log_d.size() >= 2, "series_from_log_coefficients: need at least two coefficients");
  SeriesReport rep;
  rep.label = std::move(label);
  rep.m_max = log_d.size() - 1;
  rep.ratios.resize(rep.m_max);
  for (std::size_t m = 0; m < rep.m_max; ++m) rep.ratios[m] = std::exp(log_d[m] - log_d[m + 1]);
  rep.log_coefficients = std::move(log_d);
  return rep;
}

inline SeriesReport subseries_coefficients(double k, std::size_t n, std::size_t m_max) {
  detail::require(k > 0.0, "subseries_coefficients: k must be > 0");
  detail::require(m_max >= 10, "subseries_coefficients: m_max must be >= 10");
  const double nn = static_cast<double>(n);
  std::vector<double> log_d(m_max + 1);
  for (std::size_t m = 0; m <= m_max; ++m) {
    const double mm = static_cast<double>(m);
    log_d[m] = std::lgamma(nn + mm + 1.0) + std::lgamma(nn + 2.0 * k + mm) - std::lgamma(2.0 * mm + 1.0) -
               std::lgamma(nn + 1.0) - std::lgamma(nn + 2.0 * k);
  }
  SeriesReport rep = series_from_log_coefficients(std::move(log_d), "displacement");
  // The closed-form ratio is exact; prefer it to differences of large logs.
  for (std::size_t m = 0; m < m_max; ++m) {
    const double mm = static_cast<double>(m);
    rep.ratios[m] = (2.0 * mm + 1.0) * (2.0 * mm + 2.0) / ((nn + mm + 1.0) * (nn + 2.0 * k + mm));
  }
  return rep;
}

/// d_m = (nm)!/(2m)!, the vacuum middle term of exp of a power-n generator.
inline SeriesReport higher_power_subseries(std::size_t power, std::size_t m_max) {
  detail::require(power >= 2, "higher_power_subseries: power must be >= 2");
  detail::require(m_max >= 10, "higher_power_subseries: m_max must be >= 10");
  const double p = static_cast<double>(power);
  std::vector<double> log_d(m_max + 1);
  for (std::size_t m = 0; m <= m_max; ++m) {
    const double mm = static_cast<double>(m);
    log_d[m] = std::lgamma(p * mm + 1.0) - std::lgamma(2.0 * mm + 1.0);
  }
  SeriesReport rep = series_from_log_coefficients(std::move(log_d), "power-" + std::to_string(power));
  for (std::size_t m = 0; m < m_max; ++m) {
    // d_m/d_{m+1} = (2m+1)(2m+2) / prod_{i=1}^{power} (power*m + i)
    const double mm = static_cast<double>(m);
    double r = (2.0 * mm + 1.0) * (2.0 * mm + 2.0);
    for (std::size_t i = 1; i <= power; ++i) r /= p * mm + static_cast<double>(i);
    rep.ratios[m] = r;
  }
  return rep;
}

/// Second-order Richardson on R_m = d_m/d_{m+1}, assuming R_m = R + a/m + b/m^2:
///   R ~ ((m+2)^2 R_{m+2} - 2(m+1)^2 R_{m+1} + m^2 R_m) / 2,
/// then rho = sqrt(max(R, 0)). Fills radius and radius_error (change from one index earlier).
/// Throws NumericError if the last tenth of the ratio sequence is not monotone.
inline double radius_estimate(SeriesReport& report) {
  const auto& R = report.ratios;
  detail::require(R.size() >= 100, "radius_estimate: need m_max >= 100");
  const std::size_t tail_start = R.size() - std::max<std::size_t>(R.size() / 10, 4);
  int direction = 0;
  for (std::size_t m = tail_start; m + 1 < R.size(); ++m) {
    const double d = R[m + 1] - R[m];
    if (std::abs(d) <= 1e-10 * std::max(std::abs(R[m]), 1e-300)) continue;
    const int s = d > 0.0 ? 1 : -1;
    if (direction == 0) direction = s;
    if (s != direction)
      throw NumericError("radius_estimate: ratio sequence is not monotone in the tail (m = " + std::to_string(m) + ")");
  }
  auto richardson = [&](std::size_t m) {
    const double a = static_cast<double>(m), b = a + 1.0, c = a + 2.0;
    return (c * c * R[m + 2] - 2.0 * b * b * R[m + 1] + a * a * R[m]) / 2.0;
  };
  const std::size_t last = R.size() - 3;
  const double r_now = std::sqrt(std::max(0.0, richardson(last)));
  const double r_prev = std::sqrt(std::max(0.0, richardson(last - 1)));
  report.radius = r_now;
  report.radius_error = std::abs(r_now - r_prev);
  return r_now;
}

inline double radius_estimate(const SeriesReport& report) {
  SeriesReport copy = report;
  return radius_estimate(copy);
}

/// sqrt(R_m) for every m: the naive radius sequence, useful to show a collapsing radius.
inline std::vector<double> naive_radius_sequence(const SeriesReport& report) {
  std::vector<double> out(report.ratios.size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = std::sqrt(report.ratios[m]);
  return out;
}

// ---------------------------------------------------------------------------

/// Dense truncated generator alpha J+ - conj(alpha) J-.
inline Eigen::MatrixXcd displacement_generator(const RepLabel& rep, complex alpha) {
  const auto dim = static_cast<Eigen::Index>(rep.dim());
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index n = 0; n + 1 < dim; ++n) {
    const double e = raising_element(rep.k(), static_cast<std::size_t>(n));
    G(n + 1, n) = alpha * e;
    G(n, n + 1) = -std::conj(alpha) * e;
  }
  return G;
}

struct BchCheck {
  double max_error;      ///< over components n <= dim/2
  double edge_mass;      ///< |<dim-1|D(alpha)|0>|^2 of the product route
};

/// Dense expm of the truncated generator against the normal-ordered product
/// exp(zeta J+) exp(-2 ln(cosh r) J0) exp(-conj(zeta) J-), both applied to |k,0>.
inline BchCheck bch_identity_check(complex alpha, const RepLabel& rep) {
  detail::require(std::abs(alpha) <= 1.5, "bch_identity_check: requires |alpha| <= 1.5");
  std::vector<complex> e0(rep.dim(), complex{});
  e0[0] = 1.0;
  const std::vector<complex> product = displace_disentangled(rep.k(), alpha, e0);
  const Eigen::MatrixXcd U = displacement_generator(rep, alpha).exp();
  BchCheck out{0.0, std::norm(product.back())};
  if (out.edge_mass > 1e-24)
    throw TruncationError("bch_identity_check: dim too small, edge mass " + detail::sci(out.edge_mass));
  for (std::size_t n = 0; n <= rep.dim() / 2; ++n)
    out.max_error = std::max(out.max_error, std::abs(U(static_cast<Eigen::Index>(n), 0) - product[n]));
  return out;
}

struct AppendixBCheck {
  double h;
  double residual_generator;  ///< vs (e^{i theta} J+ - e^{-i theta} J-) D|0>
  double residual_normal;     ///< vs (-2k tanh r + e^{i theta} sech^2 r J+) D|0>
  double roundoff_floor;      ///< eps / h, below which residuals carry no information
};

/// Central difference of D(r e^{i theta})|k,0> in r against the two closed-form derivatives.
/// Residuals are 2-norms over rows 0..dim-2.
inline AppendixBCheck appendix_b_check(double r, double theta, const RepLabel& rep, double h = 1e-5) {
  detail::require(r > 0.0 && std::isfinite(theta), "appendix_b_check: requires r > 0");
  detail::require(h > 0.0 && h < r, "appendix_b_check: step must satisfy 0 < h < r");
  StateOptions opts;
  opts.tail_tol = std::numeric_limits<double>::infinity();
  const StateVector psi = perelomov_state(std::polar(r, theta), rep, opts);
  const StateVector up = perelomov_state(std::polar(r + h, theta), rep, opts);
  const StateVector dn = perelomov_state(std::polar(r - h, theta), rep, opts);
  const StateVector jp = apply_jplus(psi), jm = apply_jminus(psi);
  const double k = rep.k();
  const complex e = std::polar(1.0, theta);
  const double sech2 = 1.0 / (std::cosh(r) * std::cosh(r));
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t n = 0; n + 1 < rep.dim(); ++n) {
    const complex fd = (up[n] - dn[n]) / (2.0 * h);
    const complex g = e * jp[n] - std::conj(e) * jm[n];
    const complex b = -2.0 * k * std::tanh(r) * psi[n] + e * sech2 * jp[n];
    s1 += std::norm(fd - g);
    s2 += std::norm(fd - b);
  }
  return {h, std::sqrt(s1), std::sqrt(s2), std::numeric_limits<double>::epsilon() / h};
}

/// The two closed-form derivatives against each other, no differencing involved.
inline double appendix_b_consistency(double r, double theta, const RepLabel& rep) {
  StateOptions opts;
  opts.tail_tol = std::numeric_limits<double>::infinity();
  const StateVector psi = perelomov_state(std::polar(r, theta), rep, opts);
  const StateVector jp = apply_jplus(psi), jm = apply_jminus(psi);
  const complex e = std::polar(1.0, theta);
  const double sech2 = 1.0 / (std::cosh(r) * std::cosh(r));
  double s = 0.0;
  for (std::size_t n = 0; n + 1 < rep.dim(); ++n) {
    const complex g = e * jp[n] - std::conj(e) * jm[n];
    const complex b = -2.0 * rep.k() * std::tanh(r) * psi[n] + e * sech2 * jp[n];
    s += std::norm(g - b);
  }
  return std::sqrt(s);
}

}  // namespace su11
