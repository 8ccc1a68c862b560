#pragma once

// Application of the Perelomov displacement D(alpha) = exp(alpha J+ - conj(alpha) J-)
// to truncated coefficient vectors.
//
// Two routes:
//  * disentangled: exp(zeta J+) exp(-2 ln(cosh r) J0) exp(-conj(zeta) J-), zeta = e^{i theta} tanh r.
//    Each factor is summed term by term. For an input whose coefficients decay like |xi|^n the
//    intermediate exp(-conj(zeta) J-) v decays like |xi|/(1-|zeta xi|) and stops being
//    normalizable once tanh r > sqrt(2)-1, so this route is only used for finitely supported
//    inputs or small r.
//  * holomorphic: only for squeezed states; see displaced_state.
//  * propagator: Chebyshev expansion of exp(-iH), H = i(alpha J+ - conj(alpha) J-), on the
//    truncated space. The truncated generator is exactly anti-Hermitian, so the map is unitary
//    and well conditioned for any alpha.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "su11/algebra.hpp"
#include "su11/special.hpp"

namespace su11 {

enum class DisplacementMethod { Auto, Holomorphic, Disentangled, Propagator };

namespace detail {

inline void raise_into(double k, const std::vector<complex>& in, std::vector<complex>& out) {
  const std::size_t dim = in.size();
  out.assign(dim, complex{});
  for (std::size_t n = 0; n + 1 < dim; ++n) out[n + 1] = raising_element(k, n) * in[n];
}

inline void lower_into(double k, const std::vector<complex>& in, std::vector<complex>& out) {
  const std::size_t dim = in.size();
  out.assign(dim, complex{});
  for (std::size_t n = 1; n < dim; ++n) out[n - 1] = raising_element(k, n - 1) * in[n];
}

inline double vec_norm2(const std::vector<complex>& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return s;
}

/// sum_j (c X)^j v / j!, with X = J+ (raise) or J- (lower); stops once the
/// term is negligible or identically zero.
inline std::vector<complex> exp_ladder_series(double k, bool raise, complex c, const std::vector<complex>& v) {
  std::vector<complex> acc(v), term(v), next;
  const std::size_t max_terms = 4 * v.size() + 64;
  for (std::size_t j = 1; j < max_terms; ++j) {
    if (raise)
      raise_into(k, term, next);
    else
      lower_into(k, term, next);
    const double scale = 1.0 / static_cast<double>(j);
    for (auto& x : next) x *= c * scale;
    term.swap(next);
    const double tn = vec_norm2(term);
    for (std::size_t n = 0; n < acc.size(); ++n) acc[n] += term[n];
    if (tn == 0.0) break;
    if (j > 8 && tn < 1e-36 * vec_norm2(acc)) break;
  }
  return acc;
}

}  // namespace detail

/// D(alpha) v via the disentangled product; the output lives on the same truncation.
inline std::vector<complex> displace_disentangled(double k, complex alpha, const std::vector<complex>& v) {
  const double r = std::abs(alpha);
  if (r == 0.0) return v;
  const complex zeta = std::polar(std::tanh(r), std::arg(alpha));
  std::vector<complex> w = detail::exp_ladder_series(k, false, -std::conj(zeta), v);
  const double log_cosh = std::log(std::cosh(r));
  for (std::size_t n = 0; n < w.size(); ++n) w[n] *= std::exp(-2.0 * log_cosh * (static_cast<double>(n) + k));
  return detail::exp_ladder_series(k, true, zeta, w);
}

/// D(alpha) v via a Chebyshev expansion of the unitary exp(alpha J+ - conj(alpha) J-)
/// on the truncated space of v.
inline std::vector<complex> displace_propagator(double k, complex alpha, const std::vector<complex>& v) {
  const std::size_t dim = v.size();
  const double r = std::abs(alpha);
  if (r == 0.0 || dim < 2) return v;

  // Gershgorin bound on the spectrum of H = i(alpha J+ - conj(alpha) J-).
  double bound = 0.0;
  for (std::size_t n = 0; n < dim; ++n) {
    double row = 0.0;
    if (n >= 1) row += r * raising_element(k, n - 1);
    if (n + 1 < dim) row += r * raising_element(k, n);
    bound = std::max(bound, row);
  }
  const double h = bound * 1.01 + 1e-12;
  const auto nmax = static_cast<std::size_t>(h + 20.0 * std::cbrt(h) + 60.0);
  const std::vector<double> bessel = special::bessel_j_sequence(h, nmax);

  const complex i_alpha = complex(0.0, 1.0) * alpha;
  const complex i_alpha_conj = complex(0.0, 1.0) * std::conj(alpha);
  // y = (H/h) x with H = i alpha J+ - i conj(alpha) J-
  auto apply_scaled = [&](const std::vector<complex>& x, std::vector<complex>& y) {
    y.assign(dim, complex{});
    for (std::size_t n = 0; n + 1 < dim; ++n) {
      const double a = raising_element(k, n);
      y[n + 1] += i_alpha * a * x[n];
      y[n] -= i_alpha_conj * a * x[n + 1];
    }
    for (auto& c : y) c /= h;
  };

  std::vector<complex> prev(v), cur, next;
  apply_scaled(prev, cur);
  std::vector<complex> acc(dim);
  for (std::size_t n = 0; n < dim; ++n) acc[n] = bessel[0] * prev[n];
  complex phase(0.0, -1.0);  // (-i)^m
  for (std::size_t m = 1; m <= nmax; ++m) {
    const complex coeff = 2.0 * bessel[m] * phase;
    for (std::size_t n = 0; n < dim; ++n) acc[n] += coeff * cur[n];
    if (static_cast<double>(m) > h && std::abs(bessel[m]) < 1e-18) break;
    apply_scaled(cur, next);
    for (std::size_t n = 0; n < dim; ++n) next[n] = 2.0 * next[n] - prev[n];
    prev.swap(cur);
    cur.swap(next);
    phase *= complex(0.0, -1.0);
  }
  return acc;
}

/// True when the disentangled route is numerically meaningful for the input:
/// finite support (trailing exact zeros beyond `support`) or tanh r <= 0.35.
inline bool disentangled_route_valid(complex alpha, bool finite_support) {
  return finite_support || std::tanh(std::abs(alpha)) <= 0.35;
}

inline std::vector<complex> displace(double k, complex alpha, const std::vector<complex>& v,
                                     DisplacementMethod method, bool finite_support) {
  detail::require(method != DisplacementMethod::Holomorphic,
                  "displace: the holomorphic route needs a closed-form input, not a coefficient vector");
  if (method == DisplacementMethod::Auto)
    method = disentangled_route_valid(alpha, finite_support) ? DisplacementMethod::Disentangled
                                                             : DisplacementMethod::Propagator;
  return method == DisplacementMethod::Disentangled ? displace_disentangled(k, alpha, v)
                                                    : displace_propagator(k, alpha, v);
}

}  // namespace su11
