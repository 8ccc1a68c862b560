#pragma once

// Ladder-operator squeezed states of the su(1,1) discrete series:
//   (mu J- + nu J+)|beta> = beta |beta>,  |nu/mu| < 1.
// Writing |beta> = D(alpha) ||beta'>, alpha = r e^{i theta} with e^{2i theta} tanh^2 r = -nu/mu,
// reduces the problem to
//   [e^{i theta} sinh(2r) J0 + cosh(2r) J-] ||beta'> = beta' ||beta'>,  beta' = cosh^2(r) beta / mu,
// whose solution is the two-term recursion
//   cosh(2r) sqrt((n+1)(2k+n)) C_{n+1} = [beta' - e^{i theta} sinh(2r)(k+n)] C_n.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "su11/algebra.hpp"
#include "su11/displacement.hpp"
#include "su11/error.hpp"

namespace su11 {

namespace detail {

inline std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

inline double wrap_angle(double theta) {
  // (-pi, pi]
  double t = std::remainder(theta, 2.0 * std::numbers::pi);
  if (t <= -std::numbers::pi) t += 2.0 * std::numbers::pi;
  return t;
}

}  // namespace detail

class SqueezeParams {
 public:
  /// (mu, nu, beta) -> (r, theta, beta'). The canonical root has theta in (-pi/2, pi/2];
  /// `negative_root` selects the companion -alpha (theta + pi).
  static SqueezeParams from_eigenproblem(complex mu, complex nu, complex beta, bool negative_root = false) {
    detail::require(std::abs(mu) > 0.0, "SqueezeParams: mu = 0 is degenerate");
    const complex q = -nu / mu;
    detail::require(std::abs(q) < 1.0, "SqueezeParams: requires |nu/mu| < 1");
    const double r = std::atanh(std::sqrt(std::abs(q)));
    double theta = std::abs(q) > 0.0 ? 0.5 * std::arg(q) : 0.0;
    if (negative_root) theta = detail::wrap_angle(theta + std::numbers::pi);
    const double c = std::cosh(r);
    return SqueezeParams(mu, nu, beta, r, theta, c * c * beta / mu);
  }

  /// Post-transform data; mu is fixed to 1 and nu, beta follow.
  static SqueezeParams from_transformed(double r, double theta, complex beta_prime) {
    detail::require(std::isfinite(r) && r >= 0.0, "SqueezeParams: r must be finite and >= 0");
    detail::require(std::isfinite(theta), "SqueezeParams: theta must be finite");
    theta = detail::wrap_angle(theta);
    const double t = std::tanh(r), c = std::cosh(r);
    const complex nu = -std::polar(t * t, 2.0 * theta);
    return SqueezeParams(1.0, nu, beta_prime / (c * c), r, theta, beta_prime);
  }

  complex mu() const { return mu_; }
  complex nu() const { return nu_; }
  complex beta() const { return beta_; }
  double r() const { return r_; }
  double theta() const { return theta_; }
  complex beta_prime() const { return beta_prime_; }

  complex alpha() const { return std::polar(r_, theta_); }
  /// e^{i theta} tanh r, the disentangled displacement parameter.
  complex zeta() const { return std::polar(std::tanh(r_), theta_); }
  /// -e^{i theta} tanh 2r, the limiting coefficient ratio of ||beta'>.
  complex xi() const { return -std::polar(std::tanh(2.0 * r_), theta_); }

  SqueezeParams with_beta_prime(complex bp) const {
    const double c = std::cosh(r_);
    return SqueezeParams(mu_, nu_, mu_ * bp / (c * c), r_, theta_, bp);
  }

  /// The -alpha root of e^{2i theta} tanh^2 r = -nu/mu for the same (mu, nu, beta).
  SqueezeParams companion() const {
    return SqueezeParams(mu_, nu_, beta_, r_, detail::wrap_angle(theta_ + std::numbers::pi), beta_prime_);
  }

 private:
  SqueezeParams(complex mu, complex nu, complex beta, double r, double theta, complex bp)
      : mu_(mu), nu_(nu), beta_(beta), r_(r), theta_(theta), beta_prime_(bp) {}

  complex mu_, nu_, beta_;
  double r_, theta_;
  complex beta_prime_;
};

/// beta' = e^{i theta} sinh(2r)(M + k), the value at which ||beta'> terminates at n = M.
inline complex laguerre_beta_prime(std::size_t M, double r, double theta, double k) {
  return std::polar(std::sinh(2.0 * r) * (static_cast<double>(M) + k), theta);
}

/// Returns M when beta' sits (to relative 1e-12) on a cut-off value.
inline std::optional<std::size_t> cutoff_order(const SqueezeParams& p, double k) {
  const double s = std::sinh(2.0 * p.r());
  if (s == 0.0) return p.beta_prime() == complex{} ? std::optional<std::size_t>(0) : std::nullopt;
  const complex m = p.beta_prime() / std::polar(s, p.theta()) - k;
  const double rounded = std::round(m.real());
  if (rounded < 0.0) return std::nullopt;
  if (std::abs(m - rounded) > 1e-12 * std::max(1.0, rounded + k)) return std::nullopt;
  return static_cast<std::size_t>(rounded);
}

struct StateOptions {
  /// Maximum squared norm allowed beyond the truncation.
  double tail_tol = 1e-20;
  /// Re-run at 2*dim and require componentwise drift below drift_tol.
  bool verify_doubling = true;
  double drift_tol = 1e-10;
  /// |alpha| guard for the matrix displacement routes.
  double alpha_guard = 1.5;
  DisplacementMethod method = DisplacementMethod::Auto;
};

/// dim = max(64, ceil(log(tol)/log|xi|) + M + 20).
inline std::size_t suggested_dim(const SqueezeParams& p, std::size_t M = 0, double tol = 1e-16) {
  const double ax = std::abs(p.xi());
  std::size_t dim = 64;
  if (ax > 0.0) dim = std::max(dim, static_cast<std::size_t>(std::ceil(std::log(tol) / std::log(ax))) + M + 20);
  // Near r = 0 the coefficients behave like beta'^n/n! and peak around n ~ |beta'|.
  dim = std::max(dim, static_cast<std::size_t>(4.0 * std::abs(p.beta_prime())) + M + 20);
  return dim;
}

/// Truncation adequate for the full state |beta>, whose coefficients decay like tanh(r)^n.
inline std::size_t suggested_output_dim(const SqueezeParams& p, std::size_t M = 0, double tol = 1e-16) {
  const double at = std::tanh(p.r());
  std::size_t dim = 64;
  if (at > 0.0) dim = std::max(dim, static_cast<std::size_t>(std::ceil(std::log(tol) / std::log(at))) + M + 40);
  dim = std::max(dim, static_cast<std::size_t>(4.0 * std::abs(p.beta())) + M + 40);
  return dim;
}

namespace detail {

struct RecursionRun {
  std::vector<complex> coeffs;  // unnormalized, C_0 > 0
  double tail_mass;             // sum_{n >= dim} |C_n|^2 on the same scale
};

/// Runs the recursion to `dim` and keeps going until the remaining tail is negligible.
inline RecursionRun run_recursion(const SqueezeParams& p, double k, std::size_t dim) {
  const double c2 = std::cosh(2.0 * p.r());
  const complex es = std::polar(std::sinh(2.0 * p.r()), p.theta());
  const complex bp = p.beta_prime();
  const double ax = std::abs(p.xi());
  // On a cut-off value the factor at n = M vanishes analytically; snap it so C_n = 0 exactly beyond M.
  const auto cut = cutoff_order(p, k);

  RecursionRun run{std::vector<complex>(dim), 0.0};
  run.coeffs[0] = 1.0;
  double head = 1.0;
  complex c = 1.0;
  auto rescale = [&](double factor) {
    for (auto& x : run.coeffs) x *= factor;
    head *= factor * factor;
    run.tail_mass *= factor * factor;
    c *= factor;
  };
  const std::size_t hard_cap = 64 * dim + 200000;
  for (std::size_t n = 0; n + 1 < hard_cap; ++n) {
    const complex next = (cut && n == *cut) ? complex{}
                                             : (bp - es * (k + static_cast<double>(n))) / (c2 * raising_element(k, n)) * c;
    c = next;
    if (std::abs(c) > 1e200) rescale(1e-200);
    const double m2 = std::norm(c);
    if (n + 1 < dim) {
      run.coeffs[n + 1] = c;
      head += m2;
      continue;
    }
    run.tail_mass += m2;
    if (m2 == 0.0) break;
    // Geometric remainder once the ratio has settled below its limit.
    const double n1 = static_cast<double>(n + 1);
    const double ratio = std::abs(bp - es * (k + n1)) / (c2 * raising_element(k, n + 1));
    if (ratio < 1.0 && m2 * ratio * ratio / (1.0 - std::max(ratio, ax) * std::max(ratio, ax) + 1e-300) <
                           1e-40 * (head + run.tail_mass)) {
      const double rho = std::max(ratio, ax);
      if (rho < 1.0) run.tail_mass += m2 * rho * rho / (1.0 - rho * rho);
      break;
    }
  }
  return run;
}

inline StateVector finish(const RepLabel& rep, std::vector<complex> coeffs, double tail_mass, double tail_tol,
                          const char* who) {
  double head = 0.0;
  for (const auto& x : coeffs) head += std::norm(x);
  const double total = head + tail_mass;
  if (!(total > 0.0) || !std::isfinite(total)) throw NumericError(std::string(who) + ": degenerate normalization");
  const double s = 1.0 / std::sqrt(total);
  for (auto& x : coeffs) x *= s;
  const double tail = tail_mass / total;
  if (tail > tail_tol)
    throw TruncationError(std::string(who) + ": truncation insufficient (tail mass " + sci(tail) +
                          " at dim " + std::to_string(rep.dim()) + ")");
  return StateVector(rep, std::move(coeffs), tail).with_canonical_phase();
}

inline void check_doubling(const StateVector& base, const StateVector& doubled, double tol, const char* who) {
  const double drift = phase_aligned_distance(base.coeffs(), doubled.coeffs().first(base.dim()));
  if (drift > tol)
    throw TruncationError(std::string(who) + ": result drifts by " + sci(drift) +
                          " when the truncation is doubled");
}

}  // namespace detail

/// ||beta'> from the two-term recursion, normalized with C_0 > 0.
inline StateVector solve_recursion(const SqueezeParams& p, const RepLabel& rep, const StateOptions& opts = {}) {
  auto run = detail::run_recursion(p, rep.k(), rep.dim());
  StateVector out = detail::finish(rep, std::move(run.coeffs), run.tail_mass, opts.tail_tol, "solve_recursion");
  if (opts.verify_doubling) {
    StateOptions inner = opts;
    inner.verify_doubling = false;
    inner.tail_tol = std::numeric_limits<double>::infinity();
    detail::check_doubling(out, solve_recursion(p, rep.resized(2 * rep.dim()), inner), opts.drift_tol,
                           "solve_recursion");
  }
  return out;
}

/// ||beta'> = C_0 exp(f(N) J+)|k,0>, f(N) = (beta' - e^{i theta} sinh(2r)(k+N-1)) / (cosh(2r)(2k+N-1)),
/// summed term by term with the matrix-free operators.
inline StateVector exponential_state(const SqueezeParams& p, const RepLabel& rep, const StateOptions& opts = {}) {
  const double k = rep.k();
  const double c2 = std::cosh(2.0 * p.r());
  const complex es = std::polar(std::sinh(2.0 * p.r()), p.theta());
  const complex bp = p.beta_prime();
  auto f = [&](std::size_t n) {
    const double nn = static_cast<double>(n);
    return (bp - es * (k + nn - 1.0)) / (c2 * (2.0 * k + nn - 1.0));
  };

  const std::size_t dim = rep.dim();
  std::vector<complex> term(dim, complex{}), raised, acc(dim, complex{});
  term[0] = 1.0;
  acc[0] = 1.0;
  for (std::size_t m = 1; m < dim; ++m) {
    detail::raise_into(k, term, raised);
    // raised[0] is always zero, and f(0) is singular at k = 1/2.
    for (std::size_t n = 1; n < dim; ++n) raised[n] *= f(n) / static_cast<double>(m);
    term.swap(raised);
    for (std::size_t n = 0; n < dim; ++n) acc[n] += term[n];
    if (std::abs(acc[m]) > 1e200) {
      for (auto& x : acc) x *= 1e-200;
      for (auto& x : term) x *= 1e-200;
    }
  }
  // Tail beyond the truncation: geometric estimate with the larger of |xi| and the last ratio.
  double tail = 0.0;
  if (dim >= 2 && std::abs(acc[dim - 2]) > 0.0) {
    const double last = std::abs(acc[dim - 1]);
    const double rho = std::max(std::abs(p.xi()), last / std::abs(acc[dim - 2]));
    if (rho >= 1.0)
      tail = std::numeric_limits<double>::infinity();
    else
      tail = last * last * rho * rho / (1.0 - rho * rho);
  }
  StateVector out = detail::finish(rep, std::move(acc), tail, opts.tail_tol, "exponential_state");
  if (opts.verify_doubling) {
    StateOptions inner = opts;
    inner.verify_doubling = false;
    inner.tail_tol = std::numeric_limits<double>::infinity();
    detail::check_doubling(out, exponential_state(p, rep.resized(2 * dim), inner), opts.drift_tol,
                           "exponential_state");
  }
  return out;
}

/// Laguerre cut-off state at beta' = e^{i theta} sinh(2r)(M+k):
///   C_n = (-xi)^n M! / (sqrt(n! [[2k+n-1]]!) (M-n)!) C_0 for n <= M, exactly 0 beyond.
/// Any beta' carried by `p` is overridden.
inline StateVector laguerre_state(std::size_t M, const SqueezeParams& p, const RepLabel& rep) {
  detail::require(M < rep.dim(), "laguerre_state: M must be < rep.dim");
  const double k = rep.k();
  const complex mxi = -p.xi();
  const double log_ax = std::log(std::abs(mxi));
  const complex unit = std::abs(mxi) > 0.0 ? mxi / std::abs(mxi) : complex(1.0);
  std::vector<complex> c(rep.dim(), complex{});
  c[0] = 1.0;
  if (std::abs(mxi) > 0.0) {
    const double lgM = std::lgamma(static_cast<double>(M) + 1.0);
    for (std::size_t n = 1; n <= M; ++n) {
      const double nn = static_cast<double>(n);
      const double lg = nn * log_ax + lgM - std::lgamma(static_cast<double>(M - n) + 1.0) - 0.5 * log_ladder_norm2(k, n);
      c[n] = std::pow(unit, static_cast<int>(n)) * std::exp(lg);
    }
  }
  return detail::finish(rep, std::move(c), 0.0, std::numeric_limits<double>::infinity(), "laguerre_state");
}

/// Perelomov coherent state D(alpha)|k,0> = (1-|zeta|^2)^k exp(zeta J+)|k,0>.
inline StateVector perelomov_state(complex alpha, const RepLabel& rep, const StateOptions& opts = {}) {
  const double k = rep.k();
  const double r = std::abs(alpha);
  const double t = std::tanh(r);
  const complex unit = r > 0.0 ? alpha / r : complex(1.0);
  const double log_pref = -2.0 * k * std::log(std::cosh(r));  // log (1-|zeta|^2)^k
  auto magnitude = [&](std::size_t n) {
    if (n == 0) return std::exp(log_pref);
    if (t == 0.0) return 0.0;
    const double nn = static_cast<double>(n);
    return std::exp(log_pref + nn * std::log(t) + 0.5 * (std::lgamma(2.0 * k + nn) - std::lgamma(2.0 * k) -
                                                          std::lgamma(nn + 1.0)));
  };
  std::vector<complex> c(rep.dim());
  complex phase = 1.0;
  for (std::size_t n = 0; n < rep.dim(); ++n) {
    c[n] = phase * magnitude(n);
    phase *= unit;
  }
  double tail = 0.0;
  if (t > 0.0) {
    double peak = 0.0;
    for (std::size_t n = rep.dim(); n < 64 * rep.dim() + 100000; ++n) {
      const double m = magnitude(n);
      const double m2 = m * m;
      tail += m2;
      peak = std::max(peak, m2);
      if (m2 < 1e-40 * std::max(peak, 1e-300) || m2 == 0.0) break;
      if (m2 < 1e-300) break;
    }
  }
  // Exact state has unit norm: no renormalization, only the phase convention.
  StateVector out(rep, std::move(c), tail);
  if (tail > opts.tail_tol)
    throw TruncationError("perelomov_state: truncation insufficient (tail mass " + detail::sci(tail) + ")");
  return out;
}

namespace detail {

/// |beta> = D(alpha)||beta'> through the holomorphic representation |k,n> <-> c_n z^n,
/// c_n = sqrt(Gamma(2k+n)/(n! Gamma(2k))), where J+ = z^2 d/dz + 2kz, J- = d/dz and
///   D(alpha) f(z) = (1-|zeta|^2)^k (1 - zeta z)^{-2k} f((z - conj(zeta))/(1 - zeta z)).
/// ||beta'> has generating function (1 - xi z)^{-a}, a = k - beta' e^{-i theta}/sinh(2r), so
///   g(z) = (1 - zeta z)^{a-2k} (1 + zeta z)^{-a},
/// whose ODE (1 - zeta^2 z^2) g' = zeta (2(k-a) + 2k zeta z) g gives, for C_n = g_n / c_n,
///   sqrt((n+1)(2k+n)) C_{n+1} = 2 zeta (k-a) C_n + zeta^2 sqrt(n(2k+n-1)) C_{n-1}.
/// The coefficients decay like tanh(r)^n, against tanh(2r)^n for ||beta'>.
inline RecursionRun run_holomorphic(const SqueezeParams& p, double k, std::size_t dim) {
  const complex zeta = p.zeta();
  const double s2 = std::sinh(2.0 * p.r());
  const complex lead = s2 > 0.0 ? 2.0 * zeta * (p.beta_prime() * std::polar(1.0, -p.theta()) / s2)
                                : p.beta_prime();  // r = 0: plain lowering-operator recursion
  const complex z2 = zeta * zeta;
  const double t2 = std::norm(zeta);

  RecursionRun run{std::vector<complex>(dim), 0.0};
  complex prev = 0.0, cur = 1.0;
  run.coeffs[0] = cur;
  double head = 1.0, peak = 1.0;
  auto rescale = [&](double f) {
    for (auto& x : run.coeffs) x *= f;
    head *= f * f;
    peak *= f * f;
    run.tail_mass *= f * f;
    prev *= f;
    cur *= f;
  };
  const std::size_t hard_cap = 64 * dim + 200000;
  for (std::size_t n = 0; n + 1 < hard_cap; ++n) {
    const double nn = static_cast<double>(n);
    const complex next =
        (lead * cur + z2 * std::sqrt(nn * (2.0 * k + nn - 1.0)) * prev) / raising_element(k, n);
    prev = cur;
    cur = next;
    const double m2 = std::norm(cur);
    if (std::abs(cur) > 1e200) rescale(1e-200);
    peak = std::max(peak, std::norm(cur));
    if (n + 1 < dim) {
      run.coeffs[n + 1] = cur;
      head += std::norm(cur);
      continue;
    }
    run.tail_mass += std::norm(cur);
    if (m2 == 0.0 && std::norm(prev) == 0.0) break;
    // Remainder bounded geometrically once two consecutive terms sit far below the peak.
    const double pair = std::norm(cur) + std::norm(prev);
    if (t2 < 1.0 && pair < 1e-44 * peak && n > dim + 8) {
      run.tail_mass += pair * t2 / (1.0 - t2);
      break;
    }
  }
  return run;
}

inline StateVector displaced_once(const SqueezeParams& p, const RepLabel& rep, const StateOptions& opts) {
  const double k = rep.k();
  const complex alpha = p.alpha();
  const auto M = cutoff_order(p, k);

  if (opts.method == DisplacementMethod::Auto || opts.method == DisplacementMethod::Holomorphic) {
    auto run = run_holomorphic(p, k, rep.dim());
    return finish(rep, std::move(run.coeffs), run.tail_mass, opts.tail_tol, "displaced_state");
  }

  // Seed ||beta'> on a working space large enough for both the seed tail and the output.
  std::vector<complex> seed;
  double seed_tail = 0.0;
  std::size_t work = 2 * rep.dim();
  if (M) {
    work = std::max(work, *M + 2);
    const StateVector lag = laguerre_state(*M, p, RepLabel(k, work));
    seed.assign(lag.coeffs().begin(), lag.coeffs().end());
  } else {
    // Grow the working space until the seed tail is negligible. The target is independent of
    // opts.tail_tol, which the doubling re-run relaxes to infinity.
    const double seed_target = 1e-4 * std::min(opts.tail_tol, 1e-20);
    while (true) {
      auto run = run_recursion(p, k, work);
      double head = 0.0;
      for (const auto& x : run.coeffs) head += std::norm(x);
      const double total = head + run.tail_mass;
      if (run.tail_mass / total <= seed_target || work > (std::size_t{1} << 22)) {
        const double s = 1.0 / std::sqrt(total);
        for (auto& x : run.coeffs) x *= s;
        seed = std::move(run.coeffs);
        seed_tail = run.tail_mass / total;
        break;
      }
      work *= 2;
    }
  }
  if (p.r() == 0.0) {
    std::vector<complex> head(seed.begin(), seed.begin() + static_cast<std::ptrdiff_t>(rep.dim()));
    double beyond = seed_tail;
    for (std::size_t n = rep.dim(); n < seed.size(); ++n) beyond += std::norm(seed[n]);
    return finish(rep, std::move(head), beyond, opts.tail_tol, "displaced_state");
  }

  std::vector<complex> out = displace(k, alpha, seed, opts.method, M.has_value());
  double beyond = seed_tail;
  for (std::size_t n = rep.dim(); n < out.size(); ++n) beyond += std::norm(out[n]);
  out.resize(rep.dim());
  return finish(rep, std::move(out), beyond, opts.tail_tol, "displaced_state");
}

}  // namespace detail

/// Full squeezed state |beta> = D(alpha)||beta'>, normalized, first nonzero coefficient real positive.
/// The |alpha| guard applies to the matrix routes only; the holomorphic route has no conditioning limit.
inline StateVector displaced_state(const SqueezeParams& p, const RepLabel& rep, const StateOptions& opts = {}) {
  const bool matrix_route =
      opts.method == DisplacementMethod::Disentangled || opts.method == DisplacementMethod::Propagator;
  detail::require(!matrix_route || p.r() <= opts.alpha_guard, "displaced_state: |alpha| exceeds the configured guard");
  StateVector out = detail::displaced_once(p, rep, opts);
  if (opts.verify_doubling) {
    StateOptions inner = opts;
    inner.verify_doubling = false;
    inner.tail_tol = std::numeric_limits<double>::infinity();
    detail::check_doubling(out, detail::displaced_once(p, rep.resized(2 * rep.dim()), inner), opts.drift_tol,
                           "displaced_state");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Residuals

namespace detail {

inline double residual_norm(const std::vector<complex>& r, std::size_t rows) {
  double s = 0.0;
  for (std::size_t n = 0; n < rows; ++n) s += std::norm(r[n]);
  return std::sqrt(s);
}

}  // namespace detail

/// ||(mu J- + nu J+) v - beta v|| / ||v|| over rows 0..dim-2 (the last row needs the
/// component beyond the truncation), or all rows when include_edge.
inline double ladder_residual(const StateVector& v, complex mu, complex nu, complex beta, bool include_edge = false) {
  const StateVector lo = apply_jminus(v), hi = apply_jplus(v);
  std::vector<complex> r(v.dim());
  for (std::size_t n = 0; n < v.dim(); ++n) r[n] = mu * lo[n] + nu * hi[n] - beta * v[n];
  return detail::residual_norm(r, include_edge ? v.dim() : v.dim() - 1) / v.norm();
}

/// ||[e^{i theta} sinh(2r) J0 + cosh(2r) J-] v - beta' v|| / ||v||, interior rows.
inline double transformed_residual(const StateVector& v, const SqueezeParams& p, bool include_edge = false) {
  const StateVector lo = apply_jminus(v), diag = apply_j0(v);
  const complex es = std::polar(std::sinh(2.0 * p.r()), p.theta());
  const double c2 = std::cosh(2.0 * p.r());
  std::vector<complex> r(v.dim());
  for (std::size_t n = 0; n < v.dim(); ++n) r[n] = es * diag[n] + c2 * lo[n] - p.beta_prime() * v[n];
  return detail::residual_norm(r, include_edge ? v.dim() : v.dim() - 1) / v.norm();
}

/// max_n |cosh(2r) sqrt((n+1)(2k+n)) C_{n+1} - [beta' - e^{i theta} sinh(2r)(k+n)] C_n| / max|C|.
inline double recursion_residual(const StateVector& v, const SqueezeParams& p) {
  const double k = v.rep().k();
  const double c2 = std::cosh(2.0 * p.r());
  const complex es = std::polar(std::sinh(2.0 * p.r()), p.theta());
  double worst = 0.0, scale = 0.0;
  for (std::size_t n = 0; n < v.dim(); ++n) scale = std::max(scale, std::abs(v[n]));
  for (std::size_t n = 0; n + 1 < v.dim(); ++n) {
    const complex lhs = c2 * raising_element(k, n) * v[n + 1];
    const complex rhs = (p.beta_prime() - es * (k + static_cast<double>(n))) * v[n];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return scale > 0.0 ? worst / scale : worst;
}

struct EigenCheck {
  complex eigenvalue;  ///< 2 e^{i theta} k tanh r
  complex rayleigh;    ///< <psi|(J- - e^{2i theta} tanh^2 r J+)|psi> on the interior rows
  double residual;
};

/// D(alpha)|k,0> is an eigenstate of J- - e^{2i theta} tanh^2(r) J+ with eigenvalue 2 e^{i theta} k tanh r.
inline EigenCheck perelomov_eigen_check(complex alpha, const RepLabel& rep, bool include_edge = false) {
  const double r = std::abs(alpha), theta = std::arg(alpha), k = rep.k();
  const double t = std::tanh(r);
  const complex beta = std::polar(2.0 * k * t, theta);
  const complex nu = -std::polar(t * t, 2.0 * theta);
  StateOptions opts;
  opts.tail_tol = std::numeric_limits<double>::infinity();
  const StateVector psi = perelomov_state(alpha, rep, opts);
  const StateVector lo = apply_jminus(psi), hi = apply_jplus(psi);
  complex num{};
  double den = 0.0;
  for (std::size_t n = 0; n + 1 < psi.dim(); ++n) {
    num += std::conj(psi[n]) * (lo[n] + nu * hi[n]);
    den += std::norm(psi[n]);
  }
  return {beta, num / den, ladder_residual(psi, 1.0, nu, beta, include_edge)};
}

/// C_0 E(M, alpha) D(alpha)|k,0>, with
///   E(M, alpha) = sum_{n<=M} (-xi)^n / [[2k+n-1]]! binom(M, n) B^n,
///   B = cosh^2 r J+ + sinh^2 r e^{-2i theta} J- - e^{-i theta} sinh(2r) J0.
inline StateVector bridge_operator_state(std::size_t M, complex alpha, const RepLabel& rep,
                                         const StateOptions& opts = {}) {
  const double k = rep.k();
  const double r = std::abs(alpha), theta = std::arg(alpha);
  const complex mxi = std::polar(std::tanh(2.0 * r), theta);  // -xi
  const double ch2 = std::cosh(r) * std::cosh(r), sh2 = std::sinh(r) * std::sinh(r);
  const complex jm_coeff = std::polar(sh2, -2.0 * theta);
  const complex j0_coeff = -std::polar(std::sinh(2.0 * r), -theta);

  auto build = [&](const RepLabel& out_rep, const StateOptions& o) {
    const RepLabel work(k, 2 * out_rep.dim() + M + 2);
    StateOptions po = o;
    po.tail_tol = std::numeric_limits<double>::infinity();
    const StateVector base = perelomov_state(alpha, work, po);
    const double base_tail = base.tail_bound();
    std::vector<complex> acc(base.coeffs().begin(), base.coeffs().end());
    std::vector<complex> power(acc), hi, lo;
    double binom = 1.0;
    complex mxi_pow = 1.0;
    for (std::size_t n = 1; n <= M; ++n) {
      detail::raise_into(k, power, hi);
      detail::lower_into(k, power, lo);
      for (std::size_t i = 0; i < power.size(); ++i)
        power[i] = ch2 * hi[i] + jm_coeff * lo[i] + j0_coeff * (static_cast<double>(i) + k) * power[i];
      binom *= static_cast<double>(M - n + 1) / static_cast<double>(n);
      mxi_pow *= mxi;
      const complex coeff = mxi_pow * binom / rising_bracket(2.0 * k - 1.0, n);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += coeff * power[i];
    }
    // The last M rows of B^n v are corrupted by the truncation; they lie far beyond out_rep.dim().
    double beyond = base_tail;
    for (std::size_t i = out_rep.dim(); i < acc.size(); ++i) beyond += std::norm(acc[i]);
    acc.resize(out_rep.dim());
    return detail::finish(out_rep, std::move(acc), beyond, o.tail_tol, "bridge_operator_state");
  };

  StateVector out = build(rep, opts);
  if (opts.verify_doubling) {
    StateOptions inner = opts;
    inner.tail_tol = std::numeric_limits<double>::infinity();
    detail::check_doubling(out, build(rep.resized(2 * rep.dim()), inner), opts.drift_tol, "bridge_operator_state");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Uncertainty relations

struct UncertaintyReport {
  double var1;     ///< Var(J1), J1 = (J+ + J-)/2
  double var2;     ///< Var(J2), J2 = (J+ - J-)/(2i)
  double cov;      ///< symmetrized covariance
  double j0_mean;  ///< <J0>
  double sr_gap;   ///< var1 var2 - cov^2 - <J0>^2/4 (Schrodinger-Robertson, >= 0)
};

inline UncertaintyReport uncertainty_report(const StateVector& state) {
  detail::require(state.is_normalized(), "uncertainty_report: state is not normalized");
  // Pad by two so J+ of the top component is kept; the moments are then exact for the
  // truncated vector regarded as a state of the full space.
  std::vector<complex> v(state.coeffs().begin(), state.coeffs().end());
  v.resize(v.size() + 2, complex{});
  const double nrm = std::sqrt(detail::vec_norm2(v));
  for (auto& x : v) x /= nrm;
  const double k = state.rep().k();
  std::vector<complex> hi, lo;
  detail::raise_into(k, v, hi);
  detail::lower_into(k, v, lo);
  std::vector<complex> j1(v.size()), j2(v.size());
  const complex inv2i = 1.0 / complex(0.0, 2.0);
  for (std::size_t n = 0; n < v.size(); ++n) {
    j1[n] = 0.5 * (hi[n] + lo[n]);
    j2[n] = (hi[n] - lo[n]) * inv2i;
  }
  complex m1{}, m2{}, cross{}, j0{};
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n) {
    m1 += std::conj(v[n]) * j1[n];
    m2 += std::conj(v[n]) * j2[n];
    cross += std::conj(j1[n]) * j2[n];
    s1 += std::norm(j1[n]);
    s2 += std::norm(j2[n]);
    j0 += std::norm(v[n]) * (static_cast<double>(n) + k);
  }
  UncertaintyReport rep{};
  rep.var1 = s1 - m1.real() * m1.real();
  rep.var2 = s2 - m2.real() * m2.real();
  rep.cov = cross.real() - m1.real() * m2.real();
  rep.j0_mean = j0.real();
  rep.sr_gap = rep.var1 * rep.var2 - rep.cov * rep.cov - 0.25 * rep.j0_mean * rep.j0_mean;
  return rep;
}

}  // namespace su11
