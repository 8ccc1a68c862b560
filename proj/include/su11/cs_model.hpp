#pragma once

// Two-particle Calogero-Sutherland model,
//   H = -1/2 d^2/dx^2 + 1/2 x^2 + G^2/x^2,  x > 0,
// whose spectrum-generating su(1,1) sits in the k = lambda/2 + 1/4 discrete series.
// Coherent and cut-off squeezed wavefunctions are all of the form
//   Psi(x) = P(x^2) x^lambda exp(y x^2),  P a polynomial of degree M,
// which is what ClosedForm stores.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include "su11/algebra.hpp"
#include "su11/error.hpp"
#include "su11/special.hpp"
#include "su11/squeezed.hpp"

namespace su11::cs {

class CSParams {
 public:
  /// lambda = 1/2 + 1/2 sqrt(1 + 8 G^2).
  static CSParams from_coupling(double G) {
    su11::detail::require(std::isfinite(G) && G >= 0.0, "CSParams: coupling G must be >= 0");
    return CSParams(0.5 + 0.5 * std::sqrt(1.0 + 8.0 * G * G));
  }

  /// G^2 = lambda(lambda-1)/2; lambda in (1/2, 1) gives an attractive G^2 < 0.
  static CSParams from_lambda(double lambda) {
    su11::detail::require(std::isfinite(lambda) && lambda > 0.5, "CSParams: lambda must be > 1/2");
    return CSParams(lambda);
  }

  double lambda() const { return lambda_; }
  double g2() const { return 0.5 * lambda_ * (lambda_ - 1.0); }
  double G() const { return std::sqrt(std::max(0.0, g2())); }
  double k() const { return 0.5 * lambda_ + 0.25; }
  double ground_energy() const { return lambda_ + 0.5; }

 private:
  explicit CSParams(double lambda) : lambda_(lambda) {}
  double lambda_;
};

/// psi_0(x) ... psi_nmax(x). Uses the normalized Laguerre recurrence
///   p_{n+1} = [(2n+1+a-t) p_n - sqrt(n(n+a)) p_{n-1}] / sqrt((n+1)(n+a+1)),  a = lambda-1/2, t = x^2,
/// so no factorial ever appears explicitly.
inline std::vector<double> eigenfunction_sequence(std::size_t nmax, const CSParams& cs, double x) {
  su11::detail::require(x > 0.0, "eigenfunction: x must be > 0");
  const double a = cs.lambda() - 0.5, t = x * x;
  std::vector<double> out(nmax + 1);
  const double log_pref = 0.5 * std::log(2.0) + cs.lambda() * std::log(x) - 0.5 * t - 0.5 * std::lgamma(a + 1.0);
  double prev = 0.0, cur = std::exp(log_pref);
  out[0] = cur;
  for (std::size_t n = 0; n < nmax; ++n) {
    const double nn = static_cast<double>(n);
    const double next = ((2.0 * nn + 1.0 + a - t) * cur - std::sqrt(nn * (nn + a)) * prev) /
                        std::sqrt((nn + 1.0) * (nn + a + 1.0));
    prev = cur;
    cur = next;
    out[n + 1] = cur;
  }
  for (std::size_t n = 1; n <= nmax; n += 2) out[n] = -out[n];
  return out;
}

/// psi_n(x) = (-1)^n sqrt(2 n!/Gamma(n+lambda+1/2)) x^lambda e^{-x^2/2} L_n^{(lambda-1/2)}(x^2).
inline double eigenfunction(std::size_t n, const CSParams& cs, double x) {
  return eigenfunction_sequence(n, cs, x)[n];
}

/// sum_n C_n psi_n(x) for coefficients over the k = lambda/2 + 1/4 basis.
inline complex fock_sum(std::span<const complex> coeffs, const CSParams& cs, double x) {
  if (coeffs.empty()) return {};
  const auto psi = eigenfunction_sequence(coeffs.size() - 1, cs, x);
  complex s{};
  for (std::size_t n = 0; n < coeffs.size(); ++n) s += coeffs[n] * psi[n];
  return s;
}

// ---------------------------------------------------------------------------

struct Peak {
  double x;
  double height;
};

/// Psi(x) = (sum_j a_j u^j) x^lambda exp(y u), u = x^2.
struct ClosedForm {
  std::vector<complex> a;
  complex y;
  double lambda;

  /// Y = -(y + y*), the Gaussian decay rate of the density in u.
  double decay() const { return -2.0 * y.real(); }

  complex poly(double u) const {
    complex s{};
    for (std::size_t j = a.size(); j-- > 0;) s = s * u + a[j];
    return s;
  }

  complex operator()(double x) const {
    const double u = x * x;
    const complex g = std::exp(lambda * std::log(x) + y * u);
    return poly(u) * g;
  }

  double density(double x) const {
    if (x <= 0.0) return 0.0;
    const double u = x * x;
    return std::norm(poly(u)) * std::exp(2.0 * lambda * std::log(x) - decay() * u);
  }

  /// Real coefficients of |P(u)|^2.
  std::vector<double> abs2_coeffs() const {
    std::vector<double> q(a.empty() ? 1 : 2 * a.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) q[i + j] += (a[i] * std::conj(a[j])).real();
    return q;
  }

  /// S(u) = Q'(u) u + Q(u)(lambda - Y u), Q = |P|^2; sign(S) = sign of d/du of the density.
  std::vector<double> stationary_poly() const {
    const auto q = abs2_coeffs();
    const double Y = decay();
    std::vector<double> s(q.size() + 1, 0.0);
    for (std::size_t m = 0; m < q.size(); ++m) {
      s[m] += static_cast<double>(m) * q[m] + lambda * q[m];
      s[m + 1] -= Y * q[m];
    }
    return s;
  }

  /// Positive real stationary points of the density, keeping maxima only, highest first.
  std::vector<Peak> peaks() const {
    auto s = stationary_poly();
    while (s.size() > 1 && s.back() == 0.0) s.pop_back();
    std::vector<double> roots;
    if (s.size() == 2) {
      roots.push_back(-s[0] / s[1]);
    } else if (s.size() > 2) {
      Eigen::VectorXd c(static_cast<Eigen::Index>(s.size()));
      for (std::size_t i = 0; i < s.size(); ++i) c[static_cast<Eigen::Index>(i)] = s[i];
      Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(c);
      for (const auto& z : solver.roots()) {
        if (z.real() <= 0.0) continue;
        if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z))) continue;
        roots.push_back(polish(s, z.real()));
      }
    }
    std::vector<Peak> out;
    for (double u : roots) {
      if (!(u > 0.0)) continue;
      double ds = 0.0, scale = 0.0;
      for (std::size_t m = s.size(); m-- > 1;) ds = ds * u + static_cast<double>(m) * s[m];
      for (std::size_t m = 0; m < s.size(); ++m) scale += std::abs(s[m]) * std::pow(u, static_cast<double>(m));
      // S' < 0: density rises then falls. |S'| ~ 0 is an inflection and is discarded.
      if (ds < -1e-10 * scale / u) {
        const double x = std::sqrt(u);
        out.push_back({x, density(x)});
      }
    }
    std::sort(out.begin(), out.end(), [](const Peak& l, const Peak& r) { return l.height > r.height; });
    return out;
  }

 private:
  static double polish(const std::vector<double>& s, double u) {
    for (int it = 0; it < 4; ++it) {
      double v = 0.0, d = 0.0;
      for (std::size_t m = s.size(); m-- > 0;) {
        d = d * u + v;
        v = v * u + s[m];
      }
      if (d == 0.0) break;
      u -= v / d;
    }
    return u;
  }
};

inline complex cs_zeta(double r, double theta) { return std::polar(std::tanh(r), theta); }

/// y = -1/2 (1 - zeta)/(1 + zeta).
inline complex cs_y(double r, double theta) {
  const complex z = cs_zeta(r, theta);
  return -0.5 * (1.0 - z) / (1.0 + z);
}

/// Y = (cosh 2r + sinh 2r cos theta)^{-1}.
inline double cs_Y(double r, double theta) {
  return 1.0 / (std::cosh(2.0 * r) + std::sinh(2.0 * r) * std::cos(theta));
}

inline void check_zeta(double r, double theta) {
  su11::detail::require(std::isfinite(r) && r >= 0.0 && std::isfinite(theta), "cs: r must be finite and >= 0");
  su11::detail::require(std::abs(1.0 + cs_zeta(r, theta)) > 1e-14, "cs: zeta = -1 is singular");
}

/// Perelomov state D(alpha)|k,0> in position space.
inline ClosedForm psi2_form(const CSParams& cs, double r, double theta) {
  check_zeta(r, theta);
  const complex z = cs_zeta(r, theta);
  const double k = cs.k();
  // sqrt(2/Gamma(lambda+1/2)) (1-|zeta|^2)^k (1+zeta)^{-2k}
  const complex pref = std::exp(0.5 * std::log(2.0) - 0.5 * std::lgamma(cs.lambda() + 0.5) +
                                k * std::log(1.0 - std::norm(z)) - 2.0 * k * std::log(1.0 + z));
  return ClosedForm{{pref}, cs_y(r, theta), cs.lambda()};
}

inline complex psi2(const CSParams& cs, double r, double theta, double x) {
  su11::detail::require(x > 0.0, "psi2: x must be > 0");
  return psi2_form(cs, r, theta)(x);
}

/// A = (lambda + 1/2)(cos theta - i cosh 2r sin theta).
inline complex m1_A(const CSParams& cs, double r, double theta) {
  return (cs.lambda() + 0.5) * complex(std::cos(theta), -std::cosh(2.0 * r) * std::sin(theta));
}

/// |C0'|^2 = 2 (|A|^2 G(l+1/2)/Y^{l+1/2} + (A+A*) s G(l+3/2)/Y^{l+3/2} + s^2 G(l+5/2)/Y^{l+5/2})^{-1},
/// s = sinh 2r; evaluated with a common Gamma(l+1/2)/Y^{l+1/2} factored out.
inline double c0prime_abs2(const CSParams& cs, double r, double theta) {
  const double l = cs.lambda(), Y = cs_Y(r, theta), s = std::sinh(2.0 * r);
  const complex A = m1_A(cs, r, theta);
  const double a1 = (l + 0.5) / Y;
  const double a2 = a1 * (l + 1.5) / Y;
  const double bracket = std::norm(A) + 2.0 * A.real() * s * a1 + s * s * a2;
  const double log_base = std::lgamma(l + 0.5) - (l + 0.5) * std::log(Y);
  return 2.0 * std::exp(-log_base) / bracket;
}

/// Psi_2^(1) = C0' (A + sinh(2r) x^2) x^lambda exp(y x^2), C0' real positive.
inline ClosedForm psi2_m1_form(const CSParams& cs, double r, double theta) {
  check_zeta(r, theta);
  const double c0 = std::sqrt(c0prime_abs2(cs, r, theta));
  return ClosedForm{{c0 * m1_A(cs, r, theta), complex(c0 * std::sinh(2.0 * r))}, cs_y(r, theta), cs.lambda()};
}

inline complex psi2_m1(const CSParams& cs, double r, double theta, double x) {
  su11::detail::require(x > 0.0, "psi2_m1: x must be > 0");
  return psi2_m1_form(cs, r, theta)(x);
}

inline double density_perelomov(const CSParams& cs, double r, double theta, double x) {
  return psi2_form(cs, r, theta).density(x);
}

inline double density_m1(const CSParams& cs, double r, double theta, double x) {
  return psi2_m1_form(cs, r, theta).density(x);
}

inline std::vector<Peak> density_peaks(const CSParams& cs, double r, double theta, int M) {
  su11::detail::require(M == 0 || M == 1, "density_peaks: closed forms exist for M = 0, 1 only");
  const auto form = M == 0 ? psi2_form(cs, r, theta) : psi2_m1_form(cs, r, theta);
  auto peaks = form.peaks();
  if (peaks.empty()) throw NumericError("density_peaks: no positive maximum found");
  return peaks;
}

/// E = 2k cosh 2r, twice <J0> in the Perelomov state.
inline double cs_energy(const CSParams& cs, double r) { return 2.0 * cs.k() * std::cosh(2.0 * r); }

/// Radial position on the classical orbit of energy E at phase theta,
///   x_cl^2 = E + sqrt(E^2 - 2 G^2) cos theta.
inline double classical_trajectory(const CSParams& cs, double E, double theta) {
  const double g2x2 = 2.0 * cs.g2();
  su11::detail::require(E > 0.0 && E * E >= g2x2 * (1.0 - 1e-14),
                        "classical_trajectory: E is below the potential minimum");
  return std::sqrt(E + std::sqrt(std::max(0.0, E * E - g2x2)) * std::cos(theta));
}

/// Upper integration limit: e^{-Y u} beats the polynomial by ~ e^{-50}.
inline double integration_limit(const CSParams& cs, double Y, int M) {
  const double p = cs.lambda() + 2.0 * M;
  return std::sqrt((p + 40.0 + 12.0 * std::sqrt(p)) / Y);
}

inline double density_norm(const ClosedForm& f, int M = 1) {
  const double x_max = integration_limit(CSParams::from_lambda(f.lambda), f.decay(), M);
  return special::integrate_adaptive([&](double x) { return f.density(x); }, 0.0, x_max, 1e-13).value;
}

/// Full width at half maximum of the highest peak, by bisection on either side.
inline double half_max_width(const ClosedForm& f) {
  const auto peaks = f.peaks();
  if (peaks.empty()) throw NumericError("half_max_width: no peak");
  const Peak top = peaks.front();
  const double half = 0.5 * top.height;
  auto crossing = [&](double inside, double outside) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (inside + outside);
      (f.density(mid) >= half ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
  };
  const double far = integration_limit(CSParams::from_lambda(f.lambda), f.decay(), static_cast<int>(f.a.size()));
  return crossing(top.x, far) - crossing(top.x, 0.0);
}

// ---------------------------------------------------------------------------
// General cut-off order M

struct CSWaveState {
  CSParams cs;
  StateVector fock;
  ClosedForm closed_form;
  double fit_residual;
};

/// Truncation for the Fock sum; coefficients decay like tanh(r)^n n^{2k-1}.
inline std::size_t cs_fock_dim(const CSParams& cs, double r, std::size_t M) {
  const double t = std::tanh(r);
  std::size_t dim = 200;
  if (t > 0.0)
    dim = std::max(dim, static_cast<std::size_t>(std::ceil(std::log(1e-22) / std::log(t))) + M +
                            static_cast<std::size_t>(8.0 * cs.k()) + 40);
  return dim;
}

/// E(M, alpha) Psi_2 as sum_n C_n psi_n(x) from the bridge-operator state, plus the
/// polynomial-times-Gaussian record fitted to it. Throws NumericError when the fit
/// residual exceeds 1e-8.
inline CSWaveState psi_general_m(const CSParams& cs, double r, double theta, std::size_t M) {
  check_zeta(r, theta);
  const RepLabel rep(cs.k(), cs_fock_dim(cs, r, M));
  StateOptions opts;
  opts.tail_tol = 1e-18;
  StateVector fock = bridge_operator_state(M, std::polar(r, theta), rep, opts);

  const complex y = cs_y(r, theta);
  const double Y = -2.0 * y.real();
  // Sample where the Gaussian factor is still well above round-off.
  const double u_hi = (cs.lambda() + 2.0 * M + 12.0 + 6.0 * std::sqrt(cs.lambda() + 2.0 * M)) / Y;
  const double u_lo = std::min(0.05, 0.01 * u_hi);
  const std::size_t samples = 4 * (M + 1) + 24;
  std::vector<double> us(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double c = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(samples));
    us[i] = u_lo + 0.5 * (u_hi - u_lo) * (1.0 - c);
  }
  const auto n_rows = static_cast<Eigen::Index>(samples), n_cols = static_cast<Eigen::Index>(M + 1);
  Eigen::MatrixXcd design(n_rows, n_cols);
  Eigen::VectorXcd rhs(n_rows), sums(n_rows);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const double u = us[static_cast<std::size_t>(i)], x = std::sqrt(u);
    const complex g = std::exp(cs.lambda() * std::log(x) + y * u);
    sums[i] = fock_sum(fock.coeffs(), cs, x);
    // Rows weighted by the Gaussian so the fit is in the natural norm.
    double v = 1.0;
    for (Eigen::Index j = 0; j < n_cols; ++j) {
      design(i, j) = g * v;
      v *= u / u_hi;
    }
    rhs[i] = sums[i];
  }
  const Eigen::VectorXcd sol = design.colPivHouseholderQr().solve(rhs);
  const double scale = rhs.cwiseAbs().maxCoeff();
  const double resid = (design * sol - rhs).cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);

  ClosedForm form{std::vector<complex>(M + 1), y, cs.lambda()};
  double unscale = 1.0;
  for (std::size_t j = 0; j <= M; ++j) {
    form.a[j] = sol[static_cast<Eigen::Index>(j)] * unscale;
    unscale /= u_hi;
  }
  if (!(resid < 1e-8))
    throw NumericError("psi_general_m: polynomial-Gaussian fit residual " + su11::detail::sci(resid) +
                       " exceeds 1e-8");
  return CSWaveState{cs, std::move(fock), std::move(form), resid};
}

// ---------------------------------------------------------------------------
// Figure data

struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;  // 0: automatic, from the integration limit
  std::size_t points = 1001;
};

struct FigureRow {
  double x, density_perelomov, density_m1;
};

struct FigureTable {
  double lambda, r, theta;
  double Y;
  complex A;
  double x_cl;
  std::vector<Peak> peaks_m1;
  std::vector<Peak> peaks_perelomov;
  double norm_perelomov;  // adaptive quadrature on the half-line
  double norm_m1;
  double grid_norm_m1;    // panel quadrature tied to the emitted grid
  std::vector<FigureRow> rows;
};

/// Composite 8-point Gauss-Legendre over consecutive grid cells.
inline double grid_quadrature(const ClosedForm& f, const std::vector<double>& xs) {
  const special::GaussLegendre rule(8);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) s += rule.integrate([&](double x) { return f.density(x); }, xs[i], xs[i + 1]);
  return s;
}

inline std::vector<double> grid_points(const Grid& g) {
  su11::detail::require(g.points >= 2 && g.x_max > g.x_min && g.x_min >= 0.0, "figure_data: invalid grid");
  std::vector<double> xs(g.points);
  const double h = (g.x_max - g.x_min) / static_cast<double>(g.points - 1);
  for (std::size_t i = 0; i < g.points; ++i) xs[i] = g.x_min + h * static_cast<double>(i);
  xs.back() = g.x_max;
  return xs;
}

inline FigureTable figure_data(const CSParams& cs, double r, double theta, Grid grid = {}) {
  const ClosedForm f0 = psi2_form(cs, r, theta);
  const ClosedForm f1 = psi2_m1_form(cs, r, theta);
  FigureTable t;
  t.lambda = cs.lambda();
  t.r = r;
  t.theta = theta;
  t.Y = cs_Y(r, theta);
  t.A = m1_A(cs, r, theta);
  t.x_cl = classical_trajectory(cs, cs_energy(cs, r), theta);
  t.peaks_m1 = f1.peaks();
  t.peaks_perelomov = f0.peaks();
  t.norm_perelomov = density_norm(f0, 0);
  t.norm_m1 = density_norm(f1, 1);
  if (grid.x_max == 0.0) grid.x_max = integration_limit(cs, t.Y, 1);
  const auto xs = grid_points(grid);
  t.grid_norm_m1 = grid_quadrature(f1, xs);
  t.rows.reserve(xs.size());
  for (double x : xs) t.rows.push_back({x, f0.density(x), f1.density(x)});
  return t;
}

struct FigurePreset {
  int figure;
  double lambda, r, theta;
};

/// Figures 1-3: lambda = 9.5, r = 0.951; figures 4-6: lambda = 1.1, r = 0.69; theta = 0, -pi/2, -pi.
inline FigurePreset figure_preset(int figure) {
  su11::detail::require(figure >= 1 && figure <= 6, "figure preset must be 1..6");
  const bool strong = figure <= 3;
  const double theta = -0.5 * std::numbers::pi * static_cast<double>((figure - 1) % 3);
  return {figure, strong ? 9.5 : 1.1, strong ? 0.951 : 0.69, theta};
}

}  // namespace su11::cs
