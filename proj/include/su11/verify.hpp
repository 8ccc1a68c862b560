#pragma once

// Named verification suites. Each check yields {check, params, residual, threshold, pass};
// pass means residual <= threshold. Pseudo-random parameters come from a fixed seed.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "su11/convergence.hpp"
#include "su11/realizations.hpp"
#include "su11/squeezed.hpp"

namespace su11::verify {

using Params = std::vector<std::pair<std::string, double>>;

struct CheckResult {
  std::string check;
  Params params;
  double residual;
  double threshold;
  bool pass;
};

inline CheckResult make_check(std::string check, Params params, double residual, double threshold) {
  const bool pass = std::isfinite(residual) && residual <= threshold;
  return {std::move(check), std::move(params), residual, threshold, pass};
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"eigen", "uncertainty", "bch", "appendix-b", "realizations", "radius", "all"};
  return names;
}

struct SuiteOptions {
  std::optional<double> k, r, theta;
  std::uint64_t seed = 20240611;
  /// Lower bound on truncations; 0 keeps the automatic choice.
  std::size_t min_dim = 0;
};

/// Uniform doubles in [0, 1) from the top 53 bits, identical on every platform.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  std::mt19937_64 gen_;
};

struct LadderCase {
  double k;
  complex mu, nu, beta;
};

/// k in [0.25, 5], |nu/mu| in [0, 0.9], beta uniform in the unit disk.
inline std::vector<LadderCase> ladder_cases(std::size_t count, std::uint64_t seed) {
  Uniform u(seed);
  std::vector<LadderCase> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    LadderCase c{};
    c.k = u(0.25, 5.0);
    c.mu = std::polar(u(0.5, 2.0), u(-std::numbers::pi, std::numbers::pi));
    c.nu = -c.mu * std::polar(u(0.0, 0.9), u(-std::numbers::pi, std::numbers::pi));
    c.beta = std::polar(std::sqrt(u()), u(-std::numbers::pi, std::numbers::pi));
    out.push_back(c);
  }
  return out;
}

inline StateVector ladder_state(const LadderCase& c, std::size_t min_dim = 0) {
  const auto p = SqueezeParams::from_eigenproblem(c.mu, c.nu, c.beta);
  const std::size_t dim = std::max(min_dim, suggested_output_dim(p, 0, 1e-20));
  return displaced_state(p, RepLabel(c.k, dim));
}

inline Params ladder_params(const LadderCase& c) {
  return {{"k", c.k},
          {"mu_re", c.mu.real()},
          {"mu_im", c.mu.imag()},
          {"nu_re", c.nu.real()},
          {"nu_im", c.nu.imag()},
          {"beta_re", c.beta.real()},
          {"beta_im", c.beta.imag()}};
}

/// Random normalized state with complex Gaussian-like components on dim levels.
inline StateVector random_state(double k, std::size_t dim, Uniform& u) {
  std::vector<complex> c(dim);
  for (auto& x : c) x = std::polar(std::sqrt(-2.0 * std::log(1.0 - u())), u(0.0, 2.0 * std::numbers::pi));
  return StateVector(RepLabel(k, dim), std::move(c)).normalized();
}

// ---------------------------------------------------------------------------

inline void perelomov_entry(std::vector<CheckResult>& out, double k, double r, double theta, std::size_t min_dim) {
  const std::size_t dim =
      std::max<std::size_t>(min_dim, static_cast<std::size_t>(std::ceil(std::log(1e-40) / std::log(std::tanh(r)))) + 80);
  const EigenCheck e = perelomov_eigen_check(std::polar(r, theta), RepLabel(k, dim));
  const Params params{{"k", k}, {"r", r}, {"theta", theta}};
  out.push_back(make_check("perelomov-eigenvalue", params, std::abs(e.rayleigh - e.eigenvalue), 1e-10));
  out.push_back(make_check("perelomov-residual", params, e.residual, 1e-10));
}

inline std::vector<CheckResult> eigen_suite(const SuiteOptions& o = {}) {
  std::vector<CheckResult> out;
  if (o.k || o.r || o.theta) {
    perelomov_entry(out, o.k.value_or(0.5), o.r.value_or(0.5), o.theta.value_or(0.0), o.min_dim);
    return out;
  }
  for (const auto& c : ladder_cases(20, o.seed)) {
    const StateVector s = ladder_state(c, o.min_dim);
    out.push_back(make_check("ladder-eigen", ladder_params(c), ladder_residual(s, c.mu, c.nu, c.beta), 1e-9));
  }
  for (double k : {0.5, 0.75, 2.0})
    for (double r : {0.2, 0.6, 1.2})
      for (double theta : {-1.0, 0.0, 2.0}) perelomov_entry(out, k, r, theta, o.min_dim);

  // Case 1: beta' = -e^{i theta} sinh(2r) k.
  for (double k : {0.5, 1.25}) {
    const double r = 0.45, theta = 0.7;
    const auto p = SqueezeParams::from_transformed(r, theta, -std::polar(std::sinh(2.0 * r) * k, theta));
    const RepLabel rep(k, std::max<std::size_t>(o.min_dim, 400));
    const Params params{{"k", k}, {"r", r}, {"theta", theta}};
    out.push_back(make_check("case1-recursion", params,
                             phase_aligned_distance(solve_recursion(p, rep), perelomov_state(-2.0 * p.alpha(), rep)),
                             1e-10));
    out.push_back(make_check("case1-displaced", params,
                             phase_aligned_distance(displaced_state(p, rep), perelomov_state(-p.alpha(), rep)), 1e-10));
  }
  // Laguerre cut-off: every coefficient beyond M is exactly zero.
  for (std::size_t M : {0u, 1u, 2u, 5u})
    for (double k : {0.5, 0.75, 2.0}) {
      const double r = 0.5, theta = -0.4;
      const auto p = SqueezeParams::from_transformed(r, theta, laguerre_beta_prime(M, r, theta, k));
      const StateVector s = solve_recursion(p, RepLabel(k, 64));
      double beyond = 0.0;
      for (std::size_t n = M + 1; n < s.dim(); ++n) beyond += std::abs(s[n]);
      out.push_back(make_check("laguerre-cutoff", {{"M", double(M)}, {"k", k}, {"r", r}, {"theta", theta}}, beyond, 0.0));
    }
  // Bridge operator against the displaced Laguerre state.
  for (std::size_t M : {0u, 1u, 2u}) {
    const double k = 0.75, r = 0.6, theta = 1.1;
    const auto p = SqueezeParams::from_transformed(r, theta, laguerre_beta_prime(M, r, theta, k));
    const RepLabel rep(k, std::max<std::size_t>(o.min_dim, 300));
    out.push_back(make_check("bridge-route", {{"M", double(M)}, {"k", k}, {"r", r}, {"theta", theta}},
                             phase_aligned_distance(bridge_operator_state(M, p.alpha(), rep), displaced_state(p, rep)),
                             1e-9));
  }
  return out;
}

inline std::vector<CheckResult> uncertainty_suite(const SuiteOptions& o = {}) {
  std::vector<CheckResult> out;
  for (const auto& c : ladder_cases(20, o.seed)) {
    const UncertaintyReport u = uncertainty_report(ladder_state(c, o.min_dim));
    out.push_back(make_check("sr-saturation", ladder_params(c), std::abs(u.sr_gap), 1e-8));
  }
  Uniform u(o.seed ^ 0x5bd1e995u);
  for (std::size_t i = 0; i < 100; ++i) {
    const double k = u(0.25, 5.0);
    const auto dim = static_cast<std::size_t>(u(2.0, 40.0));
    const UncertaintyReport rep = uncertainty_report(random_state(k, dim, u));
    // Inequality direction: the residual is the amount by which the bound is violated.
    out.push_back(make_check("sr-inequality", {{"k", k}, {"dim", double(dim)}, {"gap", rep.sr_gap}},
                             std::max(0.0, -rep.sr_gap), 1e-9));
  }
  return out;
}

inline std::vector<CheckResult> bch_suite(const SuiteOptions& = {}) {
  std::vector<CheckResult> out;
  const std::vector<std::pair<double, complex>> cases{
      {0.5, 0.0}, {0.5, 0.8}, {0.5, std::polar(1.2, -2.0)}, {1.0, std::polar(1.0, 0.5)}, {5.0, std::polar(1.2, 0.3)}};
  for (const auto& [k, alpha] : cases) {
    const std::size_t dim = k > 1.0 ? 300 : 200;
    const BchCheck b = bch_identity_check(alpha, RepLabel(k, dim));
    out.push_back(make_check("bch-identity",
                             {{"k", k}, {"alpha_re", alpha.real()}, {"alpha_im", alpha.imag()}, {"dim", double(dim)}},
                             b.max_error, 1e-9));
  }
  return out;
}

inline std::vector<CheckResult> appendix_b_suite(const SuiteOptions& o = {}) {
  std::vector<CheckResult> out;
  const double k = o.k.value_or(0.5), r = o.r.value_or(0.3), theta = o.theta.value_or(0.0);
  const RepLabel rep(k, std::max<std::size_t>(o.min_dim, 200));
  const Params params{{"k", k}, {"r", r}, {"theta", theta}};
  const AppendixBCheck a = appendix_b_check(r, theta, rep, 1e-5);
  out.push_back(make_check("derivative-generator", params, a.residual_generator, 1e-7));
  out.push_back(make_check("derivative-normal-ordered", params, a.residual_normal, 1e-7));
  out.push_back(make_check("derivative-forms-agree", params, appendix_b_consistency(r, theta, rep), 1e-12));
  const AppendixBCheck coarse = appendix_b_check(r, theta, rep, 1e-4);
  const AppendixBCheck fine = appendix_b_check(r, theta, rep, 5e-5);
  // Halving h divides an O(h^2) error by 4.
  const double order = std::log2(coarse.residual_generator / fine.residual_generator);
  out.push_back(make_check("derivative-order", params, std::abs(order - 2.0), 0.1));
  return out;
}

inline std::vector<CheckResult> realizations_suite(const SuiteOptions& = {}) {
  using namespace su11::optics;
  std::vector<CheckResult> out;
  const std::vector<Realization> reals{Realization(HP{0.75}),          Realization(AmplitudeSquared{0}),
                                       Realization(AmplitudeSquared{1}), Realization(TwoMode{3, 1}),
                                       Realization(TwoMode{2, -1}),      Realization(FourMode{1, 0, 1})};
  for (const auto& real : reals) {
    double worst = 0.0;
    for (std::size_t n = 0; n <= 30; ++n) worst = std::max(worst, matrix_element_check(real, n).max());
    out.push_back(make_check("matrix-elements-" + real.name(), {{"k", real.effective_k()}, {"n_max", 30.0}}, worst, 1e-13));
  }
  for (int p1 = 0; p1 <= 2; ++p1)
    for (int p2 = 0; p2 <= 2; ++p2)
      for (int n = 0; n <= 2; ++n) {
        if (p1 + p2 + n > 4) continue;
        const FockState v = cg_vacuum(p1, p2, n);
        const Realization real(FourMode{p1, p2, n});
        const Params params{{"p1", double(p1)}, {"p2", double(p2)}, {"n", double(n)}};
        out.push_back(make_check("cg-vacuum-norm", params, std::abs(v.norm2() - 1.0), 1e-12));
        out.push_back(make_check("cg-vacuum-annihilated", params, std::sqrt(real.jminus(v).norm2()), 1e-12));
      }
  return out;
}

inline std::vector<CheckResult> radius_suite(const SuiteOptions& = {}) {
  std::vector<CheckResult> out;
  for (double k : {0.5, 1.0, 4.5})
    for (std::size_t n : {0u, 1u, 5u}) {
      const double rho = radius_estimate(subseries_coefficients(k, n, 500));
      out.push_back(make_check("displacement-radius", {{"k", k}, {"n", double(n)}, {"m_max", 500.0}, {"radius", rho}},
                               std::abs(rho - 2.0), 0.02));
    }
  for (std::size_t power : {3u, 4u}) {
    const double rho = radius_estimate(higher_power_subseries(power, 200));
    out.push_back(make_check("power-radius", {{"power", double(power)}, {"m_max", 200.0}}, rho, 0.05));
  }
  return out;
}

/// Throws DomainError for an unknown suite name.
inline std::vector<CheckResult> run_suite(const std::string& name, const SuiteOptions& o = {}) {
  if (name == "eigen") return eigen_suite(o);
  if (name == "uncertainty") return uncertainty_suite(o);
  if (name == "bch") return bch_suite(o);
  if (name == "appendix-b") return appendix_b_suite(o);
  if (name == "realizations") return realizations_suite(o);
  if (name == "radius") return radius_suite(o);
  if (name == "all") {
    std::vector<CheckResult> out;
    for (const auto& s : suite_names()) {
      if (s == "all") continue;
      auto part = run_suite(s, o);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw DomainError("verify: unknown suite '" + name + "'");
}

}  // namespace su11::verify
