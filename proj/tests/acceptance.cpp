// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "su11/su11.hpp"
#include "su11/verify.hpp"

using namespace su11;
using verify::CheckResult;

namespace {

constexpr double pi = std::numbers::pi;

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Line> report;

void record(int id, std::string name, bool pass, std::string detail) {
  std::printf("[%s] criterion %2d %-26s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  report.push_back({id, std::move(name), pass, std::move(detail)});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

/// Checks whose name starts with prefix: {count, all pass, worst residual}.
struct Group {
  std::size_t count = 0;
  bool pass = true;
  double worst = 0.0;
};

Group group(const std::vector<CheckResult>& checks, const std::string& prefix) {
  Group g;
  for (const auto& c : checks) {
    if (c.check.rfind(prefix, 0) != 0) continue;
    ++g.count;
    g.pass = g.pass && c.pass;
    g.worst = std::max(g.worst, std::isnan(c.residual) ? INFINITY : c.residual);
  }
  g.pass = g.pass && g.count > 0;
  return g;
}

/// Largest |f - g| over [a, b] after removing the global phase, relative to max |g|.
double aligned_gap(const std::function<complex(double)>& f, const std::function<complex(double)>& g, double a, double b,
                   int points = 400) {
  std::vector<complex> fv(points), gv(points);
  int imax = 0;
  for (int i = 0; i < points; ++i) {
    const double x = a + (b - a) * i / (points - 1);
    fv[i] = f(x);
    gv[i] = g(x);
    if (std::abs(gv[i]) > std::abs(gv[imax])) imax = i;
  }
  const complex ph = gv[imax] / fv[imax] / std::abs(gv[imax] / fv[imax]);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) worst = std::max(worst, std::abs(fv[i] * ph - gv[i]));
  return worst / std::abs(gv[imax]);
}

void criteria_1_to_6() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool ok = true;
  for (const auto& c : verify::ladder_cases(20, verify::SuiteOptions{}.seed)) {
    const double res = ladder_residual(verify::ladder_state(c), c.mu, c.nu, c.beta);
    worst = std::max(worst, res);
    ok = ok && res < 1e-9;
  }
  const double t1 = seconds_since(t0);
  record(1, "eigen-residual", ok && t1 < 10.0, fmt("20 cases, worst %.2e (< 1e-9), %.2f s (< 10 s)", worst, t1));

  const auto eigen = verify::run_suite("eigen");
  const Group val = group(eigen, "perelomov-eigenvalue"), res = group(eigen, "perelomov-residual");
  record(2, "perelomov-is-squeezed", val.pass && res.pass && val.count == 27,
         fmt("%.0f grid points, eigenvalue %.2e, residual %.2e (< 1e-10)", double(val.count), val.worst, res.worst));

  const Group case1 = group(eigen, "case1-");
  record(3, "case-1-identity", case1.pass, fmt("%.0f checks, worst %.2e (< 1e-10)", double(case1.count), case1.worst));

  const Group cut = group(eigen, "laguerre-cutoff");
  record(4, "laguerre-cutoff", cut.pass && cut.count == 12,
         fmt("%.0f (M, k) pairs, sum |C_n| beyond M = %.1e (exact 0)", double(cut.count), cut.worst));

  const Group bridge = group(eigen, "bridge-route");
  record(5, "route-equivalence", bridge.pass && bridge.count == 3,
         fmt("M = 0,1,2, worst %.2e (< 1e-9)", bridge.worst));

  const auto sr = verify::run_suite("uncertainty");
  const Group sat = group(sr, "sr-saturation"), ineq = group(sr, "sr-inequality");
  record(6, "sr-saturation", sat.pass && ineq.pass && sat.count == 20 && ineq.count == 100,
         fmt("|gap| on eigenstates %.2e (<= 1e-8), worst violation on random states %.2e (<= 1e-9)", sat.worst,
             ineq.worst));
}

void criterion_7() {
  using namespace su11::cs;
  bool ok = true;
  std::string detail;
  double worst_norm = 0.0, slowest = 0.0;
  for (int fig = 1; fig <= 6; ++fig) {
    const auto t0 = std::chrono::steady_clock::now();
    const FigurePreset p = figure_preset(fig);
    const CSParams csp = CSParams::from_lambda(p.lambda);
    const FigureTable t = figure_data(csp, p.r, p.theta);
    const double n0 = density_norm(psi2_form(csp, p.r, p.theta), 0);
    const double n1 = density_norm(psi2_m1_form(csp, p.r, p.theta), 1);
    const double dt = seconds_since(t0);
    (void)t;
    worst_norm = std::max({worst_norm, std::abs(n0 - 1.0), std::abs(n1 - 1.0)});
    slowest = std::max(slowest, dt);
  }
  ok = ok && worst_norm < 1e-8 && slowest < 5.0;
  detail += fmt("norms |int - 1| <= %.1e, slowest preset %.2f s; ", worst_norm, slowest);

  for (auto [lambda, r] : {std::pair{9.5, 0.951}, std::pair{1.1, 0.69}}) {
    const CSParams csp = CSParams::from_lambda(lambda);
    const double h0 = density_peaks(csp, r, 0.0, 1).front().height;
    const double h1 = density_peaks(csp, r, -pi / 2, 1).front().height;
    const double h2 = density_peaks(csp, r, -pi, 1).front().height;
    const bool mono = h0 < h1 && h1 < h2;
    ok = ok && mono;
    detail += fmt("lambda=%.1f heights %.3f < %.3f", lambda, h0, h1) + fmt(" < %.3f; ", h2) + (mono ? "" : "(not monotone) ");
  }

  const FigurePreset p3 = figure_preset(3);
  const CSParams cs3 = CSParams::from_lambda(p3.lambda);
  const auto peaks = density_peaks(cs3, p3.r, p3.theta, 1);
  const double x_cl = classical_trajectory(cs3, cs_energy(cs3, p3.r), p3.theta);
  const double offset = std::abs(peaks.front().x - x_cl) / x_cl;
  const bool one = peaks.size() == 1;
  ok = ok && one && offset < 0.05;
  detail += fmt("fig 3: %.0f maxima (need 1), main peak at %.4f vs x_cl %.4f", double(peaks.size()), peaks.front().x, x_cl) +
            fmt(" (offset %.2f%%, < 5%%)", 100.0 * offset);
  if (!one) {
    detail += ", others at";
    for (std::size_t i = 1; i < peaks.size(); ++i) detail += fmt(" x=%.3f h=%.2e", peaks[i].x, peaks[i].height);
  }
  record(7, "cs-figure-reproduction", ok, detail);
}

void criterion_8() {
  using namespace su11::cs;
  double worst0 = 0.0, worst1 = 0.0;
  for (auto [lambda, r] : {std::pair{9.5, 0.951}, std::pair{1.1, 0.69}})
    for (double theta : {0.0, -pi / 2, -pi}) {
      const CSParams csp = CSParams::from_lambda(lambda);
      const StateVector c0 = perelomov_state(std::polar(r, theta), RepLabel(csp.k(), cs_fock_dim(csp, r, 0)));
      const StateVector c1 = bridge_operator_state(1, std::polar(r, theta), RepLabel(csp.k(), cs_fock_dim(csp, r, 1)));
      worst0 = std::max(worst0, aligned_gap([&](double x) { return fock_sum(c0.coeffs(), csp, x); },
                                            [&](double x) { return psi2(csp, r, theta, x); }, 0.1, 8.0));
      worst1 = std::max(worst1, aligned_gap([&](double x) { return fock_sum(c1.coeffs(), csp, x); },
                                            [&](double x) { return psi2_m1(csp, r, theta, x); }, 0.1, 8.0));
    }
  record(8, "closed-form-vs-fock-sum", worst0 < 1e-7 && worst1 < 1e-7,
         fmt("x in [0.1, 8], six presets, M=0 %.2e, M=1 %.2e (< 1e-7)", worst0, worst1));
}

void criterion_9() {
  const auto checks = verify::run_suite("realizations");
  const Group me = group(checks, "matrix-elements-"), norm = group(checks, "cg-vacuum-norm"),
              ann = group(checks, "cg-vacuum-annihilated");
  record(9, "realization-matrix-elements", me.pass && norm.pass && ann.pass,
         fmt("n <= 30 worst %.2e (< 1e-13); CG vacuum norm %.2e, annihilation %.2e (< 1e-12)", me.worst, norm.worst,
             ann.worst));
}

void criterion_10() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto radius = verify::run_suite("radius");
  const auto bch = verify::run_suite("bch");
  const double dt = seconds_since(t0);
  const Group disp = group(radius, "displacement-radius"), power = group(radius, "power-radius"),
              b = group(bch, "bch-identity");
  const double rho = radius_estimate(subseries_coefficients(0.5, 0, 500));
  record(10, "series-radius", disp.pass && power.pass && b.pass && dt < 5.0,
         fmt("rho(k=1/2,n=0) = %.4f, max |rho - 2| = %.1e (<= 0.02), ", rho, disp.worst) +
             fmt("power >= 3 rho <= %.1e (< 0.05), BCH %.1e (< 1e-9), ", power.worst, b.worst) + fmt("%.2f s (< 5 s)", dt));
}

void criterion_11() {
  const auto checks = verify::run_suite("appendix-b");
  const Group gen = group(checks, "derivative-generator"), normal = group(checks, "derivative-normal-ordered"),
              order = group(checks, "derivative-order");
  record(11, "finite-difference-derivative", gen.pass && normal.pass && order.pass,
         fmt("generator %.2e, normal-ordered %.2e (< 1e-7), |order - 2| = %.3f", gen.worst, normal.worst, order.worst));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> steps{criteria_1_to_6, criterion_7, criterion_8,
                                                 criterion_9,     criterion_10, criterion_11};
  for (const auto& step : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      record(static_cast<int>(report.size()) + 1, "exception", false, e.what());
    }
  }
  int failed = 0;
  for (const auto& l : report) failed += l.pass ? 0 : 1;
  std::printf("%zu criteria, %d passed, %d failed\n", report.size(), static_cast<int>(report.size()) - failed, failed);
  return failed == 0 ? 0 : 1;
}
