// su11: command-line front end.
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numeric or truncation failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "su11/io.hpp"
#include "su11/su11.hpp"

namespace {

using su11::complex;
using json = su11::io::json;

constexpr int kOk = 0, kVerifyFailed = 1, kUsage = 2, kNumeric = 3;

struct Output {
  std::string path;
  bool stamp = false;
};

std::string utc_stamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x == 0.0 ? 0.0 : x);
  return buf;
}

void emit(const Output& out, const std::string& body) {
  if (out.path.empty() || out.path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream f(out.path, std::ios::binary);
  if (!f) throw su11::DomainError("cannot open output file '" + out.path + "'");
  f << body;
}

std::string csv_preamble(const Output& out) {
  std::string s = std::string("# schema: ") + su11::io::schema_version + "\n";
  if (out.stamp) s += "# stamp: " + utc_stamp() + "\n";
  return s;
}

/// First line {"schema": ...}; the remaining lines hold one JSON document.
std::string json_document(const Output& out, json body) {
  json head{{"schema", su11::io::schema_version}};
  if (out.stamp) head["stamp"] = utc_stamp();
  return head.dump() + "\n" + body.dump(2) + "\n";
}

std::optional<std::size_t> env_default_dim() {
  const char* v = std::getenv("SU11_DEFAULT_DIM");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const long long d = std::strtoll(v, &end, 10);
  if (*end != '\0' || d < 2) throw su11::DomainError("SU11_DEFAULT_DIM must be an integer >= 2");
  return static_cast<std::size_t>(d);
}

std::size_t pick_dim(std::size_t flag, std::size_t automatic) {
  if (flag > 0) return flag;
  if (auto env = env_default_dim()) return *env;
  return automatic;
}

double angle(double theta, bool in_pi) { return in_pi ? theta * std::numbers::pi : theta; }

// ---------------------------------------------------------------------------
// state

struct StateArgs {
  double k = 0.0;
  double mu = 1.0, mu_im = 0.0, nu = 0.0, nu_im = 0.0, beta = 0.0, beta_im = 0.0;
  double r = 0.0, theta = 0.0, bp = 0.0, bp_im = 0.0;
  bool theta_pi = false;
  std::optional<std::size_t> M;
  std::string form = "auto";
  std::string method = "auto";
  std::string format = "csv";
  std::size_t dim = 0;
  double tail_tol = 1e-20;
  double alpha_guard = 1.5;
  Output out;
};

su11::DisplacementMethod parse_method(const std::string& m) {
  if (m == "auto") return su11::DisplacementMethod::Auto;
  if (m == "holomorphic") return su11::DisplacementMethod::Holomorphic;
  if (m == "disentangled") return su11::DisplacementMethod::Disentangled;
  return su11::DisplacementMethod::Propagator;
}

int cmd_state(const StateArgs& a, bool eigen_input) {
  using namespace su11;
  if (eigen_input && a.M) throw DomainError("state: --M applies to (r, theta) input only");
  const SqueezeParams p = [&] {
    if (eigen_input)
      return SqueezeParams::from_eigenproblem({a.mu, a.mu_im}, {a.nu, a.nu_im}, {a.beta, a.beta_im});
    const double theta = angle(a.theta, a.theta_pi);
    const complex bp = a.M ? laguerre_beta_prime(*a.M, a.r, theta, a.k) : complex(a.bp, a.bp_im);
    return SqueezeParams::from_transformed(a.r, theta, bp);
  }();
  const std::string form = a.form == "auto" ? (eigen_input ? "full" : "seed") : a.form;
  const std::size_t M = a.M.value_or(0);
  const std::size_t automatic =
      form == "seed" ? suggested_dim(p, M, a.tail_tol) : suggested_output_dim(p, M, a.tail_tol);
  const RepLabel rep(a.k, pick_dim(a.dim, automatic));
  StateOptions opts;
  opts.tail_tol = a.tail_tol;
  opts.alpha_guard = a.alpha_guard;
  opts.method = parse_method(a.method);

  const StateVector s = form == "seed" ? (a.M ? laguerre_state(*a.M, p, rep) : solve_recursion(p, rep, opts))
                                       : displaced_state(p, rep, opts);
  const double residual = form == "seed" ? transformed_residual(s, p) : ladder_residual(s, p.mu(), p.nu(), p.beta());

  if (a.format == "json") {
    json body;
    body["form"] = form;
    body["k"] = a.k;
    body["dim"] = rep.dim();
    body["r"] = p.r();
    body["theta"] = p.theta();
    body["xi"] = io::to_json(p.xi());
    body["beta_prime"] = io::to_json(p.beta_prime());
    body["mu"] = io::to_json(p.mu());
    body["nu"] = io::to_json(p.nu());
    body["beta"] = io::to_json(p.beta());
    body["residual"] = residual;
    body["tail_bound"] = s.tail_bound();
    json rows = json::array();
    for (std::size_t n = 0; n < s.dim(); ++n)
      rows.push_back({{"n", n}, {"re", s[n].real()}, {"im", s[n].imag()}, {"abs2", std::norm(s[n])}});
    body["coefficients"] = rows;
    emit(a.out, json_document(a.out, body));
    return kOk;
  }
  std::ostringstream os;
  os << csv_preamble(a.out);
  os << "# form: " << form << "\n# k: " << num(a.k) << "\n# dim: " << rep.dim() << "\n";
  os << "# r: " << num(p.r()) << "\n# theta: " << num(p.theta()) << "\n";
  os << "# xi: " << num(p.xi().real()) << "," << num(p.xi().imag()) << "\n";
  os << "# beta_prime: " << num(p.beta_prime().real()) << "," << num(p.beta_prime().imag()) << "\n";
  os << "# residual: " << num(residual) << "\n# tail_bound: " << num(s.tail_bound()) << "\n";
  os << "n,re,im,abs2\n";
  for (std::size_t n = 0; n < s.dim(); ++n)
    os << n << "," << num(s[n].real()) << "," << num(s[n].imag()) << "," << num(std::norm(s[n])) << "\n";
  emit(a.out, os.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// cs-fig

struct FigArgs {
  int figure = 0;
  std::optional<double> lambda, coupling;
  std::optional<double> r, theta;
  bool theta_pi = false;
  double x_min = 0.0, x_max = 0.0;
  std::size_t points = 1001;
  Output out;
};

std::string peak_list(const std::vector<su11::cs::Peak>& peaks) {
  std::string s;
  for (const auto& p : peaks) s += (s.empty() ? "" : ";") + num(p.x) + ":" + num(p.height);
  return s.empty() ? "none" : s;
}

int cmd_cs_fig(const FigArgs& a) {
  using namespace su11;
  double lambda = 0.0, r = 0.0, theta = 0.0;
  std::optional<cs::CSParams> cs;
  if (a.figure != 0) {
    if (a.lambda || a.coupling || a.r || a.theta) throw DomainError("cs-fig: --figure excludes explicit parameters");
    const cs::FigurePreset pr = cs::figure_preset(a.figure);
    lambda = pr.lambda;
    r = pr.r;
    theta = pr.theta;
    cs = cs::CSParams::from_lambda(lambda);
  } else {
    if (a.lambda.has_value() == a.coupling.has_value())
      throw DomainError("cs-fig: give exactly one of --lambda and --coupling");
    if (!a.r || !a.theta) throw DomainError("cs-fig: --r and --theta are required without --figure");
    cs = a.lambda ? cs::CSParams::from_lambda(*a.lambda) : cs::CSParams::from_coupling(*a.coupling);
    r = *a.r;
    theta = angle(*a.theta, a.theta_pi);
  }
  const cs::FigureTable t = cs::figure_data(*cs, r, theta, {a.x_min, a.x_max, a.points});
  std::ostringstream os;
  os << csv_preamble(a.out);
  os << "# lambda: " << num(t.lambda) << "\n# r: " << num(t.r) << "\n# theta: " << num(t.theta) << "\n";
  os << "# Y: " << num(t.Y) << "\n# A: " << num(t.A.real()) << "," << num(t.A.imag()) << "\n";
  os << "# x_cl: " << num(t.x_cl) << "\n";
  os << "# peaks_perelomov: " << peak_list(t.peaks_perelomov) << "\n";
  os << "# peaks_m1: " << peak_list(t.peaks_m1) << "\n";
  os << "# norm_perelomov: " << num(t.norm_perelomov) << "\n# norm_m1: " << num(t.norm_m1) << "\n";
  os << "# grid_norm_m1: " << num(t.grid_norm_m1) << "\n";
  os << "x,density_perelomov,density_m1\n";
  for (const auto& row : t.rows)
    os << num(row.x) << "," << num(row.density_perelomov) << "," << num(row.density_m1) << "\n";
  emit(a.out, os.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite = "all";
  std::optional<double> k, r, theta;
  bool theta_pi = false;
  std::uint64_t seed = su11::verify::SuiteOptions{}.seed;
  std::size_t min_dim = 0;
  Output out;
};

int cmd_verify(const VerifyArgs& a) {
  using namespace su11;
  verify::SuiteOptions o;
  o.k = a.k;
  o.r = a.r;
  if (a.theta) o.theta = angle(*a.theta, a.theta_pi);
  o.seed = a.seed;
  if (auto env = env_default_dim()) o.min_dim = *env;
  if (a.min_dim > 0) o.min_dim = a.min_dim;
  const auto checks = verify::run_suite(a.suite, o);
  const bool pass = verify::all_pass(checks);
  json body;
  body["suite"] = a.suite;
  body["pass"] = pass;
  body["checks"] = io::to_json(checks);
  emit(a.out, json_document(a.out, body));
  return pass ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// realization

struct RealizationArgs {
  std::string kind;
  std::optional<double> k;
  int j = 0, p = 0, p1 = 0, p2 = 0, n = 0;
  std::string sign = "+";
  std::optional<std::size_t> basis;
  bool perelomov = false;
  double r = 0.0, theta = 0.0;
  bool theta_pi = false;
  std::size_t trunc = 0;
  Output out;
};

int cmd_realization(const RealizationArgs& a) {
  using namespace su11;
  using namespace su11::optics;
  if (a.sign != "+" && a.sign != "-") throw DomainError("realization: --sign must be + or -");
  const Realization real = [&] {
    if (a.kind == "hp") {
      if (!a.k) throw DomainError("realization: --kind hp needs --k");
      return Realization(HP{*a.k});
    }
    if (a.kind == "amp2") return Realization(AmplitudeSquared{a.j});
    if (a.kind == "two-mode") return Realization(TwoMode{a.p, a.sign == "+" ? 1 : -1});
    return Realization(FourMode{a.p1, a.p2, a.n});
  }();
  const double k = real.effective_k();
  if (a.k && std::abs(*a.k - k) > 1e-12)
    throw DomainError("realization: --k " + num(*a.k) + " does not match k = " + num(k) + " of " + real.name());
  if (a.perelomov && a.basis) throw DomainError("realization: --basis and --perelomov are exclusive");

  std::string state_desc;
  StateVector abstract(RepLabel(k, 2));
  if (a.perelomov) {
    const double theta = angle(a.theta, a.theta_pi);
    const double t = std::tanh(a.r);
    const std::size_t automatic =
        t > 0.0 ? static_cast<std::size_t>(std::ceil(std::log(1e-20) / std::log(t))) + 20 : 2;
    abstract = perelomov_state(std::polar(a.r, theta), RepLabel(k, pick_dim(a.trunc, std::max<std::size_t>(automatic, 2))));
    state_desc = "perelomov";
  } else {
    const std::size_t b = a.basis.value_or(0);
    abstract = StateVector::basis(RepLabel(k, std::max<std::size_t>(b + 1, 2)), b);
    state_desc = "basis";
  }
  const FockState s = embed_state(abstract, real);
  json body;
  body["kind"] = real.name();
  body["k"] = k;
  body["modes"] = real.modes();
  if (std::holds_alternative<FourMode>(real.kind())) body["level"] = real.level();
  body["state"] = state_desc;
  if (a.perelomov) {
    body["r"] = a.r;
    body["theta"] = angle(a.theta, a.theta_pi);
    body["dim"] = abstract.dim();
  } else {
    body["basis"] = a.basis.value_or(0);
  }
  body["norm2"] = s.norm2();
  body["amplitudes"] = io::to_json(s);
  emit(a.out, json_document(a.out, body));
  return kOk;
}

// ---------------------------------------------------------------------------
// series

struct SeriesArgs {
  std::string kind = "displacement";
  double k = 0.5;
  std::size_t n = 0;
  std::size_t power = 3;
  std::size_t m_max = 500;
  Output out;
};

int cmd_series(const SeriesArgs& a) {
  using namespace su11;
  SeriesReport rep =
      a.kind == "power" ? higher_power_subseries(a.power, a.m_max) : subseries_coefficients(a.k, a.n, a.m_max);
  radius_estimate(rep);
  emit(a.out, json_document(a.out, io::to_json(rep)));
  return kOk;
}

int fail(int code, const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
  return code;
}

void add_output(CLI::App* cmd, Output& out) {
  cmd->add_option("-o,--output", out.path, "Output file (default stdout)");
  cmd->add_flag("--stamp", out.stamp, "Record a UTC timestamp in the metadata");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"su(1,1) squeezed states, CS wave packets and realizations"};
  app.require_subcommand(1);

  StateArgs st;
  auto* state = app.add_subcommand("state", "Coefficient table of ||beta'> or |beta>");
  state->add_option("--k", st.k, "Bargmann index")->required()->check(CLI::PositiveNumber);
  auto* o_mu = state->add_option("--mu", st.mu, "Re mu");
  state->add_option("--mu-im", st.mu_im, "Im mu");
  auto* o_nu = state->add_option("--nu", st.nu, "Re nu");
  state->add_option("--nu-im", st.nu_im, "Im nu");
  auto* o_beta = state->add_option("--beta", st.beta, "Re beta");
  state->add_option("--beta-im", st.beta_im, "Im beta");
  auto* o_r = state->add_option("--r", st.r, "Squeeze modulus r")->check(CLI::NonNegativeNumber);
  state->add_option("--theta", st.theta, "Squeeze angle");
  state->add_flag("--theta-pi", st.theta_pi, "Read --theta in units of pi");
  auto* o_bp = state->add_option("--beta-prime", st.bp, "Re beta'");
  state->add_option("--beta-prime-im", st.bp_im, "Im beta'");
  auto* o_M = state->add_option("--M", st.M, "Laguerre cut-off order");
  o_bp->excludes(o_M);
  for (auto* e : {o_mu, o_nu, o_beta})
    for (auto* t : {o_r, o_bp, o_M}) e->excludes(t);
  state->add_option("--form", st.form, "seed: ||beta'>, full: D(alpha)||beta'>")
      ->check(CLI::IsMember({"auto", "seed", "full"}));
  state->add_option("--method", st.method, "Displacement route")
      ->check(CLI::IsMember({"auto", "holomorphic", "disentangled", "propagator"}));
  state->add_option("--format", st.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  state->add_option("--dim", st.dim, "Truncation (default: SU11_DEFAULT_DIM or automatic)");
  state->add_option("--tail-tol", st.tail_tol, "Largest allowed norm beyond the truncation");
  state->add_option("--alpha-guard", st.alpha_guard, "|alpha| guard for the matrix routes");
  add_output(state, st.out);

  FigArgs fg;
  auto* fig = app.add_subcommand("cs-fig", "CS wave-packet densities on a grid (CSV)");
  fig->add_option("--figure", fg.figure, "Preset 1..6")->check(CLI::Range(1, 6));
  fig->add_option("--lambda", fg.lambda, "lambda > 1/2");
  fig->add_option("--coupling", fg.coupling, "Coupling G, with G^2 = lambda(lambda-1)/2");
  fig->add_option("--r", fg.r, "Squeeze modulus r");
  fig->add_option("--theta", fg.theta, "Squeeze angle");
  fig->add_flag("--theta-pi", fg.theta_pi, "Read --theta in units of pi");
  fig->add_option("--x-min", fg.x_min, "Grid start");
  fig->add_option("--x-max", fg.x_max, "Grid end (default automatic)");
  fig->add_option("--points", fg.points, "Grid points");
  add_output(fig, fg.out);

  VerifyArgs vf;
  auto* ver = app.add_subcommand("verify", "Run a verification suite (JSON report)");
  ver->add_option("suite", vf.suite, "eigen, uncertainty, bch, appendix-b, realizations, radius, all")
      ->check(CLI::IsMember(su11::verify::suite_names()));
  ver->add_option("--k", vf.k, "Bargmann index override")->check(CLI::PositiveNumber);
  ver->add_option("--r", vf.r, "r override")->check(CLI::PositiveNumber);
  ver->add_option("--theta", vf.theta, "theta override");
  ver->add_flag("--theta-pi", vf.theta_pi, "Read --theta in units of pi");
  ver->add_option("--seed", vf.seed, "Seed for the random parameter sets");
  ver->add_option("--min-dim", vf.min_dim, "Lower bound on truncations");
  add_output(ver, vf.out);

  RealizationArgs rz;
  auto* rea = app.add_subcommand("realization", "Labeled Fock amplitudes of an abstract state (JSON)");
  rea->add_option("--kind", rz.kind, "hp, amp2, two-mode, four-mode")
      ->required()
      ->check(CLI::IsMember({"hp", "amp2", "two-mode", "four-mode"}));
  rea->add_option("--k", rz.k, "Bargmann index (hp), or a consistency check for the other kinds");
  rea->add_option("--j", rz.j, "amp2 sector j (0 or 1)");
  rea->add_option("--p", rz.p, "two-mode number difference");
  rea->add_option("--sign", rz.sign, "two-mode sector, + or -");
  rea->add_option("--p1", rz.p1, "four-mode p1");
  rea->add_option("--p2", rz.p2, "four-mode p2");
  rea->add_option("--n", rz.n, "four-mode n");
  rea->add_option("--basis", rz.basis, "Basis vector |k,n>");
  rea->add_flag("--perelomov", rz.perelomov, "Perelomov state D(alpha)|k,0>");
  rea->add_option("--r", rz.r, "Perelomov r")->check(CLI::NonNegativeNumber);
  rea->add_option("--theta", rz.theta, "Perelomov theta");
  rea->add_flag("--theta-pi", rz.theta_pi, "Read --theta in units of pi");
  rea->add_option("--trunc", rz.trunc, "Abstract truncation (default: SU11_DEFAULT_DIM or automatic)");
  add_output(rea, rz.out);

  SeriesArgs sr;
  auto* ser = app.add_subcommand("series", "Operator power-series coefficients and radius (JSON)");
  ser->add_option("--kind", sr.kind, "displacement or power")->check(CLI::IsMember({"displacement", "power"}));
  ser->add_option("--k", sr.k, "Bargmann index")->check(CLI::PositiveNumber);
  ser->add_option("--n", sr.n, "Basis index of the middle term");
  ser->add_option("--power", sr.power, "Generator power (kind power)");
  ser->add_option("--m-max", sr.m_max, "Last coefficient index");
  add_output(ser, sr.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage", e.what());
  }

  try {
    if (*state) {
      const bool eigen_input = o_mu->count() + o_nu->count() + o_beta->count() > 0;
      if (!eigen_input && o_r->count() == 0) throw su11::DomainError("state: give (--mu, --nu, --beta) or --r");
      return cmd_state(st, eigen_input);
    }
    if (*fig) return cmd_cs_fig(fg);
    if (*ver) return cmd_verify(vf);
    if (*rea) return cmd_realization(rz);
    if (*ser) return cmd_series(sr);
  } catch (const su11::DomainError& e) {
    return fail(kUsage, "domain", e.what());
  } catch (const su11::TruncationError& e) {
    return fail(kNumeric, "truncation", e.what());
  } catch (const su11::NumericError& e) {
    return fail(kNumeric, "numeric", e.what());
  } catch (const std::exception& e) {
    return fail(kNumeric, "internal", e.what());
  }
  return kUsage;
}
