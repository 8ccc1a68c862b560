#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "su11/io.hpp"

namespace {

struct Outcome {
  std::string out, err;
  int code = -1;
};

Outcome run(const std::string& args, const std::string& env = "") {
  const auto err_path = std::filesystem::temp_directory_path() / ("su11_cli_err_" + std::to_string(::getpid()));
  const std::string cmd = env + " " + SU11_CLI_PATH + " " + args + " 2>" + err_path.string();
  Outcome r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(err_path);
  r.err.assign(std::istreambuf_iterator<char>(f), {});
  std::filesystem::remove(err_path);
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string meta(const std::string& csv, const std::string& key) {
  for (const auto& l : lines(csv))
    if (l.rfind("# " + key + ": ", 0) == 0) return l.substr(key.size() + 4);
  return {};
}

struct Row {
  int n;
  double re, im, abs2;
};

std::vector<Row> rows(const std::string& csv) {
  std::vector<Row> v;
  bool body = false;
  for (const auto& l : lines(csv)) {
    if (l == "n,re,im,abs2") {
      body = true;
      continue;
    }
    if (!body) continue;
    Row r{};
    char c;
    std::istringstream in(l);
    in >> r.n >> c >> r.re >> c >> r.im >> c >> r.abs2;
    v.push_back(r);
  }
  return v;
}

su11::io::json body_json(const std::string& out) {
  const auto nl = out.find('\n');
  return su11::io::json::parse(out.substr(nl + 1));
}

}  // namespace

TEST(Cli, SchemaLineComesFirst) {
  const Outcome csv = run("state --k 0.5 --r 0.3 --theta 0 --beta-prime 0.2");
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(lines(csv.out).front(), "# schema: su11/1");
  const Outcome js = run("state --k 0.5 --r 0.3 --theta 0 --beta-prime 0.2 --format json");
  ASSERT_EQ(js.code, 0);
  EXPECT_EQ(su11::io::json::parse(lines(js.out).front()).at("schema"), "su11/1");
  const Outcome stamped = run("state --k 0.5 --r 0.3 --theta 0 --beta-prime 0.2 --stamp");
  EXPECT_EQ(lines(stamped.out)[1].rfind("# stamp: ", 0), 0u);
}

TEST(Cli, LaguerreCutoffHasTwoRows) {
  const Outcome r = run("state --k 1 --r 0.5 --theta 0 --M 1");
  ASSERT_EQ(r.code, 0) << r.err;
  int nonzero = 0;
  double norm = 0.0;
  for (const auto& row : rows(r.out)) {
    if (row.abs2 > 0) ++nonzero;
    norm += row.abs2;
  }
  EXPECT_EQ(nonzero, 2);
  EXPECT_NEAR(norm, 1.0, 1e-12);
}

TEST(Cli, EigenInputIsSolved) {
  const Outcome r = run("state --k 1 --mu 1 --nu 0.3 --beta 0.4");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(meta(r.out, "form"), "full");
  EXPECT_LT(std::stod(meta(r.out, "residual")), 1e-9);
}

TEST(Cli, ZeroSqueezeIsCoherent) {
  const Outcome r = run("state --k 0.5 --r 0 --theta 0 --beta-prime 0.6");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto v = rows(r.out);
  ASSERT_GT(v.size(), 3u);
  // Barut-Girardello amplitudes for k = 1/2: c_n proportional to b^n / n!.
  EXPECT_NEAR(v[1].re / v[0].re, 0.6, 1e-12);
  EXPECT_NEAR(v[2].re / v[1].re, 0.3, 1e-12);
  EXPECT_NEAR(v[3].re / v[2].re, 0.2, 1e-12);
}

TEST(Cli, JsonRoundTripMatchesCsv) {
  const std::string args = "state --k 1.5 --r 0.4 --theta 0.7 --beta-prime 0.3 --beta-prime-im -0.2";
  const Outcome csv = run(args), js = run(args + " --format json");
  ASSERT_EQ(csv.code, 0);
  ASSERT_EQ(js.code, 0);
  const auto j = body_json(js.out);
  const auto v = rows(csv.out);
  const auto& c = j.at("coefficients");
  ASSERT_EQ(c.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(c[i].at("n").get<int>(), v[i].n);
    EXPECT_NEAR(c[i].at("re").get<double>(), v[i].re, 1e-14);
    EXPECT_NEAR(c[i].at("im").get<double>(), v[i].im, 1e-14);
  }
}

TEST(Cli, OutputIsDeterministic) {
  const std::string args = "state --k 2 --r 0.8 --theta 1 --beta-prime 0.5 --form full";
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, OutputFileOption) {
  const auto path = std::filesystem::temp_directory_path() / ("su11_cli_out_" + std::to_string(::getpid()) + ".csv");
  const Outcome r = run("state --k 1 --r 0.2 --theta 0 --beta-prime 0.1 -o " + path.string());
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(path);
  const std::string text((std::istreambuf_iterator<char>(f)), {});
  std::filesystem::remove(path);
  EXPECT_EQ(text, run("state --k 1 --r 0.2 --theta 0 --beta-prime 0.1").out);
}

TEST(Cli, DefaultDimFromEnvironment) {
  const Outcome r = run("state --k 1 --r 0.2 --theta 0 --beta-prime 0.1", "SU11_DEFAULT_DIM=40");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(meta(r.out, "dim"), "40");
  EXPECT_EQ(meta(run("state --k 1 --r 0.2 --theta 0 --beta-prime 0.1 --dim 50", "SU11_DEFAULT_DIM=40").out, "dim"), "50");
}

TEST(Cli, FigurePresetMatchesExplicitParameters) {
  const Outcome a = run("cs-fig --figure 4 --points 200");
  const Outcome b = run("cs-fig --lambda 1.1 --r 0.69 --theta 0 --points 200");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_TRUE(a.out == b.out);
  EXPECT_NEAR(std::stod(meta(a.out, "norm_perelomov")), 1.0, 1e-8);
  EXPECT_NEAR(std::stod(meta(a.out, "norm_m1")), 1.0, 1e-8);
}

TEST(Cli, EveryFigureRuns) {
  for (int f = 1; f <= 6; ++f) {
    const Outcome r = run("cs-fig --figure " + std::to_string(f) + " --points 50");
    EXPECT_EQ(r.code, 0) << f << r.err;
    EXPECT_FALSE(meta(r.out, "x_cl").empty());
  }
}

TEST(Cli, VerifySuites) {
  const Outcome r = run("verify radius");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = body_json(r.out);
  EXPECT_EQ(j.at("suite"), "radius");
  EXPECT_TRUE(j.at("pass").get<bool>());
  const Outcome e = run("verify eigen --k 0.75 --r 0.4 --theta -1");
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(body_json(e.out).at("checks").size(), 2u);
}

TEST(Cli, Realizations) {
  const Outcome hp = run("realization --kind hp --k 1 --basis 3");
  ASSERT_EQ(hp.code, 0) << hp.err;
  EXPECT_NEAR(body_json(hp.out).at("norm2").get<double>(), 1.0, 1e-12);
  const Outcome tm = run("realization --kind two-mode --perelomov --r 0.3 --theta 0.5");
  ASSERT_EQ(tm.code, 0) << tm.err;
  const auto j = body_json(tm.out);
  EXPECT_EQ(j.at("modes"), 2);
  EXPECT_NEAR(j.at("norm2").get<double>(), 1.0, 1e-10);
  const auto state = su11::io::fock_from_json(j.at("amplitudes"), 2);
  EXPECT_EQ(state.terms().size(), j.at("amplitudes").size());
  EXPECT_EQ(state.modes(), 2u);
  EXPECT_EQ(run("realization --kind four-mode --j 1 --p 0 --sign + --n 2").code, 0);
}

TEST(Cli, SeriesReports) {
  const Outcome r = run("series --kind displacement --k 0.5 --n 0 --m-max 500");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = su11::io::series_from_json(body_json(r.out));
  EXPECT_NEAR(rep.radius, 2.0, 0.005);
  EXPECT_EQ(rep.log_coefficients.size(), 501u);
}

TEST(Cli, ErrorsAreJsonOnStderr) {
  const Outcome usage = run("state --k -1 --r 0 --theta 0");
  EXPECT_EQ(usage.code, 2);
  EXPECT_TRUE(usage.out.empty());
  EXPECT_EQ(su11::io::json::parse(usage.err).at("exit_code"), 2);
  EXPECT_EQ(run("verify bogus").code, 2);
  EXPECT_EQ(run("state --k 1 --r 1.7 --theta 0 --beta-prime 0.1 --method disentangled --form full").code, 2);
  const Outcome trunc = run("state --k 1 --r 1.2 --theta 0 --beta-prime 0.5 --form full --dim 4");
  EXPECT_EQ(trunc.code, 3);
  const auto j = su11::io::json::parse(trunc.err);
  EXPECT_EQ(j.at("error"), "truncation");
  EXPECT_EQ(j.at("exit_code"), 3);
  EXPECT_EQ(run("realization --kind two-mode --k 1 --basis 0").code, 2);
}
