#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

#include "oracles.hpp"
#include "su11/convergence.hpp"
#include "su11/io.hpp"

using namespace su11;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// d_m = (n+m)! (n+2k+m-1)! / ((2m)! n! (n+2k-1)!) exactly, for integer 2k.
cpp_rational exact_d(int two_k, int n, int m) {
  return cpp_rational(factorial(n + m) * factorial(n + two_k + m - 1),
                      factorial(2 * m) * factorial(n) * factorial(n + two_k - 1));
}

double log_of(const cpp_rational& q) {
  const auto log_int = [](const cpp_int& v) {
    const long shift = std::max(0L, static_cast<long>(boost::multiprecision::msb(v)) - 60);
    return std::log(static_cast<double>(cpp_int(v >> shift))) + static_cast<double>(shift) * std::log(2.0);
  };
  return log_int(boost::multiprecision::numerator(q)) - log_int(boost::multiprecision::denominator(q));
}

}  // namespace

TEST(Subseries, SmallCoefficients) {
  const SeriesReport r = subseries_coefficients(0.5, 0, 20);
  EXPECT_NEAR(std::exp(r.log_coefficients[0]), 1.0, 1e-15);
  EXPECT_NEAR(std::exp(r.log_coefficients[1]), 0.5, 1e-15);
  EXPECT_NEAR(std::exp(r.log_coefficients[2]), 1.0 / 6.0, 1e-15);
  EXPECT_THROW(subseries_coefficients(0.5, 0, 9), DomainError);
}

TEST(Subseries, ExactRationalCrossCheck) {
  for (int two_k : {1, 2, 9})
    for (int n : {0, 1, 5}) {
      const SeriesReport r = subseries_coefficients(0.5 * two_k, static_cast<std::size_t>(n), 50);
      for (int m = 0; m <= 50; ++m) {
        const cpp_rational d = exact_d(two_k, n, m);
        EXPECT_NEAR(r.log_coefficients[static_cast<std::size_t>(m)], log_of(d), 1e-11 * std::max(1.0, std::abs(log_of(d))));
        if (m < 50) {
          const double ratio = static_cast<double>(cpp_rational(d / exact_d(two_k, n, m + 1)));
          EXPECT_NEAR(r.ratios[static_cast<std::size_t>(m)], ratio, 1e-14 * ratio);
        }
      }
    }
}

TEST(Subseries, RatioTendsToFour) {
  // d_m/d_{m+1} = 4 - O((n+2k)/m), so the slow ones need a wider tolerance.
  for (double k : {0.5, 1.0}) EXPECT_LT(std::abs(subseries_coefficients(k, 0, 1001).ratios[1000] - 4.0), 0.01);
  for (double k : {0.5, 2.0})
    for (std::size_t n : {0u, 7u}) {
      const double ratio = subseries_coefficients(k, n, 1001).ratios[1000];
      EXPECT_NEAR(ratio, 4.0 * (1000.5 * 1001.0) / ((n + 1001.0) * (n + 2 * k + 1000.0)), 1e-12);
    }
}

TEST(Radius, DisplacementSeriesIsTwo) {
  SeriesReport r = subseries_coefficients(0.5, 0, 500);
  EXPECT_NEAR(radius_estimate(r), 2.0, 0.005);
  EXPECT_NEAR(r.radius, 2.0, 0.005);
  EXPECT_LT(r.radius_error, 0.005);
  for (double k : {0.5, 1.0, 4.5})
    for (std::size_t n : {0u, 1u, 5u}) {
      const double rho = radius_estimate(subseries_coefficients(k, n, 500));
      EXPECT_GE(rho, 1.98);
      EXPECT_LE(rho, 2.02);
    }
}

TEST(Radius, GeometricSeries) {
  std::vector<double> logs(201);
  for (std::size_t m = 0; m < logs.size(); ++m) logs[m] = -static_cast<double>(m) * std::log(9.0);
  EXPECT_NEAR(radius_estimate(series_from_log_coefficients(logs)), 3.0, 1e-9);
}

TEST(Radius, HigherPowersCollapse) {
  const SeriesReport cubic = higher_power_subseries(3, 300);
  for (std::size_t m : {0u, 10u, 100u}) {
    const double mm = static_cast<double>(m);
    EXPECT_NEAR(cubic.ratios[m], (2 * mm + 1) * (2 * mm + 2) / ((3 * mm + 1) * (3 * mm + 2) * (3 * mm + 3)), 1e-15);
  }
  const auto naive = naive_radius_sequence(cubic);
  for (std::size_t m = 10; m + 1 < naive.size(); ++m) EXPECT_LT(naive[m + 1], naive[m]);
  EXPECT_LT(radius_estimate(higher_power_subseries(4, 200)), 0.05);
  EXPECT_LT(radius_estimate(cubic), 0.05);
  // Quadratic control: (2m)!/(2m)! = 1, a finite nonzero limit.
  EXPECT_NEAR(radius_estimate(higher_power_subseries(2, 200)), 1.0, 1e-12);
  EXPECT_THROW(higher_power_subseries(1, 200), DomainError);
}

TEST(Radius, RejectsShortOrNonMonotoneSeries) {
  EXPECT_THROW(radius_estimate(subseries_coefficients(0.5, 0, 50)), DomainError);
  std::vector<double> logs(201);
  for (std::size_t m = 0; m < logs.size(); ++m) logs[m] = -0.3 * static_cast<double>(m) + 0.2 * std::sin(static_cast<double>(m));
  EXPECT_THROW(radius_estimate(series_from_log_coefficients(logs)), NumericError);
}

TEST(Bch, IdentityAtZero) {
  EXPECT_EQ(bch_identity_check(0.0, RepLabel(0.5, 50)).max_error, 0.0);
}

TEST(Bch, AgreesWithinValidityDisk) {
  EXPECT_LT(bch_identity_check(0.8, RepLabel(0.5, 200)).max_error, 1e-10);
  EXPECT_LT(bch_identity_check(std::polar(1.2, 0.3), RepLabel(5.0, 300)).max_error, 1e-9);
  EXPECT_THROW(bch_identity_check(1.6, RepLabel(0.5, 200)), DomainError);
  EXPECT_THROW(bch_identity_check(1.2, RepLabel(0.5, 30)), TruncationError);
}

TEST(Bch, GeneratorMatchesOracleMatrices) {
  const complex alpha = std::polar(0.7, -0.4);
  const Eigen::MatrixXcd g = displacement_generator(RepLabel(1.5, 20), alpha);
  const Eigen::MatrixXcd expect = alpha * oracle::jplus(1.5, 20) - std::conj(alpha) * oracle::jminus(1.5, 20);
  EXPECT_LT((g - expect).norm(), 1e-14);
}

TEST(AppendixB, FiniteDifferenceMatchesBothForms) {
  const RepLabel rep(0.5, 200);
  const AppendixBCheck a = appendix_b_check(0.3, 0.0, rep);
  EXPECT_LT(a.residual_generator, 1e-7);
  EXPECT_LT(a.residual_normal, 1e-7);
  EXPECT_GT(a.residual_generator, a.roundoff_floor * 1e-3);
  const AppendixBCheck b = appendix_b_check(0.7, -2.0, RepLabel(1.75, 200));
  EXPECT_LT(b.residual_generator, 1e-7);
  EXPECT_LT(appendix_b_consistency(0.7, -2.0, RepLabel(1.75, 200)), 1e-12);
  EXPECT_THROW(appendix_b_check(0.3, 0.0, rep, 0.5), DomainError);
}

TEST(AppendixB, SecondOrderConvergence) {
  const RepLabel rep(0.5, 200);
  const double coarse = appendix_b_check(0.3, 0.4, rep, 1e-4).residual_generator;
  const double fine = appendix_b_check(0.3, 0.4, rep, 5e-5).residual_generator;
  EXPECT_NEAR(coarse / fine, 4.0, 0.3);
}

TEST(AppendixB, SmallRLimit) {
  // d/dr D(r e^{i theta})|k,0> at r -> 0 is e^{i theta} sqrt(2k) e_1.
  const double k = 0.75, theta = 0.6;
  const StateVector up = perelomov_state(std::polar(1e-6, theta), RepLabel(k, 10));
  EXPECT_NEAR(std::abs(up[1] / 1e-6 - std::polar(std::sqrt(2 * k), theta)), 0.0, 1e-6);
}

TEST(SeriesJson, RoundTrip) {
  SeriesReport r = subseries_coefficients(1.0, 2, 120);
  radius_estimate(r);
  const SeriesReport back = io::series_from_json(io::to_json(r));
  EXPECT_EQ(back.label, r.label);
  EXPECT_EQ(back.m_max, r.m_max);
  EXPECT_EQ(back.ratios, r.ratios);
  EXPECT_EQ(back.log_coefficients, r.log_coefficients);
  EXPECT_DOUBLE_EQ(back.radius, r.radius);
}
