#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "su11/io.hpp"
#include "su11/realizations.hpp"

using namespace su11;
using namespace su11::optics;

namespace {

/// Dense single-mode exp(1/2 (alpha a+^2 - conj(alpha) a^2)) e_0.
Eigen::VectorXcd dense_squeeze(complex alpha, int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd g = 0.5 * (alpha * ad * ad - std::conj(alpha) * a * a);
  return g.exp().col(0);
}

}  // namespace

TEST(Realization, EffectiveIndex) {
  EXPECT_DOUBLE_EQ(Realization(HP{0.7}).effective_k(), 0.7);
  EXPECT_DOUBLE_EQ(Realization(AmplitudeSquared{0}).effective_k(), 0.25);
  EXPECT_DOUBLE_EQ(Realization(AmplitudeSquared{1}).effective_k(), 0.75);
  EXPECT_DOUBLE_EQ(Realization(TwoMode{3, -1}).effective_k(), 2.0);
  const Realization four(FourMode{1, 2, 1});
  EXPECT_EQ(four.level(), 6);
  EXPECT_DOUBLE_EQ(four.effective_k(), 3.5);
  EXPECT_THROW(Realization(AmplitudeSquared{2}), DomainError);
  EXPECT_THROW(Realization(TwoMode{1, 0}), DomainError);
}

TEST(Embed, BasisLabels) {
  const auto hp = embed_state(StateVector::basis(RepLabel(0.5, 3), 0), Realization(HP{0.5}));
  EXPECT_EQ(hp.amplitude({0}), complex(1.0));
  const auto amp = embed_state(StateVector::basis(RepLabel(0.75, 3), 2), Realization(AmplitudeSquared{1}));
  EXPECT_EQ(amp.amplitude({5}), complex(1.0));
  const auto two = embed_state(StateVector::basis(RepLabel(2.0, 3), 1), Realization(TwoMode{3, -1}));
  EXPECT_EQ(two.amplitude({4, 1}), complex(1.0));
  EXPECT_EQ(two.terms().size(), 1u);
  EXPECT_THROW(embed_state(StateVector::basis(RepLabel(0.5, 3), 0), Realization(AmplitudeSquared{0})), DomainError);
}

TEST(MatrixElements, HandValues) {
  // j = 0, n = 1: <0|J-|2>/... = 1/2 sqrt(2*1) = sqrt(1 * 1/2)
  const Realization amp(AmplitudeSquared{0});
  const FockState down = amp.jminus(FockState::single({2}));
  EXPECT_NEAR(down.amplitude({0}).real(), std::sqrt(0.5), 1e-15);
  EXPECT_TRUE(Realization(AmplitudeSquared{1}).jminus(FockState::single({1})).empty());
  const FockState up = Realization(TwoMode{2, 1}).jplus(FockState::single({3, 5}));
  EXPECT_NEAR(up.amplitude({4, 6}).real(), std::sqrt(24.0), 1e-14);
}

TEST(MatrixElements, AllKindsUpToThirty) {
  for (const auto& real : {Realization(HP{0.5}), Realization(HP{2.3}), Realization(AmplitudeSquared{0}),
                           Realization(AmplitudeSquared{1}), Realization(TwoMode{0, 1}), Realization(TwoMode{4, -1}),
                           Realization(FourMode{0, 0, 1}), Realization(FourMode{2, 1, 1})})
    for (std::size_t n = 0; n <= 30; ++n) EXPECT_LT(matrix_element_check(real, n).max(), 1e-13) << real.name() << " " << n;
}

TEST(SqueezedVacuum, AmplitudeSquaredMatchesTextbookAndExpm) {
  for (complex alpha : {complex(0.5), std::polar(0.8, -1.2)}) {
    const FockState viaAbstract = squeezed_vacuum_amp2(alpha, 0, 60);
    const FockState textbook = squeezed_vacuum_textbook(alpha, 60);
    const Eigen::VectorXcd dense = dense_squeeze(alpha, 160);
    for (int n = 0; n < 50; ++n) {
      EXPECT_NEAR(std::abs(viaAbstract.amplitude({2 * n}) - textbook.amplitude({2 * n})), 0.0, 1e-13);
      EXPECT_NEAR(std::abs(viaAbstract.amplitude({2 * n}) - dense(2 * n)), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(dense(2 * n + 1)), 0.0, 1e-14);
    }
  }
  const FockState vac = squeezed_vacuum_amp2(0.0, 1, 10);
  EXPECT_EQ(vac.amplitude({1}), complex(1.0));
}

TEST(CGVacuum, SingleTermAndTwoTermCases) {
  const FockState v0 = cg_vacuum(2, 1, 0);
  EXPECT_EQ(v0.terms().size(), 1u);
  EXPECT_NEAR(v0.amplitude({2, 0, 1, 0}).real(), 1.0, 1e-15);
  const FockState v1 = cg_vacuum(0, 0, 1);
  // Antisymmetric pair; the overall sign is a convention.
  EXPECT_NEAR(std::abs(v1.amplitude({1, 1, 0, 0})), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(std::abs(v1.amplitude({1, 1, 0, 0}) + v1.amplitude({0, 0, 1, 1})), 0.0, 1e-15);
}

TEST(CGVacuum, UnitAndAnnihilated) {
  for (int p1 = 0; p1 <= 2; ++p1)
    for (int p2 = 0; p2 <= 2; ++p2)
      for (int n = 0; n <= 2; ++n) {
        if (p1 + p2 + n > 4) continue;
        const FockState v = cg_vacuum(p1, p2, n);
        EXPECT_NEAR(v.norm2(), 1.0, 1e-12);
        EXPECT_LT(std::sqrt(Realization(FourMode{p1, p2, n}).jminus(v).norm2()), 1e-12);
      }
}

TEST(CGVacuum, MatchesNullSpaceSolve) {
  const int p1 = 1, p2 = 2, n = 2;
  const Realization real(FourMode{p1, p2, n});
  std::vector<Label> cand;
  for (int n1 = 0; n1 <= n; ++n1) cand.push_back({n1 + p1, n1, n - n1 + p2, n - n1});
  std::map<Label, int> rows;
  std::vector<FockState> images;
  for (const auto& l : cand) {
    images.push_back(real.jminus(FockState::single(l)));
    for (const auto& [lab, amp] : images.back().terms()) rows.emplace(lab, static_cast<int>(rows.size()));
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cand.size()));
  for (std::size_t c = 0; c < cand.size(); ++c)
    for (const auto& [lab, amp] : images[c].terms()) m(rows[lab], static_cast<Eigen::Index>(c)) = amp;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXcd null = svd.matrixV().col(static_cast<Eigen::Index>(cand.size()) - 1);
  const FockState v = cg_vacuum(p1, p2, n);
  std::vector<oracle::cd> got, want;
  for (std::size_t c = 0; c < cand.size(); ++c) {
    got.push_back(v.amplitude(cand[c]));
    want.push_back(null(static_cast<Eigen::Index>(c)));
  }
  EXPECT_LT(oracle::aligned_distance(got, want), 1e-12);
}

TEST(FourMode, LadderIsOrthonormalWithJ0Eigenvalues) {
  const Realization real(FourMode{1, 0, 1});
  const auto basis = ModeBasisMap(real).basis(8);
  const double k = real.effective_k();
  for (std::size_t m = 0; m < basis.size(); ++m) {
    for (std::size_t n = 0; n < basis.size(); ++n)
      EXPECT_NEAR(std::abs(inner_product(basis[m], basis[n]) - (m == n ? 1.0 : 0.0)), 0.0, 1e-13);
    EXPECT_LT(std::sqrt((real.j0(basis[m]) - basis[m].scaled(static_cast<double>(m) + k)).norm2()), 1e-13);
  }
  EXPECT_THROW(ModeBasisMap(real).label(0), DomainError);
}

TEST(AmplitudeSquared, SectorsNeverMix) {
  std::mt19937 gen(5);
  for (int j : {0, 1}) {
    const Realization real(AmplitudeSquared{j});
    for (int trial = 0; trial < 20; ++trial) {
      FockState s = FockState::single({j + 2 * 3});
      for (int step = 0; step < 6; ++step) {
        switch (gen() % 3) {
          case 0: s = real.jplus(s); break;
          case 1: s = real.jminus(s); break;
          default: s = real.j0(s); break;
        }
      }
      for (const auto& [label, amp] : s.terms()) EXPECT_EQ(label[0] % 2, j);
    }
  }
}

TEST(FockJson, RoundTrip) {
  const FockState v = cg_vacuum(1, 2, 2).scaled(complex(0.3, -0.4));
  const auto j = io::to_json(v);
  EXPECT_EQ(j.front().at("amp").size(), 2u);
  const FockState back = io::fock_from_json(j, 4);
  EXPECT_LT(std::sqrt((back - v).norm2()), 1e-16);
}
