#include "specenc/jost.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "specenc/operators.hpp"
#include "test_util.hpp"

using specenc::Complex;
using specenc::DiskParameter;
using specenc::JostSolution;
using specenc::PotentialSpec;
using specenc::SpectrumResult;

namespace {

PotentialSpec random_potential(std::uint64_t& st, std::int64_t offset, int width,
                               double amp) {
  PotentialSpec v{offset, {}};
  for (int j = 0; j < width; ++j) v.values.push_back(testutil::complex_box(st, amp));
  return v;
}

}  // namespace

TEST(Jost, FreeSolutionsArePurePowers) {
  const PotentialSpec v{0, {Complex(0.0, 0.0)}};
  const DiskParameter k(Complex(0.4, -0.3));
  const JostSolution phi = specenc::jost_right(v, k);
  const JostSolution psi = specenc::jost_left(v, k);
  for (std::int64_t n = phi.first_index; n <= phi.last_index(); ++n) {
    ASSERT_NEAR(std::abs(phi.at(n) - specenc::detail::cpow_int(k.value(), n)), 0.0, 1e-14);
    ASSERT_NEAR(std::abs(psi.at(n) - specenc::detail::cpow_int(k.value(), -n)), 0.0, 1e-14);
  }
}

TEST(Jost, RecursionHoldsAtEveryInteriorSite) {
  std::uint64_t st = 13u;
  for (int trial = 0; trial < 40; ++trial) {
    const PotentialSpec v = random_potential(st, -2, 5, 2.5);
    Complex kv = testutil::complex_box(st, 0.9);
    if (std::abs(kv) < 0.1) kv += Complex(0.3, 0.2);
    if (std::abs(kv) > 0.95) kv *= 0.95 / std::abs(kv);
    const DiskParameter k(kv);
    const Complex lam = specenc::joukowsky(k);
    for (const JostSolution& f : {specenc::jost_right(v, k), specenc::jost_left(v, k)}) {
      double scale = 0.0;
      for (const Complex& z : f.samples) scale = std::max(scale, std::abs(z));
      for (std::int64_t n = f.first_index + 1; n < f.last_index(); ++n) {
        const Complex defect = f.at(n - 1) + f.at(n + 1) + (v.at(n) - lam) * f.at(n);
        ASSERT_NEAR(std::abs(defect), 0.0, 1e-12 * (1.0 + scale)) << "n " << n;
      }
    }
  }
}

TEST(Jost, BoundaryBehaviourBeyondSupport) {
  std::uint64_t st = 19u;
  const PotentialSpec v = random_potential(st, 3, 4, 2.0);  // support [3, 6]
  const DiskParameter k(Complex(0.5, 0.2));
  const JostSolution phi = specenc::jost_right(v, k);
  // right solution is exactly k^n above the support
  EXPECT_NEAR(std::abs(phi.at(7) - specenc::detail::cpow_int(k.value(), 7)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(phi.at(8) - specenc::detail::cpow_int(k.value(), 8)), 0.0, 1e-13);
  const JostSolution psi = specenc::jost_left(v, k);
  EXPECT_NEAR(std::abs(psi.at(2) - specenc::detail::cpow_int(k.value(), -2)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(psi.at(1) - specenc::detail::cpow_int(k.value(), -1)), 0.0, 1e-13);
  EXPECT_THROW(phi.at(100), std::out_of_range);
}

TEST(Wronskian, FreeCaseClosedForm) {
  // phi_n = k^n and psi_n = k^{-n} give W(k) = 1/k - k for v = 0
  const PotentialSpec v{0, {Complex(0.0, 0.0)}};
  EXPECT_NEAR(std::abs(specenc::wronskian(v, DiskParameter(Complex(0.5, 0.0))) -
                       Complex(1.5, 0.0)),
              0.0, 1e-14);
  std::uint64_t st = 23u;
  for (int i = 0; i < 30; ++i) {
    Complex kv = testutil::complex_box(st, 0.9);
    if (std::abs(kv) < 0.05) kv = Complex(0.3, -0.4);
    if (std::abs(kv) > 0.95) kv *= 0.95 / std::abs(kv);
    const Complex w = specenc::wronskian(v, DiskParameter(kv));
    ASSERT_NEAR(std::abs(w - (1.0 / kv - kv)), 0.0, 1e-12 * (1.0 + std::abs(1.0 / kv)));
  }
}

TEST(Wronskian, ConstantAcrossWindow) {
  std::uint64_t st = 29u;
  for (int trial = 0; trial < 30; ++trial) {
    const PotentialSpec v = random_potential(st, -3, 7, 3.0);
    Complex kv = testutil::complex_box(st, 0.85);
    if (std::abs(kv) < 0.1) kv += Complex(-0.25, 0.3);
    if (std::abs(kv) > 0.92) kv *= 0.92 / std::abs(kv);
    const DiskParameter k(kv);
    const Complex w = specenc::wronskian(v, k);
    const JostSolution phi = specenc::jost_right(v, k);
    const JostSolution psi = specenc::jost_left(v, k);
    ASSERT_NEAR(std::abs(specenc::wronskian_pair(phi, psi, phi.first_index) - w), 0.0,
                1e-10 * (1.0 + std::abs(w)));
    ASSERT_NEAR(std::abs(specenc::wronskian_pair(phi, psi, phi.last_index() - 1) - w), 0.0,
                1e-10 * (1.0 + std::abs(w)));
  }
}

TEST(Wronskian, DeltaPotentialRoot) {
  // v = delta: W vanishes where 1/k - k = 1, at k = (sqrt(5) - 1)/2
  const PotentialSpec v{0, {Complex(1.0, 0.0)}};
  const Complex kroot(0.6180339887498949, 0.0);
  EXPECT_LE(std::abs(specenc::wronskian(v, DiskParameter(kroot))), 1e-13);
  // nearby k: no vanishing
  EXPECT_GT(std::abs(specenc::wronskian(v, DiskParameter(Complex(0.6, 0.0)))), 1e-3);
}

TEST(Wronskian, RejectsModulusOneAndBandEdges) {
  const PotentialSpec v{0, {Complex(1.0, 0.0)}};
  EXPECT_THROW(specenc::wronskian(v, DiskParameter(Complex(1.0, 0.0))), std::domain_error);
  EXPECT_THROW(specenc::jost_right(v, DiskParameter(Complex(-1.0, 0.0))), std::domain_error);
}

TEST(WronskianSearch, DeltaPotentialRealCoupling) {
  const PotentialSpec v{0, {Complex(1.0, 0.0)}};
  const SpectrumResult sr = specenc::locate_eigenvalues_wronskian(v);
  ASSERT_EQ(sr.eigenvalues.size(), 1u);
  EXPECT_NEAR(std::abs(sr.eigenvalues[0] - Complex(2.2360679774997896, 0.0)), 0.0, 1e-11);
  ASSERT_EQ(sr.residuals.size(), 1u);
  EXPECT_LE(sr.residuals[0], 1e-9);
  EXPECT_EQ(sr.method, "wronskian");
  EXPECT_EQ(sr.section_size, 0u);
  EXPECT_TRUE(sr.warnings.empty());
}

TEST(WronskianSearch, DeltaPotentialFrozenComplexRoots) {
  {
    const PotentialSpec v{0, {Complex(0.5, 0.5)}};
    const SpectrumResult sr = specenc::locate_eigenvalues_wronskian(v);
    ASSERT_EQ(sr.eigenvalues.size(), 1u);
    EXPECT_NEAR(std::abs(sr.eigenvalues[0] -
                         Complex(2.003887331432243, 0.12475751309896099)),
                0.0, 1e-10);
  }
  {
    const PotentialSpec v{0, {Complex(0.0, 3.0)}};  // eigenvalue i sqrt(5)
    const SpectrumResult sr = specenc::locate_eigenvalues_wronskian(v);
    ASSERT_EQ(sr.eigenvalues.size(), 1u);
    EXPECT_NEAR(std::abs(sr.eigenvalues[0] - Complex(0.0, 2.23606797749979)), 0.0, 1e-11);
  }
  {
    // weak coupling: the zero sits close to the rim of the annulus
    const PotentialSpec v{0, {Complex(0.2, 0.0)}};  // lambda = sqrt(4.04)
    const SpectrumResult sr = specenc::locate_eigenvalues_wronskian(v);
    ASSERT_EQ(sr.eigenvalues.size(), 1u);
    EXPECT_NEAR(std::abs(sr.eigenvalues[0] - Complex(2.009975124224178, 0.0)), 0.0, 1e-10);
  }
}

TEST(WronskianSearch, AgreesWithFiniteSections) {
  std::uint64_t st = 37u;
  int cross_checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const PotentialSpec v = random_potential(st, -1, 3, 3.0);
    const SpectrumResult wr = specenc::locate_eigenvalues_wronskian(v);
    const SpectrumResult fs = specenc::stable_discrete_eigenvalues(v, 128);
    // compare away from the filter edge so both methods see the same set
    for (const Complex& lam : wr.eigenvalues) {
      if (specenc::dist_to_band(lam) <= 0.06) continue;
      double best = 1e300;
      for (const Complex& mu : fs.eigenvalues) best = std::min(best, std::abs(lam - mu));
      ASSERT_LE(best, 1e-6) << "wronskian eigenvalue " << lam << " unseen by sections";
      ++cross_checked;
    }
    for (const Complex& mu : fs.eigenvalues) {
      if (specenc::dist_to_band(mu) <= 0.06) continue;
      double best = 1e300;
      for (const Complex& lam : wr.eigenvalues) best = std::min(best, std::abs(lam - mu));
      ASSERT_LE(best, 1e-6) << "section eigenvalue " << mu << " unseen by the wronskian";
    }
  }
  EXPECT_GE(cross_checked, 8);  // the ensemble is strong enough to bind states
}

TEST(WronskianSearch, TranslationInvariance) {
  std::uint64_t st = 43u;
  const PotentialSpec v = random_potential(st, 0, 4, 2.5);
  const SpectrumResult a = specenc::locate_eigenvalues_wronskian(v);
  const SpectrumResult b = specenc::locate_eigenvalues_wronskian(v.translated(-9));
  ASSERT_EQ(a.eigenvalues.size(), b.eigenvalues.size());
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
    ASSERT_NEAR(std::abs(a.eigenvalues[i] - b.eigenvalues[i]), 0.0, 1e-10);
  }
}

TEST(WronskianSearch, RejectsBadOptions) {
  const PotentialSpec v{0, {Complex(1.0, 0.0)}};
  specenc::WronskianSearchOptions opt;
  opt.grid = 16;
  EXPECT_THROW(specenc::locate_eigenvalues_wronskian(v, opt), std::invalid_argument);
  opt.grid = 128;
  opt.refine_tol = 0.0;
  EXPECT_THROW(specenc::locate_eigenvalues_wronskian(v, opt), std::invalid_argument);
}
