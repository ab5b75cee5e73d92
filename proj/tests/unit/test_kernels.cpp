#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nslab/kernels.hpp"

using namespace nslab;

namespace {

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

// Composite Simpson on (a, b) with n (even) intervals.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

// K_1(0,0) = (2 pi)^-3 4 pi int phi(rho) rho^2 d rho, integrated here with an unrelated rule.
TEST(UnitKernel, OriginValueOracle) {
  const double oracle = 4.0 * std::numbers::pi / std::pow(2.0 * std::numbers::pi, 3) *
                        simpson([](double r) { return lp_bump(r) * r * r; }, 0.5, 2.0, 200000);
  EXPECT_NEAR(oracle, 0.0582216559, 1e-9);
  EXPECT_NEAR(unit_kernel(0.0, 0.0).real(), 0.0582216559, 1e-9);
  EXPECT_NEAR(unit_kernel(0.0, 0.0).imag(), 0.0, 1e-15);
}

TEST(UnitKernel, EvenInTimeUpToConjugation) {
  for (double tau : {0.3, 4.0, 25.0})
    for (double r : {0.0, 1.0, 7.5}) {
      const Complex a = unit_kernel(tau, r), b = unit_kernel(-tau, r);
      EXPECT_LT(std::abs(a - std::conj(b)), 1e-14);
    }
}

TEST(SchrodingerKernel, RadialSymmetry) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> G(0.0, 1.0);
  const double N = 64.0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = 0.1 * Vec3{G(rng), G(rng), G(rng)};
    const Vec3 y = norm(x) * normalized(Vec3{G(rng), G(rng), G(rng)});
    const double t = 0.01 * G(rng);
    EXPECT_LT(std::abs(schrodinger_kernel(N, t, x) - schrodinger_kernel(N, t, y)), 1e-12 * N * N * N);
  }
}

// Errors against the kernel scale N^3 K_1(0,0); pointwise where |K| is not negligible.
TEST(SchrodingerKernel, ParabolicRescaling) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (double N : {16.0, 64.0}) {
    const double scale = N * N * N * unit_kernel(0.0, 0.0).real();
    for (int i = 0; i < 100; ++i) {
      const double t = (2.0 * U(rng) - 1.0) / std::sqrt(N), r = 2.0 * U(rng) / std::sqrt(N);
      const Complex a = schrodinger_kernel(N, t, r);
      const Complex b = N * N * N * unit_kernel(N * N * t, N * r);
      EXPECT_LT(std::abs(a - b) / scale, 1e-8);
      if (std::abs(b) > 1e-3 * scale) EXPECT_LT(std::abs(a - b) / std::abs(b), 1e-6);
    }
  }
}

TEST(HeatKernel, PositiveAtOrigin) {
  for (double N : {16.0, 64.0})
    for (double t : {1e-4, 1e-2, 0.3}) EXPECT_GT(heat_kernel_localized(N, t, 0.0), 0.0);
  EXPECT_GT(heat_gaussian(0.1, 0.0), 0.0);
  EXPECT_NEAR(heat_gaussian(0.25, 0.0), std::pow(std::numbers::pi, -1.5), 1e-15);
  EXPECT_DOUBLE_EQ(heat_cylinder_t0(64.0), 3.0 / 8.0);
}

TEST(KernelSup, BandsAndOrigin) {
  std::vector<double> s, h;
  for (double N : {16.0, 64.0, 256.0}) {
    const auto r = kernel_sup_on_cylinder(N, KernelKind::schrodinger, 2000);
    EXPECT_LE(r.origin_value, r.sup * (1 + 1e-12));
    s.push_back(r.ratio);
    h.push_back(kernel_sup_on_cylinder(N, KernelKind::heat, 2000).ratio);
  }
  EXPECT_LT(spread(s), 2.0);
  EXPECT_LT(spread(h), 2.0);
}

TEST(KernelL3, RatioBandsAndRefinement) {
  std::vector<double> s, h;
  for (double N : {16.0, 32.0, 64.0}) {
    const auto r = kernel_L3_on_cylinder(N, KernelKind::schrodinger);
    EXPECT_LT(r.refinement_gap, 0.01);
    s.push_back(r.ratio);
  }
  for (double N : {64.0, 128.0, 256.0}) h.push_back(kernel_L3_on_cylinder(N, KernelKind::heat).ratio);
  EXPECT_LT(spread(s), 2.0);
  EXPECT_LT(spread(h), 2.0);
}

TEST(KernelL3, RescalingCrossCheck) {
  const auto rc = kernel_rescaling_check(16.0);
  EXPECT_LT(rc.rel_diff, 0.01);
  EXPECT_GT(rc.lhs, 0.0);
}

TEST(Strichartz, ScaledRatioStable) {
  std::vector<double> v;
  for (double N : {16.0, 32.0, 64.0, 128.0}) {
    const auto r = strichartz_ratio(N, 8);
    EXPECT_EQ(r.trials, 8u);
    v.push_back(r.normalized);
  }
  EXPECT_LT(spread(v), 2.0);
}

TEST(Strichartz, HeatRatioStable) {
  std::vector<double> v;
  for (double N : {64.0, 256.0, 1024.0}) v.push_back(strichartz_ratio(N, 8, KernelKind::heat).normalized);
  EXPECT_LT(spread(v), 2.0);
}

TEST(KernelKinds, Parse) {
  EXPECT_EQ(parse_kernel_kind("heat"), KernelKind::heat);
  EXPECT_EQ(to_string(KernelKind::schrodinger), "schrodinger");
  EXPECT_THROW(parse_kernel_kind("wave"), std::invalid_argument);
}
