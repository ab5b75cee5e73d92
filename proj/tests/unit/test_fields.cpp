#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nslab/bilinear.hpp"
#include "nslab/ns_solver.hpp"
#include "nslab/scaling.hpp"
#include "nslab/spectral_field.hpp"

using namespace nslab;

namespace {

// Real single-mode field a e^{ik.x} + conj(a) e^{-ik.x}.
SpectralField single_mode(int M, std::array<int, 3> k, const std::array<Complex, 3>& a) {
  SpectralField f(M, false);
  const std::size_t idx = f.index(k[0], k[1], k[2]);
  f.set_vec(idx, a);
  f.set_vec(f.index(-k[0], -k[1], -k[2]), {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])});
  return f;
}

double rel_diff(const SpectralField& a, const SpectralField& b) {
  return (a - b).max_abs_coefficient() / std::max(b.max_abs_coefficient(), 1e-300);
}

}  // namespace

TEST(SpectralField, IndexingAndMirror) {
  SpectralField f(8);
  EXPECT_EQ(f.freq(0), 0);
  EXPECT_EQ(f.freq(4), 4);
  EXPECT_EQ(f.freq(5), -3);
  const std::size_t idx = f.index(1, -2, 3);
  const auto k = f.wavenumber(idx);
  EXPECT_EQ(k[0], 1);
  EXPECT_EQ(k[1], -2);
  EXPECT_EQ(k[2], 3);
  EXPECT_EQ(f.wavenumber(f.mirror(idx))[1], 2);
  EXPECT_EQ(f.dealias_cutoff(), 2);
  EXPECT_EQ(SpectralField(32).dealias_cutoff(), 10);
}

TEST(SpectralField, PhysicalRoundTripIsReal) {
  const SpectralField u = random_divfree_field(16, 3);
  EXPECT_LT(u.reality_defect(), 1e-14);
  EXPECT_LT(u.divergence_defect(), 1e-12);
  const auto phys = to_physical(u);
  const SpectralField back = from_physical(phys, 16);
  EXPECT_LT(rel_diff(back, u), 1e-12);
}

TEST(LittlewoodPaley, PartitionParseval) {
  const SpectralField f = random_field(32, 5, 8.0);
  double total = 0.0;
  for (double N : {1.0, 2.0, 4.0, 8.0}) total += std::pow(sobolev_norm(lp_project(f, N), 0.0), 2);
  const double full = std::pow(sobolev_norm(f, 0.0), 2);
  EXPECT_NEAR(total, full, 1e-10 * full);
}

TEST(LittlewoodPaley, SingleModeAndDisjointness) {
  const SpectralField f = single_mode(32, {4, 0, 0}, {0.0, 1.0, 0.0});
  EXPECT_NEAR(lp_project(f, 4.0).max_abs_coefficient(), lp_bump(1.0), 1e-15);
  EXPECT_DOUBLE_EQ(lp_bump(1.0), 1.0);
  const SpectralField g = random_field(32, 6, 15.0);
  EXPECT_EQ(lp_project(lp_project(g, 1.0), 4.0).max_abs_coefficient(), 0.0);
  EXPECT_EQ(lp_project(lp_project(g, 2.0), 8.0).max_abs_coefficient(), 0.0);
  EXPECT_THROW(lp_project(g, 16.0), std::invalid_argument);
}

TEST(LittlewoodPaley, PreservesRealityAndDivergence) {
  const SpectralField u = random_divfree_field(32, 7);
  for (double N : {1.0, 2.0, 4.0, 8.0}) {
    const SpectralField p = lp_project(u, N);
    EXPECT_LT(p.reality_defect(), 1e-14);
    EXPECT_LT(p.divergence_defect(), 1e-12);
  }
  const SpectralField a = angular_project(u, Tile{normalized(Vec3{1, 1, 0}), 0.5});
  EXPECT_LT(a.reality_defect(), 1e-14);
  EXPECT_LT(a.divergence_defect(), 1e-12);
}

TEST(Leray, GradientAnnihilatedAndIdempotent) {
  SpectralField grad(16, false);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> G(0.0, 1.0);
  for (std::size_t idx = 1; idx < grad.modes(); ++idx) {
    const std::size_t m = grad.mirror(idx);
    const Vec3 k = grad.kvec(idx);
    // Nyquist planes are their own mirrors with +M/2 components; skip them.
    if (m <= idx || std::max({std::abs(k.x), std::abs(k.y), std::abs(k.z)}) >= 8.0) continue;
    const Complex g(G(rng), G(rng));
    for (int c = 0; c < 3; ++c) {
      grad.at(c, idx) = k[c] * g;
      grad.at(c, m) = std::conj(k[c] * g);
    }
  }
  EXPECT_LT(leray_project_field(grad).max_abs_coefficient(), 1e-12 * grad.max_abs_coefficient());
  const SpectralField u = random_divfree_field(16, 2);
  EXPECT_LT(rel_diff(leray_project_field(u), u), 1e-12);
  const SpectralField p = leray_project_field(random_field(16, 4, 7.0));
  EXPECT_LT(p.divergence_defect(), 1e-12);
  EXPECT_LT(rel_diff(leray_project_field(p), p), 1e-12);
}

// Plain coefficient sum over the reality pair: 2 * |k|^{2s} = 8, so the norm is 2 sqrt 2.
TEST(Sobolev, SingleModeConvention) {
  const SpectralField f = single_mode(16, {4, 0, 0}, {0.0, 1.0, 0.0});
  EXPECT_NEAR(sobolev_norm(f, 0.5), 2.0 * std::numbers::sqrt2, 1e-14);
  EXPECT_NEAR(sobolev_norm(f, 0.0), std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(sobolev_norm(f, 0.0), std::sqrt(f.energy_sum()), 1e-15);
}

TEST(Sobolev, HminusOneBandOnAnnuli) {
  const SpectralField f = random_field(32, 8, 15.0);
  for (double N : {1.0, 2.0, 4.0, 8.0}) {
    const SpectralField p = lp_project(f, N);
    const double q = sobolev_norm(p, -1.0) / (sobolev_norm(p, 0.0) / N);
    EXPECT_GE(q, 0.5);
    EXPECT_LE(q, 2.0);
  }
}

TEST(Blocks, Classification) {
  EXPECT_EQ(classify_dyads(8, 8, 8), BlockLabel::hh_h);
  EXPECT_EQ(classify_dyads(64, 2, 8), BlockLabel::lh_h);
  EXPECT_EQ(classify_dyads(32, 2, 8), BlockLabel::hh_h);
  EXPECT_EQ(classify_dyads(64, 64, 1), BlockLabel::hh_l);
  EXPECT_EQ(classify_dyads(1, 16, 16), BlockLabel::hl_h);
  EXPECT_EQ(classify_dyads(1, 64, 16), BlockLabel::hl_h);
  EXPECT_EQ(classify_dyads(64, 1, 16), BlockLabel::lh_h);
  for (auto b : all_block_labels()) EXPECT_EQ(parse_block_label(to_string(b)), b);
  EXPECT_EQ(parse_zone("narrow_corona"), Zone::narrow_corona);
  EXPECT_THROW(parse_zone("nowhere"), std::invalid_argument);
}

TEST(Bilinear, ZeroInputs) {
  const SpectralField z(8);
  EXPECT_EQ(bilinear_full(z, z).max_abs_coefficient(), 0.0);
  EXPECT_EQ(bilinear_full_direct(z, z).max_abs_coefficient(), 0.0);
}

// Hand evaluation at one pair: output at k = k1 + k2 is Pi_k [ i (k . a) b ].
TEST(Bilinear, SingleModeSymbol) {
  const std::array<int, 3> k1{1, 0, 0}, k2{0, 1, 1};
  const std::array<Complex, 3> a{0.0, Complex(1.0, 0.5), 2.0}, b{Complex(0.0, 1.0), 3.0, -3.0};
  const SpectralField u = single_mode(8, k1, a), v = single_mode(8, k2, b);
  const SpectralField out = bilinear_full_direct(u, v);
  const Vec3 k{1, 1, 1};
  const Complex kdota = k.x * a[0] + k.y * a[1] + k.z * a[2];
  std::array<Complex, 3> w{Complex(0, 1) * kdota * b[0], Complex(0, 1) * kdota * b[1], Complex(0, 1) * kdota * b[2]};
  const Complex kdotw = k.x * w[0] + k.y * w[1] + k.z * w[2];
  const std::size_t idx = out.index(1, 1, 1);
  for (int c = 0; c < 3; ++c) EXPECT_LT(std::abs(out.at(c, idx) - (w[c] - k[c] * kdotw / 3.0)), 1e-14);
  EXPECT_LT(rel_diff(bilinear_full(u, v), out), 1e-12);
}

TEST(Bilinear, DirectMatchesConvolution) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SpectralField u = random_divfree_field(8, seed), v = random_divfree_field(8, seed + 10);
    EXPECT_LT(rel_diff(bilinear_full(u, v), bilinear_full_direct(u, v)), 1e-10);
    BlockSpec spec;
    spec.N = 2.0;
    spec.label = BlockLabel::hh_h;
    EXPECT_LT(rel_diff(bilinear_block(u, v, spec, BilinearMethod::convolution), bilinear_block(u, v, spec)), 1e-10);
  }
}

TEST(Bilinear, BlocksReconstructNonlinearity) {
  const SpectralField u = random_divfree_field(8, 21);
  SpectralField sum(8, true);
  for (double N : grid_dyads(8))
    for (auto label : {BlockLabel::lh_h, BlockLabel::hl_h, BlockLabel::hh_h, BlockLabel::hh_l}) {
      BlockSpec spec;
      spec.label = label;
      spec.N = N;
      sum += bilinear_block(u, u, spec);
    }
  EXPECT_LT(rel_diff(sum * -1.0, ns_nonlinearity(u)), 1e-10);
  EXPECT_LT(sum.reality_defect(), 1e-12);
  EXPECT_LT(sum.divergence_defect(), 1e-12);
}

TEST(Bilinear, ZoneErrorsAndEmptyCorona) {
  const SpectralField u = random_divfree_field(16, 4);
  BlockSpec spec;
  spec.zone = Zone::offdiag;
  spec.N = 2.0;
  EXPECT_THROW(bilinear_block(u, u, spec, BilinearMethod::convolution), std::invalid_argument);
  spec.zone = Zone::narrow_corona;
  spec.delta = Rational(1, 2);
  EXPECT_EQ(bilinear_block(u, u, spec).max_abs_coefficient(), 0.0);
  spec.N = 64.0;
  EXPECT_THROW(bilinear_block(u, u, spec), std::invalid_argument);
}

TEST(Bilinear, OffdiagVanishesOnDiagonalOnlyData) {
  // A single real mode only pairs with itself (|zeta| = 2|k|, killed by Leray) or its mirror (zeta = 0).
  const SpectralField u = single_mode(16, {2, 0, 0}, {0.0, 1.0, 0.0});
  for (double N : {1.0, 2.0}) EXPECT_LT(offdiag_block(u, N, DeltaParam(Rational(5, 8))).max_abs_coefficient(), 1e-14);
}

TEST(Solver, ZeroDataStaysZero) {
  NSConfig c;
  c.M = 16;
  c.horizon = 0.1;
  c.snapshots = 4;
  const Trajectory t = ns_run(c, SpectralField(16));
  ASSERT_EQ(t.fields.size(), 5u);
  for (const auto& f : t.fields) EXPECT_EQ(f.max_abs_coefficient(), 0.0);
}

// A single shear mode is an exact solution decaying like e^{-nu |k|^2 t}.
TEST(Solver, ShearModeDecaysExactly) {
  NSConfig c;
  c.M = 16;
  c.horizon = 0.2;
  c.snapshots = 4;
  const SpectralField u0 = single_mode(16, {2, 0, 0}, {0.0, 0.5, 0.0});
  const Trajectory t = ns_run(c, u0);
  for (std::size_t i = 0; i < t.fields.size(); ++i)
    EXPECT_LT(rel_diff(t.fields[i], u0 * std::exp(-4.0 * t.times[i])), 1e-10);
}

// Galerkin energy identity: dE/dt = -2 nu sum |k|^2 |u^|^2, checked per snapshot interval.
TEST(Solver, EnergyIdentityAndInvariants) {
  NSConfig c;
  c.M = 16;
  c.horizon = 0.1;
  c.snapshots = 20;
  const Trajectory t = ns_run(c);
  for (const auto& f : t.fields) {
    EXPECT_LT(f.divergence_defect(), 1e-12);
    EXPECT_LT(f.reality_defect(), 1e-12);
  }
  for (std::size_t i = 0; i + 1 < t.fields.size(); ++i) {
    const double e0 = t.fields[i].energy_sum(), e1 = t.fields[i + 1].energy_sum();
    EXPECT_LE(e1, e0);
    const double dt = t.times[i + 1] - t.times[i];
    const double d0 = std::pow(sobolev_norm(t.fields[i], 1.0), 2), d1 = std::pow(sobolev_norm(t.fields[i + 1], 1.0), 2);
    const double predicted = -2.0 * c.viscosity * 0.5 * (d0 + d1) * dt;
    EXPECT_NEAR(e1 - e0, predicted, 0.02 * std::abs(predicted));
  }
}

TEST(Solver, RejectsBadConfigs) {
  NSConfig c;
  c.M = 8;
  EXPECT_THROW(ns_run(c), std::invalid_argument);
  c.M = 16;
  c.viscosity = 0.0;
  EXPECT_THROW(ns_run(c), std::invalid_argument);
  c.viscosity = 1.0;
  c.amplitude = 1e4;
  c.dt = 0.05;
  EXPECT_THROW(ns_run(c), std::invalid_argument);
}

TEST(Solver, ConfigAndTrajectoryRoundTrip) {
  NSConfig c;
  c.M = 16;
  c.horizon = 0.05;
  c.snapshots = 3;
  c.seed = 99;
  const NSConfig back = config_from_json_text(config_to_json_text(c));
  EXPECT_EQ(config_to_json_text(back), config_to_json_text(c));
  const Trajectory t = ns_run(c);
  const auto dir = std::filesystem::temp_directory_path() / "nslab_traj_roundtrip";
  std::filesystem::remove_all(dir);
  write_trajectory(t, dir.string());
  const Trajectory r = read_trajectory(dir.string());
  ASSERT_EQ(r.fields.size(), t.fields.size());
  for (std::size_t i = 0; i < t.fields.size(); ++i) {
    EXPECT_EQ(r.times[i], t.times[i]);
    EXPECT_EQ(r.fields[i].data(), t.fields[i].data());
  }
  std::filesystem::remove_all(dir);
}

TEST(Scaling, RatioInvariantUnderAmplitude) {
  NSConfig c;
  c.M = 32;
  c.horizon = 0.05;
  c.snapshots = 4;
  const Trajectory t = ns_run(c);
  Trajectory d = t;
  for (auto& f : d.fields) f *= 2.0;
  const DeltaParam delta(Rational(5, 8));
  const auto a = scaling_fit(t, {1.0, 2.0, 4.0}, delta), b = scaling_fit(d, {1.0, 2.0, 4.0}, delta);
  EXPECT_NEAR(b.R, 4.0 * a.R, 1e-12 * b.R);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_TRUE(std::isfinite(a.rows[i].r));
    EXPECT_NEAR(b.rows[i].A, 4.0 * a.rows[i].A, 1e-12 * b.rows[i].A);
    EXPECT_NEAR(b.rows[i].r, a.rows[i].r, 1e-12 * a.rows[i].r);
  }
  ASSERT_TRUE(a.slope.has_value());
}

TEST(Scaling, DegenerateAndErrors) {
  NSConfig c;
  c.M = 32;
  c.horizon = 0.05;
  c.snapshots = 2;
  const Trajectory t = ns_run(c, single_mode(32, {2, 0, 0}, {0.0, 1.0, 0.0}));
  const auto rep = scaling_fit(t, {1.0, 2.0, 4.0}, DeltaParam(Rational(5, 8)));
  EXPECT_TRUE(rep.degenerate);
  EXPECT_FALSE(rep.slope.has_value());
  EXPECT_THROW(scaling_fit(t, {1.0, 2.0}, DeltaParam(Rational(5, 8))), std::invalid_argument);
  EXPECT_THROW(scaling_fit(t, {2.0, 4.0, 8.0}, DeltaParam(Rational(5, 8))), std::invalid_argument);
  EXPECT_TRUE(scaling_dyad_representable(32, 4.0));
  EXPECT_FALSE(scaling_dyad_representable(32, 8.0));
}
