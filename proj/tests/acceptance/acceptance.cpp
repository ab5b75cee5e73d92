// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and runtime
// limits are fixed here and never read from the command line.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nslab/bilinear.hpp"
#include "nslab/freqgeo.hpp"
#include "nslab/kernels.hpp"
#include "nslab/ledger.hpp"
#include "nslab/ns_solver.hpp"
#include "nslab/packets.hpp"
#include "nslab/phase.hpp"
#include "nslab/scaling.hpp"
#include "nslab/spectral_field.hpp"
#include "nslab/symbols.hpp"

using namespace nslab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// 1. Exact ledger totals and positive margins.
Outcome ledger_exactness() {
  const std::vector<std::pair<std::string, ExponentExpr>> pinned = {
      {"local-balance", {Rational(-21, 4)}},         {"local-A", {Rational(-21, 4)}},
      {"nullform-local", {Rational(-19, 4), Rational(-1)}}, {"coronal-global", {Rational(-7, 4), Rational(-1)}},
      {"global-A", {Rational(-15, 4)}},              {"heat-local", {Rational(-19, 6)}},
      {"local-B", {Rational(-19, 6)}},               {"global-B", {Rational(-25, 12)}}};
  bool ok = canonical_tables().size() == 8;
  std::string bad;
  for (const auto& [name, total] : pinned) {
    const BalanceTable& t = canonical_table(name);
    if (!(t.total() == total)) {
      ok = false;
      bad += " " + name + "=" + t.total().to_string();
    }
    for (const Rational& d : {Rational(51, 100), Rational(5, 8)}) {
      if (!t.active_at(d)) continue;
      if (!(logfree_margin(t.total(), DeltaParam(d)) > 0)) {
        ok = false;
        bad += " margin(" + name + ")";
      }
    }
  }
  return {ok, ok ? "eight totals exact, margins positive at 51/100 and 5/8" : "mismatch:" + bad};
}

// 2. det A against finite differences.
Outcome hessian_determinant() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.05 + 2.0 * U(rng), r1 = 1.0 + 1000.0 * U(rng), r2 = (2.0 * U(rng) - 1.0) * r1;
    const auto H = phase_hessian(t, r1, r2);
    const auto fd = phase_hessian_fd(t, r1, r2);
    worst = std::max(worst, std::abs(det3(fd) - H.det) / std::abs(H.det));
  }
  return {worst < 1e-6, "max rel err " + num(worst) + " (limit 1e-6)"};
}

// 3. Null-form suppression on the narrow corona.
Outcome nullform_corona() {
  const double c = ZoneConstants{}.corona_c;
  const DeltaParam d(Rational(5, 8));
  std::vector<double> sups, normed;
  for (double N : {256.0, 1024.0, 4096.0}) {
    const auto s = corona_sup_scan(N, d, 20000, 1);
    sups.push_back(s.max_ratio);
    normed.push_back(s.max_ratio_eta_norm);
  }
  const bool empty = corona_sup_scan(1024.0, DeltaParam(Rational(1, 2)), 20000, 1).empty_zone;
  const double sup = *std::max_element(sups.begin(), sups.end());
  const bool bound = sup <= 2.0 * c * (1.0 + 1e-9);
  const bool stable = spread(sups) < 1.2;
  return {bound && stable && empty,
          "sup " + num(sup) + " vs 2c = " + num(2.0 * c) + ", spread " + num(spread(sups)) +
              ", empty at 1/2: " + (empty ? "yes" : "no") + "; sup of ratio*N/|eta| = " +
              num(*std::max_element(normed.begin(), normed.end()))};
}

// 4. Kernel L3 bands and the exact rescaling cross-check.
Outcome kernel_scaling() {
  std::vector<double> s, h;
  for (double N : {16.0, 32.0, 64.0}) s.push_back(kernel_L3_on_cylinder(N, KernelKind::schrodinger).ratio);
  for (double N : {64.0, 128.0, 256.0}) h.push_back(kernel_L3_on_cylinder(N, KernelKind::heat).ratio);
  const auto rc = kernel_rescaling_check(16.0);
  const bool ok = spread(s) < 2.0 && spread(h) < 2.0 && rc.rel_diff < 0.01;
  return {ok, "schrodinger spread " + num(spread(s)) + ", heat spread " + num(spread(h)) + ", rescaling " +
                  num(rc.rel_diff)};
}

// 5. Local L6 packet ratio against N^{2/3}.
Outcome local_l6() {
  std::vector<double> Ns{16.0, 32.0, 64.0, 128.0}, c, lr, ln;
  for (double N : Ns) {
    const auto r = strichartz_ratio(N, 40);
    c.push_back(r.normalized);
    lr.push_back(std::log2(r.max_ratio));
    ln.push_back(std::log2(N));
  }
  const double slope = fit_slope(ln, lr);
  return {spread(c) < 2.0, "C spread " + num(spread(c)) + " over 2^4..2^7; fitted exponent " + num(slope) +
                               " (informational; references 2/3 and -1/2)"};
}

// 6. Rank-4 decoupling experiment.
Outcome decoupling() {
  std::vector<double> ratios;
  bool holder = true, plane = true;
  for (double N : {64.0, 256.0, 1024.0}) {
    const double r = 1.0 / std::sqrt(N);
    const auto d = decoupling_ratio({{1, 0, 0}, r}, {{0, 1, 0}, r}, N);
    holder = holder && d.holder_ratio <= 1.0;
    plane = plane && d.plane_wave_ratio > d.ratio;
    ratios.push_back(d.ratio);
  }
  const bool ok = spread(ratios) < 2.0 && holder && plane;
  return {ok, "spread " + num(spread(ratios)) + ", Hoelder <= 1: " + (holder ? "yes" : "no") +
                  ", plane wave larger: " + (plane ? "yes" : "no")};
}

// 7. Duhamel normal form and the remainder identity.
Outcome duhamel() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0), P(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double c0 = U(rng), c1 = U(rng), c2 = U(rng), c3 = U(rng), b = 3.0 * U(rng);
    const SmoothFunction F{[=](double s) { return Complex(c0 + s * (c1 + s * (c2 + s * c3)) + std::exp(b * s)); },
                           [=](double s) { return Complex(c1 + s * (2 * c2 + 3 * s * c3) + b * std::exp(b * s)); }};
    const double t = 0.05 + 0.2 * P(rng), Z = 1.0 + 200.0 * P(rng), w = 100.0 * U(rng);
    worst = std::max(worst, duhamel_normal_form_check(F, t, Z, w).residual);
  }
  double rem = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto h = heat_amplitude_remainder(100.0 * P(rng), 1000.0 * U(rng), P(rng));
    rem = std::max(rem, std::abs(h.remainder - h.remainder_bound) / std::abs(h.amplitude));
  }
  return {worst < 1e-9 && rem < 1e-12, "max residual " + num(worst) + ", remainder identity " + num(rem)};
}

// 8. Bilinear oracle and block reconstruction.
Outcome bilinear_oracle() {
  double worst = 0.0, recon = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SpectralField u = random_divfree_field(8, seed), v = random_divfree_field(8, seed + 100);
    const SpectralField a = bilinear_full(u, v), b = bilinear_full_direct(u, v);
    worst = std::max(worst, (a - b).max_abs_coefficient() / b.max_abs_coefficient());
    SpectralField sum(8, true);
    for (double N : grid_dyads(8))
      for (auto label : {BlockLabel::lh_h, BlockLabel::hl_h, BlockLabel::hh_h, BlockLabel::hh_l}) {
        BlockSpec spec;
        spec.label = label;
        spec.N = N;
        sum += bilinear_block(u, u, spec);
      }
    const SpectralField nl = ns_nonlinearity(u);
    recon = std::max(recon, (sum + nl).max_abs_coefficient() / nl.max_abs_coefficient());
  }
  return {worst < 1e-10 && recon < 1e-10, "direct vs convolution " + num(worst) + ", blocks vs solver " + num(recon)};
}

// 9. Time partition of unity and its derivative bounds.
Outcome partition() {
  std::vector<double> Ns{64.0, 128.0, 256.0, 512.0}, C, sums;
  double err = 0.0;
  for (double N : Ns) {
    const auto st = partition_stats(TimePartition(N, 1.0), 20000);
    err = std::max(err, st.max_sum_sq_error);
    C.push_back(st.sup_sum_abs_d1 / std::sqrt(N));
    sums.push_back(st.sup_sum_abs_d1);
  }
  const double dbl1 = sums[2] / sums[0] / 2.0, dbl2 = sums[3] / sums[1] / 2.0;
  const bool doubling = std::abs(dbl1 - 1.0) < 0.1 && std::abs(dbl2 - 1.0) < 0.1;
  return {err <= 1e-12 && spread(C) < 1.5 && doubling,
          "sum error " + num(err) + ", C spread " + num(spread(C)) + ", doubling ratios " + num(2 * dbl1) + " " +
              num(2 * dbl2)};
}

// 10. Off-diagonal scaling on a 32^3 run. The slope band is informational when 8 and 9 pass.
Outcome offdiag_scaling(bool pipeline_ok) {
  NSConfig c;  // 32^3, T = 1, viscosity 1, seeded broadband data
  const Trajectory traj = ns_run(c);
  std::vector<double> dyads;
  for (double N = 1.0; scaling_dyad_representable(c.M, N); N *= 2.0) dyads.push_back(N);
  const auto rep = scaling_fit(traj, dyads, DeltaParam(Rational(5, 8)));
  bool finite = !rep.degenerate && dyads.size() >= 3;
  std::string rows;
  for (const auto& r : rep.rows) {
    finite = finite && std::isfinite(r.r);
    rows += " N=" + num(r.N) + " r=" + num(r.r);
  }
  BlockSpec spec;
  spec.zone = Zone::narrow_corona;
  spec.delta = Rational(1, 2);
  double nar = 0.0;
  for (double N : dyads) {
    spec.N = N;
    nar = std::max(nar, bilinear_block(traj.fields.front(), traj.fields.front(), spec).max_abs_coefficient());
  }
  const double slope = rep.slope.value_or(std::nan(""));
  const bool in_band = slope <= -0.8;
  const bool ok = finite && nar == 0.0 && (in_band || pipeline_ok);
  std::string detail = "slope " + num(slope) + (in_band ? " inside" : " outside") + " band <= -0.8;" + rows +
                       "; R " + num(rep.R) + "; narrow corona max " + num(nar);
  if (!in_band) detail += pipeline_ok ? "; slope miss informational (criteria 8, 9 pass)" : "; criteria 8/9 failed";
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  bool ok8 = false, ok9 = false;
  const std::vector<Criterion> criteria = {
      {1, "ledger exactness", 1.0, ledger_exactness},
      {2, "det A finite-difference oracle", 5.0, hessian_determinant},
      {3, "null-form corona", 30.0, nullform_corona},
      {4, "kernel scaling", 120.0, kernel_scaling},
      {5, "local L6", 120.0, local_l6},
      {6, "decoupling experiment", 180.0, decoupling},
      {7, "Duhamel normal form", 10.0, duhamel},
      {8, "bilinear oracle", 30.0, [&] { auto o = bilinear_oracle(); ok8 = o.pass; return o; }},
      {9, "partition bounds", 10.0, [&] { auto o = partition(); ok9 = o.pass; return o; }},
      {10, "off-diagonal scaling", 900.0, [&] { return offdiag_scaling(ok8 && ok9); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s  %2d  %-32s %7.2fs (limit %gs)  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.limit_seconds, o.detail.c_str(), in_time ? "" : "; runtime limit exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
