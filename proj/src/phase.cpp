#include "nslab/phase.hpp"

#include <algorithm>

namespace nslab {

double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double phase_value(double t, const Vec3& x, const FreqPair& pair) {
  return dot(x, pair.zeta()) + 4.0 * t * pair.rho1() * pair.rho2();
}

PhaseHessian phase_hessian(double t, double rho1, double rho2) {
  PhaseHessian h;
  h.A = {{{0.0, 4.0 * rho2, 4.0 * rho1}, {4.0 * rho2, 0.0, 4.0 * t}, {4.0 * rho1, 4.0 * t, 0.0}}};
  h.det = 128.0 * rho1 * rho2 * t;
  return h;
}

Mat3 phase_hessian_fd(double t, double rho1, double rho2, const Vec3& x, const Vec3& zeta, double rel_step) {
  const double base = dot(x, zeta);
  auto phi = [&](const std::array<double, 3>& p) { return base + 4.0 * p[0] * p[1] * p[2]; };
  const std::array<double, 3> p0{t, rho1, rho2};
  std::array<double, 3> h{};
  for (int i = 0; i < 3; ++i) h[i] = rel_step * std::max(std::abs(p0[i]), 1e-300);
  Mat3 H{};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      if (i == j) {
        auto pp = p0, pm = p0;
        pp[i] += h[i];
        pm[i] -= h[i];
        H[i][i] = (phi(pp) - 2.0 * phi(p0) + phi(pm)) / (h[i] * h[i]);
      } else {
        auto a = p0, b = p0, c = p0, d = p0;
        a[i] += h[i]; a[j] += h[j];
        b[i] += h[i]; b[j] -= h[j];
        c[i] -= h[i]; c[j] += h[j];
        d[i] -= h[i]; d[j] -= h[j];
        H[i][j] = H[j][i] = (phi(a) - phi(b) - phi(c) + phi(d)) / (4.0 * h[i] * h[j]);
      }
    }
  }
  return H;
}

DerivativeMagnitudes derivative_magnitudes(double rho1, double rho2, double t) {
  return {4.0 * rho1 * std::abs(rho2), 4.0 * std::abs(t) * std::abs(rho2), 4.0 * std::abs(t) * rho1};
}

DerivativeMagnitudes derivative_magnitudes(const FreqPair& pair, double t) {
  return derivative_magnitudes(pair.rho1(), pair.rho2(), t);
}

ExponentExpr ibp_gain() { return ExponentExpr(Rational(-6), Rational(4)); }

ExponentExpr ibp_gain(const DeltaParam& delta) {
  return ExponentExpr(ibp_gain().eval(delta));
}

double ibp_gain_ratio(double N, double delta) {
  const auto d = derivative_magnitudes(N, std::pow(N, 1.0 - delta), 1.0 / std::sqrt(N));
  const double gain = 1.0 / (d.dt * d.dt * d.drho1 * d.drho1 * d.drho2 * d.drho2);
  return gain / std::pow(N, -6.0 + 4.0 * delta);
}

Complex oscillatory_integral(double t_lo, double t_hi, double varpi, const Amplitude& a, int nodes_per_period) {
  if (!(t_lo < t_hi)) throw std::invalid_argument("degenerate window: need t_lo < t_hi");
  constexpr int order = 20;
  const double len = t_hi - t_lo;
  const double periods = std::abs(varpi) * len / (2.0 * std::numbers::pi);
  const int panels = std::max(4, static_cast<int>(std::ceil(periods * nodes_per_period / order)));
  const auto edges = uniform_edges(t_lo, t_hi, panels);
  return integrate_panels([&](double t) { return std::exp(Complex(0.0, varpi * t)) * a(t); },
                          std::span<const double>(edges), order);
}

double window_bump(double t, double t_lo, double t_hi) {
  const double s = (t - t_lo) / (t_hi - t_lo);
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return glue(s) * glue(1.0 - s) / (glue(0.5) * glue(0.5));
}

namespace {

template <class F>
Complex integrate_0t(F&& f, double t, double zeta_sq) {
  // Panels fine enough to resolve the exponential layer of width 1/Z at s = t.
  const int panels = std::clamp(static_cast<int>(std::ceil(t * zeta_sq / 2.0)), 8, 4096);
  const auto edges = uniform_edges(0.0, t, panels);
  return integrate_panels(f, std::span<const double>(edges), 20);
}

DuhamelResidual finish(Complex lhs, Complex rhs) {
  const double scale = std::max(std::abs(lhs), 1e-300);
  return {lhs, rhs, std::abs(lhs - rhs) / scale};
}

}  // namespace

DuhamelResidual duhamel_normal_form_check(const SmoothFunction& F, double t, double zeta_sq, double varpi) {
  const Complex lambda(zeta_sq, varpi);
  const Complex I(0.0, 1.0);
  auto kernel = [&](double s) { return std::exp(-(t - s) * zeta_sq); };
  const Complex lhs = integrate_0t([&](double s) { return kernel(s) * F.f(s); }, t, zeta_sq);
  const Complex tail =
      integrate_0t([&](double s) { return kernel(s) * (F.df(s) - I * varpi * F.f(s)); }, t, zeta_sq);
  const Complex rhs = (F.f(t) - std::exp(-t * zeta_sq) * F.f(0.0)) / lambda - tail / lambda;
  return finish(lhs, rhs);
}

DuhamelResidual duhamel_printed_form_check(const SmoothFunction& F, double t, double zeta_sq, double varpi) {
  const Complex lambda(zeta_sq, varpi);
  const Complex I(0.0, 1.0);
  auto kernel = [&](double s) { return std::exp(-(t - s) * zeta_sq); };
  const Complex lhs = integrate_0t([&](double s) { return kernel(s) * F.f(s); }, t, zeta_sq);
  const Complex tail = integrate_0t(
      [&](double s) { return kernel(s) * std::exp(I * (s * varpi)) * (F.df(s) - I * varpi * F.f(s)); }, t,
      zeta_sq);
  const Complex rhs = std::exp(I * (t * varpi)) * F.f(t) / lambda - F.f(0.0) / lambda - tail / lambda;
  return finish(lhs, rhs);
}

HeatReduction heat_amplitude_remainder(double zeta_sq, double varpi, double t) {
  if (t < 0.0) throw std::invalid_argument("t must be non-negative");
  const Complex lambda(zeta_sq, varpi);
  HeatReduction h;
  h.amplitude = 1.0 / lambda;
  const Complex e = std::exp(-t * lambda);
  h.normal_form = (1.0 - e) / lambda;
  h.remainder = std::abs(h.normal_form - h.amplitude);
  h.remainder_bound = std::abs(h.amplitude) * std::exp(-t * zeta_sq);
  return h;
}

HeatReduction heat_amplitude_remainder(const FreqPair& pair, double t) {
  const Vec3 z = pair.zeta();
  return heat_amplitude_remainder(dot(z, z), phase_frequency(pair), t);
}

}  // namespace nslab
