#include "nslab/kernels.hpp"

#include <algorithm>
#include <random>

#include "nslab/packets.hpp"

namespace nslab {

KernelKind parse_kernel_kind(const std::string& s) {
  if (s == "schrodinger") return KernelKind::schrodinger;
  if (s == "heat") return KernelKind::heat;
  throw std::invalid_argument("unknown kernel kind '" + s + "'");
}

std::string to_string(KernelKind k) { return k == KernelKind::heat ? "heat" : "schrodinger"; }

namespace {

constexpr double kPrefactor = 4.0 * std::numbers::pi / (8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi);

inline double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

int oscillation_panels(double phase_span, double nodes_per_period, int order, int minimum) {
  const double periods = phase_span / (2.0 * std::numbers::pi);
  return std::max(minimum, static_cast<int>(std::ceil(periods * nodes_per_period / order)));
}

/// rho nodes with weights already multiplied by phi(rho) rho^2 e^{i rho^2 tau}.
void unit_rho_grid(double tau, double r_max, double npp, std::vector<double>& rho, std::vector<Complex>& g) {
  const int panels = oscillation_panels(3.75 * std::abs(tau) + 1.5 * r_max, npp, 16, 24);
  const auto edges = uniform_edges(0.5, 2.0, panels);
  const auto grid = composite_grid(std::span<const double>(edges), 16);
  rho = grid.nodes;
  g.resize(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) {
    const double p = rho[j];
    g[j] = kPrefactor * grid.weights[j] * lp_bump(p) * p * p * std::exp(Complex(0.0, p * p * tau));
  }
}

}  // namespace

Complex unit_kernel(double tau, double r, double nodes_per_period) {
  std::vector<double> rho;
  std::vector<Complex> g;
  unit_rho_grid(tau, r, nodes_per_period, rho, g);
  Complex sum = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) sum += g[j] * sinc(rho[j] * r);
  return sum;
}

Complex schrodinger_kernel(double N, double t, double r) {
  const int panels = oscillation_panels(3.75 * N * N * std::abs(t) + 1.5 * N * r, 12.0, 20, 24);
  const auto edges = uniform_edges(0.5 * N, 2.0 * N, panels);
  return kPrefactor * integrate_panels(
                          [&](double s) {
                            return lp_bump(s / N) * s * s * std::exp(Complex(0.0, s * s * t)) * sinc(s * r);
                          },
                          std::span<const double>(edges), 20);
}

Complex schrodinger_kernel(double N, double t, const Vec3& x) { return schrodinger_kernel(N, t, norm(x)); }

double heat_kernel_localized(double N, double t, double r) {
  const int panels = oscillation_panels(1.5 * N * r, 12.0, 20, 24);
  const auto edges = uniform_edges(0.5 * N, 2.0 * N, panels);
  return kPrefactor * integrate_panels(
                          [&](double s) { return lp_bump(s / N) * s * s * std::exp(-s * s * t) * sinc(s * r); },
                          std::span<const double>(edges), 20);
}

double heat_gaussian(double t, double r) {
  return std::pow(4.0 * std::numbers::pi * t, -1.5) * std::exp(-r * r / (4.0 * t));
}

double heat_cylinder_t0(double N) { return 3.0 / std::sqrt(N); }

SupResult kernel_sup_on_cylinder(double N, KernelKind kind, std::size_t samples, std::uint64_t seed) {
  require_dyad(N);
  const double s = 1.0 / std::sqrt(N);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SupResult res;
  res.samples = samples;
  if (kind == KernelKind::schrodinger) {
    auto val = [&](double t, double r) { return N * N * N * std::abs(unit_kernel(N * N * t, N * r)); };
    res.origin_value = val(0.0, 0.0);
    res.sup = res.origin_value;
    for (std::size_t i = 1; i < samples; ++i) {
      // |K| is even in t, and uniform-in-volume radii.
      const double t = s * U(rng);
      const double r = 2.0 * s * std::cbrt(U(rng));
      res.sup = std::max(res.sup, val(t, r));
    }
    res.ratio = res.sup / (N * N * N);
  } else {
    const double t0 = heat_cylinder_t0(N);
    res.origin_value = heat_gaussian(t0, 0.0);
    res.sup = std::max(res.origin_value, heat_gaussian(t0 - s, 0.0));
    for (std::size_t i = 2; i < samples; ++i) {
      const double t = t0 - s + 2.0 * s * U(rng);
      const double r = 2.0 * s * std::cbrt(U(rng));
      res.sup = std::max(res.sup, heat_gaussian(t, r));
    }
    res.ratio = res.sup / std::pow(N, 0.75);
  }
  return res;
}

namespace {

/// Integrates 2 * int_0^T dtau int_0^R 4 pi r^2 |K(tau, r)|^3 dr for a kernel
/// given in scaled variables; `eval(tau, rs, out)` fills |K| at the radii rs.
template <class Eval>
double l3_cubed_scaled(double T, double R, int refine, Eval&& eval, double* tail, double* t_cut) {
  const double T_int = std::min(T, 4.0 * R + 64.0);
  if (t_cut) *t_cut = T_int;
  std::vector<double> t_edges;
  const int first = 4 * refine;
  const double t1 = std::min(1.0, T_int);
  for (int i = 0; i <= first; ++i) t_edges.push_back(t1 * i / first);
  const double growth = std::pow(1.25, 1.0 / refine);
  double t = t1;
  while (t < T_int) {
    t = std::min(T_int, t * growth);
    t_edges.push_back(t);
  }
  const auto tgrid = composite_grid(std::span<const double>(t_edges), 8);

  auto ball = [&](double tau) {
    const double width = std::clamp(tau / 8.0, 0.5, 8.0) / refine;
    const int panels = std::max(2, static_cast<int>(std::ceil(R / width)));
    const auto redges = uniform_edges(0.0, R, panels);
    const auto rgrid = composite_grid(std::span<const double>(redges), 8);
    std::vector<double> mod(rgrid.nodes.size());
    eval(tau, rgrid.nodes, mod);
    double acc = 0.0;
    for (std::size_t i = 0; i < mod.size(); ++i) {
      const double r = rgrid.nodes[i];
      acc += rgrid.weights[i] * 4.0 * std::numbers::pi * r * r * mod[i] * mod[i] * mod[i];
    }
    return acc;
  };

  double total = 0.0;
  std::vector<double> parts(tgrid.nodes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < tgrid.nodes.size(); ++i) parts[i] = tgrid.weights[i] * ball(tgrid.nodes[i]);
  for (double p : parts) total += p;
  total *= 2.0;

  if (tail) {
    // Beyond the cut the ball sits inside the dispersive region, where the
    // integrand decays like tau^{-9/2}.
    double est = 0.0;
    if (T > T_int) {
      const double f = ball(T_int);
      est = 2.0 * f * T_int / 3.5 * (1.0 - std::pow(T / T_int, -3.5));
    }
    *tail = est / total;
  }
  return total;
}

}  // namespace

double unit_kernel_L3_cubed(double T, double R, int refine, double* tail, double* t_cut) {
  const double npp = 10.0 * refine;
  auto eval = [&](double tau, const std::vector<double>& rs, std::vector<double>& out) {
    std::vector<double> rho;
    std::vector<Complex> g;
    unit_rho_grid(tau, rs.empty() ? 0.0 : rs.back(), npp, rho, g);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      Complex sum = 0.0;
      for (std::size_t j = 0; j < rho.size(); ++j) sum += g[j] * sinc(rho[j] * rs[i]);
      out[i] = std::abs(sum);
    }
  };
  return l3_cubed_scaled(T, R, refine, eval, tail, t_cut);
}

L3Result kernel_L3_on_cylinder(double N, KernelKind kind) {
  require_dyad(N);
  const double s = 1.0 / std::sqrt(N);
  L3Result res;
  if (kind == KernelKind::schrodinger) {
    const double T = 2.0 * std::pow(N, 1.5), R = 4.0 * std::sqrt(N);
    const double c1 = unit_kernel_L3_cubed(T, R, 1, &res.tail_estimate, &res.truncation_time);
    const double c2 = unit_kernel_L3_cubed(T, R, 2);
    res.norm = std::pow(N, 4.0 / 3.0) * std::cbrt(c1);
    res.refined_norm = std::pow(N, 4.0 / 3.0) * std::cbrt(c2);
    res.ratio = res.norm / std::pow(N, 4.0 / 3.0);
  } else {
    const double t0 = heat_cylinder_t0(N);
    auto cubed = [&](int order) {
      const auto te = uniform_edges(t0 - 2.0 * s, t0 + 2.0 * s, 4);
      const auto re = uniform_edges(0.0, 4.0 * s, 4);
      return integrate_panels(
          [&](double t) {
            return integrate_panels(
                [&](double r) {
                  const double g = heat_gaussian(t, r);
                  return 4.0 * std::numbers::pi * r * r * g * g * g;
                },
                std::span<const double>(re), order);
          },
          std::span<const double>(te), order);
    };
    res.norm = std::cbrt(cubed(16));
    res.refined_norm = std::cbrt(cubed(32));
    res.ratio = res.norm / std::pow(N, 1.0 / 12.0);
  }
  res.refinement_gap = std::abs(res.norm - res.refined_norm) / res.refined_norm;
  if (res.refinement_gap > 0.01)
    throw std::runtime_error("L3 quadrature did not converge under refinement (gap " +
                             std::to_string(res.refinement_gap) + ")");
  return res;
}

RescalingCheck kernel_rescaling_check(double N) {
  require_dyad(N);
  RescalingCheck c;
  const double M = 4.0 * N;
  c.lhs = std::pow(M, 4.0 / 3.0) * std::cbrt(unit_kernel_L3_cubed(2.0 * std::pow(M, 1.5), 4.0 * std::sqrt(M), 1));

  // E' in physical variables: |t| <= 16 N^{-1/2}, |x| <= 8 N^{-1/2}; integrate
  // |K_N|^3 dt dx with the direct kernel, written over the scaled nodes.
  const double T = 16.0 * std::pow(N, 1.5), R = 8.0 * std::sqrt(N);
  auto eval = [&](double tau, const std::vector<double>& rs, std::vector<double>& out) {
    for (std::size_t i = 0; i < rs.size(); ++i)
      out[i] = std::abs(schrodinger_kernel(N, tau / (N * N), rs[i] / N));
  };
  // dt d^3x = N^{-5} dtau d^3y
  const double phys = l3_cubed_scaled(T, R, 1, eval, nullptr, nullptr) / std::pow(N, 5.0);
  c.rhs = std::pow(4.0, 4.0 / 3.0) * std::cbrt(phys);
  c.rel_diff = std::abs(c.lhs - c.rhs) / c.lhs;
  return c;
}

StrichartzResult strichartz_ratio(double N, std::size_t trials, KernelKind kind, std::uint64_t seed) {
  require_dyad(N);
  StrichartzResult res;
  res.N = N;
  const double s = 1.0 / std::sqrt(N);
  const bool heat = kind == KernelKind::heat;
  // Schroedinger: packets at frequency N, widths from 3/N up to the cylinder scale.
  // Heat: unmodulated Gaussians on the cylinder centred at t0, widths around sqrt(t0).
  const double t0 = heat ? heat_cylinder_t0(N) : 0.0;
  const double sigma_min = heat ? 0.25 * s : 3.0 / N;
  const double sigma_max = heat ? 4.0 * std::sqrt(t0) : std::max(sigma_min, s);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (std::size_t i = 0; i < trials; ++i) {
    Vec3 dir{0.0, 0.0, 1.0};
    double sigma = heat ? std::sqrt(t0) : sigma_min;
    Vec3 x0{};
    double tc = 0.0;
    if (i > 0) {
      const double z = 2.0 * U(rng) - 1.0, ph = 2.0 * std::numbers::pi * U(rng);
      dir = {std::sqrt(1 - z * z) * std::cos(ph), std::sqrt(1 - z * z) * std::sin(ph), z};
      sigma = sigma_min * std::pow(sigma_max / sigma_min, U(rng));
      const double z2 = 2.0 * U(rng) - 1.0, ph2 = 2.0 * std::numbers::pi * U(rng);
      x0 = 2.0 * s * std::cbrt(U(rng)) * Vec3{std::sqrt(1 - z2 * z2) * std::cos(ph2), std::sqrt(1 - z2 * z2) * std::sin(ph2), z2};
      tc = s * (2.0 * U(rng) - 1.0);
    }
    ++res.trials;
    double ratio = 0.0;
    if (!heat) {
      const Vec3 xi0 = N * dir;
      // Shift so that the packet centre sits at x0 at time tc.
      const WavePacket p(xi0, sigma, x0 - 2.0 * tc * xi0);
      // Packets carry unit L2 norm, so the ratio is the cylinder norm itself.
      ratio = packet_lp_norm(p, 6.0, Cylinder::at_scale(N));
    } else {
      const WavePacket p(Vec3{}, sigma, x0);
      auto dens = [&](double t) { return p.modulus_squared(Complex(0.0, -t)).pow(3.0); };
      const double I = cylinder_integral(dens, t0 - s, t0 + s, Vec3{}, 2.0 * s);
      ratio = std::pow(I, 1.0 / 6.0);
    }
    if (ratio > res.max_ratio) {
      res.max_ratio = ratio;
      res.best_sigma = sigma;
    }
  }
  res.normalized = res.max_ratio / std::pow(N, heat ? 1.0 / 12.0 : 2.0 / 3.0);
  return res;
}

}  // namespace nslab
