#include "nslab/packets.hpp"

#include <algorithm>

namespace nslab {

IsoGaussian operator*(const IsoGaussian& f, const IsoGaussian& g) {
  // a|x-c|^2 + b|x-d|^2 = (a+b)|x - m|^2 + ab/(a+b) |c-d|^2
  const double s = f.a + g.a;
  const Vec3 m = (f.a * f.center + g.a * g.center) / s;
  const Vec3 diff = f.center - g.center;
  return {f.log_amp + g.log_amp - f.a * g.a / s * dot(diff, diff), s, m};
}

double gaussian_ball_integral(const IsoGaussian& g, const Vec3& ball_center, double R) {
  const double d = norm(g.center - ball_center);
  const double a = g.a;
  const double w = 1.0 / std::sqrt(a);
  auto f = [&](double r) {
    const double x = 4.0 * a * r * d;
    const double shell = x < 1e-12 ? 2.0 : -std::expm1(-x) / (0.5 * x);
    const double e = r - d;
    return 2.0 * std::numbers::pi * r * r * std::exp(-a * e * e) * shell;
  };
  std::vector<double> edges;
  for (int i = 0; i <= 8; ++i) edges.push_back(R * i / 8.0);
  for (int j = -8; j <= 8; ++j) {
    const double b = d + j * w;
    if (b > 0.0 && b < R) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return std::exp(g.log_amp) * integrate_panels(f, std::span<const double>(edges), 16);
}

WavePacket::WavePacket(const Vec3& xi0, double sigma, const Vec3& x0)
    : xi0_(xi0), k_(norm(xi0)), sigma_(sigma), x0_(x0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("packet width must be positive");
  if (k_ > 0.0) {
    e1_ = xi0 / k_;
  } else {
    e1_ = {1.0, 0.0, 0.0};
  }
  e2_ = any_orthogonal(e1_);
  e3_ = cross(e1_, e2_);
}

namespace {

Complex log_g1(Complex t, double y, double k, double sigma) {
  const Complex I(0.0, 1.0);
  const Complex z = 1.0 + I * t / (sigma * sigma);
  const Complex shift = y - 2.0 * k * t;
  return -0.25 * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(sigma * z) -
         shift * shift / (4.0 * sigma * sigma * z) + I * k * (y - k * t);
}

}  // namespace

Complex WavePacket::value_at(Complex t, const Vec3& x) const {
  const Vec3 d = x - x0_;
  return std::exp(log_g1(t, dot(d, e1_), k_, sigma_) + log_g1(t, dot(d, e2_), 0.0, sigma_) +
                  log_g1(t, dot(d, e3_), 0.0, sigma_));
}

IsoGaussian WavePacket::modulus_squared(Complex t) const {
  const Complex I(0.0, 1.0);
  const double s2 = sigma_ * sigma_;
  const Complex q = 1.0 / (4.0 * s2 * (1.0 + I * t / s2));
  const double alpha = 2.0 * q.real();
  const double c = 2.0 * k_ * (q * t).real() / q.real();
  const double two_re_c = -0.5 * std::log(2.0 * std::numbers::pi) - std::log(sigma_) -
                          std::log(std::abs(1.0 + I * t / s2));
  const double log_amp =
      3.0 * two_re_c + alpha * c * c - 8.0 * k_ * k_ * (q * t * t).real() + 2.0 * k_ * k_ * t.imag();
  return {log_amp, alpha, x0_ + c * e1_};
}

double WavePacket::frequency_concentration(double N, const Vec3& axis, double max_angle, double lo,
                                           double hi) const {
  // |f^(w)|^2 is Gaussian around xi0 with per-axis standard deviation 1/(2 sigma).
  // The cone test is taken about the packet axis; `axis` only fixes its orientation sign.
  const double s = 0.5 / sigma_;
  const double sgn = dot(axis, e1_) >= 0.0 ? 1.0 : -1.0;
  const double mean = sgn * k_;
  const double tan_m = std::tan(std::min(max_angle, 0.5 * std::numbers::pi - 1e-12));
  auto rayleigh = [&](double b) { return -std::expm1(-b * b / (2.0 * s * s)); };
  auto f = [&](double a) {
    if (a <= 0.0) return 0.0;
    const double b_lo = std::sqrt(std::max(0.0, lo * lo * N * N - a * a));
    const double b_hi = std::min(a * tan_m, std::sqrt(std::max(0.0, hi * hi * N * N - a * a)));
    if (b_hi <= b_lo) return 0.0;
    const double e = (a - mean) / s;
    const double pdf = std::exp(-0.5 * e * e) / (s * std::sqrt(2.0 * std::numbers::pi));
    return pdf * (rayleigh(b_hi) - rayleigh(b_lo));
  };
  const auto edges = uniform_edges(mean - 14.0 * s, mean + 14.0 * s, 112);
  return integrate_panels(f, std::span<const double>(edges), 16);
}

WavePacket make_packet(const Tile& tile, double N, const Vec3& x0) {
  return WavePacket(N * normalized(tile.center), 1.0 / std::sqrt(N), x0);
}

double cylinder_integral(const std::function<IsoGaussian(double)>& density, double t_lo, double t_hi,
                         const Vec3& x_center, double R, const std::vector<double>& t_breaks) {
  // The integrand is negligible whenever the Gaussian sits more than twelve
  // widths outside the ball. Locate the active stretches on a scan grid (which
  // includes the hint times), then integrate those with composite Gauss panels
  // short enough that the centre moves less than half a width, and the width
  // changes by a bounded factor, across each panel.
  std::vector<double> scan = uniform_edges(t_lo, t_hi, 8192);
  for (double b : t_breaks)
    if (b > t_lo && b < t_hi) scan.push_back(b);
  std::sort(scan.begin(), scan.end());
  scan.erase(std::unique(scan.begin(), scan.end()), scan.end());
  std::vector<char> active(scan.size());
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const IsoGaussian g = density(scan[i]);
    const double w = 1.0 / std::sqrt(g.a);
    active[i] = norm(g.center - x_center) - R <= 12.0 * w;
  }
  auto f = [&](double t) { return gaussian_ball_integral(density(t), x_center, R); };
  double total = 0.0;
  std::size_t i = 0;
  while (i < scan.size()) {
    if (!active[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < scan.size() && active[j + 1]) ++j;
    const std::size_t lo = i > 0 ? i - 1 : 0, hi = std::min(j + 1, scan.size() - 1);
    std::vector<double> edges{scan[lo]};
    IsoGaussian prev = density(scan[lo]);
    double need = 0.0;
    for (std::size_t c = lo + 1; c <= hi; ++c) {
      const IsoGaussian next = density(scan[c]);
      const double wmin = std::min(1.0 / std::sqrt(prev.a), 1.0 / std::sqrt(next.a));
      const double cell = std::max(2.0 * norm(next.center - prev.center) / wmin, 4.0 * std::abs(std::log(next.a / prev.a)));
      prev = next;
      if (cell > 1.0) {
        if (edges.back() < scan[c - 1]) edges.push_back(scan[c - 1]);
        const int n = std::min(256, static_cast<int>(std::ceil(cell)));
        for (int m = 1; m <= n; ++m) edges.push_back(scan[c - 1] + (scan[c] - scan[c - 1]) * m / n);
        need = 0.0;
        continue;
      }
      need += cell;
      if (need > 1.0 || c == hi || c % 256 == 0) {
        edges.push_back(scan[c]);
        need = 0.0;
      }
    }
    total += integrate_panels(f, std::span<const double>(edges), 16);
    i = j + 2;
  }
  return total;
}

namespace {

/// Time breakpoints around the instant a packet passes closest to `centre`.
std::vector<double> passage_breaks(const WavePacket& p, const Vec3& centre, double R) {
  std::vector<double> br;
  const double k = norm(p.xi0());
  if (k == 0.0) return br;
  const Vec3 v = 2.0 * p.xi0();
  const double tc = dot(centre - p.x0(), v) / dot(v, v);
  br.push_back(tc);
  const double base = std::max(p.sigma(), R) / (2.0 * k);
  const double focus = p.sigma() * p.sigma();
  for (double m : {0.25, 1.0, 4.0, 16.0, 64.0}) {
    br.push_back(tc - m * base);
    br.push_back(tc + m * base);
    br.push_back(-m * focus);
    br.push_back(m * focus);
  }
  return br;
}

}  // namespace

double packet_lp_norm(const WavePacket& p, double exponent, const Cylinder& Q) {
  auto dens = [&](double t) { return p.modulus_squared(t).pow(0.5 * exponent); };
  const double I = cylinder_integral(dens, Q.t0 - Q.time_half_width(), Q.t0 + Q.time_half_width(), Q.x0,
                                     Q.space_radius(), passage_breaks(p, Q.x0, Q.space_radius()));
  return std::pow(I, 1.0 / exponent);
}

DecouplingResult decoupling_ratio(const Tile& a, const Tile& b, double N, double c_r) {
  if (!rank4_predicate(a, b, N, c_r))
    throw std::invalid_argument("decoupling experiment needs a rank-4 tile pair");
  const WavePacket F = make_packet(a, N);
  const WavePacket G = make_packet(b, N);
  const Cylinder Q = Cylinder::at_scale(N);
  DecouplingResult r;
  r.angle = angle_between(a.center, b.center);
  r.L6_F = packet_lp_norm(F, 6.0, Q);
  r.L6_G = packet_lp_norm(G, 6.0, Q);
  auto dens = [&](double t) { return F.modulus_squared(t).pow(1.5) * G.modulus_squared(t).pow(1.5); };
  auto breaks = passage_breaks(F, Q.x0, Q.space_radius());
  for (double t : passage_breaks(G, Q.x0, Q.space_radius())) breaks.push_back(t);
  const double I = cylinder_integral(dens, -Q.time_half_width(), Q.time_half_width(), Q.x0, Q.space_radius(),
                                     breaks);
  r.L3_product = std::cbrt(I);
  r.holder_ratio = r.L3_product / (r.L6_F * r.L6_G);
  r.ratio = r.holder_ratio / std::pow(N, -0.25);
  // |F| = |G| = 1 for plane waves, so both sides reduce to powers of |Q|.
  const double volQ = 2.0 * Q.time_half_width() * 4.0 / 3.0 * std::numbers::pi * std::pow(Q.space_radius(), 3);
  r.plane_wave_ratio = std::cbrt(volQ) / (std::pow(volQ, 1.0 / 6.0) * std::pow(volQ, 1.0 / 6.0)) / std::pow(N, -0.25);
  return r;
}

}  // namespace nslab
