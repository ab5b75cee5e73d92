#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace nslab {

using Complex = std::complex<double>;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

/// Angle between two nonzero vectors in [0, pi], computed with atan2 so that
/// nearly parallel and nearly antiparallel inputs keep full relative accuracy.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

/// Any unit vector orthogonal to `v` (v must be nonzero).
Vec3 any_orthogonal(const Vec3& v);

// ---------------------------------------------------------------------------
// Smooth ramps and bumps.

/// e^{-1/s} for s > 0, else 0.
inline double glue(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

/// C-infinity ramp: 0 for s <= 1, 1 for s >= 2, strictly increasing on (1,2).
inline double smooth_step(double s) {
  if (s <= 1.0) return 0.0;
  if (s >= 2.0) return 1.0;
  const double a = glue(s - 1.0);
  const double b = glue(2.0 - s);
  return a / (a + b);
}

/// Derivative of smooth_step.
double smooth_step_derivative(double s);
/// Second derivative of smooth_step.
double smooth_step_second_derivative(double s);

/// Littlewood-Paley profile phi: supported in (1/2, 2), phi(1) = 1 and
/// sum_k phi(2^{-k} r)^2 = 1 for every r > 0.
///
/// Built in the log variable s = log2(r) as phi^2 = a(s) - a(s-1) with the
/// ramp a(s) = smooth_step(s + 2), so the squares telescope.
double lp_bump(double r);

/// phi(r)^2, cheaper than squaring lp_bump.
double lp_bump_squared(double r);

// ---------------------------------------------------------------------------
// Dyads.

/// True iff n is a positive integer power of two (2^0 included).
bool is_dyad(double n);
/// Throws std::invalid_argument unless n is a power of two >= min_value.
void require_dyad(double n, double min_value = 1.0, const char* what = "N");

// ---------------------------------------------------------------------------
// Gauss-Legendre rules.

/// Full Gauss-Legendre rule on [-1, 1] (nodes ascending).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order. Supported orders: 4, 8, 12, 16, 20, 24, 32, 48, 64.
const GaussRule& gauss_rule(int order);

/// Composite Gauss-Legendre integration over the panel edges in `edges`.
template <class F>
auto integrate_panels(F&& f, std::span<const double> edges, int order = 16) {
  const GaussRule& rule = gauss_rule(order);
  using R = decltype(f(edges[0]));
  R sum{};
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    const double mid = 0.5 * (edges[p + 1] + edges[p]);
    R panel{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
    sum += half * panel;
  }
  return sum;
}

/// Nodes and weights of a composite rule, flattened.
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureGrid composite_grid(std::span<const double> edges, int order);

/// Uniform panel edges on [a, b].
std::vector<double> uniform_edges(double a, double b, int panels);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace nslab
