#include "nslab/symbols.hpp"

#include <random>

namespace nslab {

LerayProjector::LerayProjector(const Vec3& zeta) {
  const double n = norm(zeta);
  if (!(n > 0.0)) throw std::invalid_argument("Leray projector needs a nonzero direction");
  hat_ = zeta / n;
}

Vec3 leray_project(const Vec3& zeta, const Vec3& v) { return LerayProjector(zeta).apply(v); }

NullformSymbol nullform_symbol(const FreqPair& pair) {
  const Vec3 z = pair.zeta();
  LerayProjector P(z);
  return {norm(P.apply(pair.eta)), norm(pair.eta) * std::sin(angle_between(pair.eta, z))};
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> A(0.0, 2.0 * std::numbers::pi);
  const double z = U(rng), phi = A(rng);
  const double r = std::sqrt(1.0 - z * z);
  return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace

CoronaScan corona_sup_scan(double N, const DeltaParam& delta, std::size_t samples, std::uint64_t seed,
                           const ZoneConstants& k) {
  CoronaScan scan;
  const double d = delta.as_double();
  const double scale = std::pow(N, 1.0 - d);
  const double inv_sqrt = 1.0 / std::sqrt(N);
  const bool active = delta.value() > Rational(1, 2);
  scan.empty_zone = !active;

  for (std::size_t i = 0; i < samples; ++i) {
    std::mt19937_64 rng(mix(seed ^ mix(i)));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    // Every fourth sample pins the parameters at the extremes of their ranges.
    const bool extreme = (i % 4) == 0;
    const double zeta_norm = extreme ? 2.0 * scale : scale * (1.0 + U(rng));
    const double beta_max = k.corona_c * inv_sqrt * zeta_norm / N;
    const double beta = extreme ? beta_max : beta_max * U(rng);
    const double eta_norm = extreme ? k.annulus_hi * N : N * (k.annulus_lo + (k.annulus_hi - k.annulus_lo) * U(rng));

    const Vec3 zhat = random_unit(rng);
    const Vec3 perp = any_orthogonal(zhat);
    const double spin = 2.0 * std::numbers::pi * U(rng);
    const Vec3 side = std::cos(spin) * perp + std::sin(spin) * cross(zhat, perp);
    const Vec3 eta = eta_norm * (std::cos(beta) * zhat + std::sin(beta) * side);
    const FreqPair pair{zhat * zeta_norm - eta, eta};
    ++scan.attempted;

    const bool raw = narrow_corona_constraints(pair, N, d, k);
    if (raw) ++scan.raw_hits;
    if (!active || !raw) continue;
    ++scan.accepted;
    const double sym = nullform_symbol(pair).by_projection;
    const double ratio = sym / std::pow(N, 0.5 - d);
    const double ratio_eta = ratio * N / norm(eta);
    scan.max_ratio_eta_norm = std::max(scan.max_ratio_eta_norm, ratio_eta);
    if (ratio > scan.max_ratio) {
      scan.max_ratio = ratio;
      scan.argmax = {pair, ratio, ratio_eta};
    }
  }
  return scan;
}

CoronaGeometry corona_geometry_check(double N, double theta) {
  const Vec3 xi{N, 0.0, 0.0};
  const Vec3 eta = -N * Vec3{std::cos(theta), std::sin(theta), 0.0};
  return {norm(xi + eta), 2.0 * N * std::sin(0.5 * theta)};
}

}  // namespace nslab
