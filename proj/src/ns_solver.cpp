#include "nslab/ns_solver.hpp"

#include <algorithm>

#include "nslab/bilinear.hpp"

namespace nslab {

SpectralField ns_nonlinearity(const SpectralField& u) {
  SpectralField n = bilinear_full(u, u);
  n *= -1.0;
  return n;
}

double cfl_number(const SpectralField& u, double dt) {
  const auto p = to_physical(u);
  double vmax = 0.0;
  for (std::size_t x = 0; x < p[0].size(); ++x)
    vmax = std::max(vmax, std::sqrt(p[0][x] * p[0][x] + p[1][x] * p[1][x] + p[2][x] * p[2][x]));
  return dt * vmax / (2.0 * std::numbers::pi / u.M());
}

namespace {

SpectralField scale_modes(const SpectralField& f, const std::vector<double>& factor) {
  SpectralField out = f;
  for (std::size_t idx = 0; idx < f.modes(); ++idx)
    for (int c = 0; c < 3; ++c) out.at(c, idx) *= factor[idx];
  return out;
}

std::vector<double> decay_factors(const SpectralField& u, double viscosity, double h) {
  std::vector<double> e(u.modes());
  for (std::size_t idx = 0; idx < u.modes(); ++idx) {
    const Vec3 k = u.kvec(idx);
    e[idx] = std::exp(-viscosity * dot(k, k) * h);
  }
  return e;
}

}  // namespace

SpectralField ns_step(const SpectralField& u, double viscosity, double dt) {
  const auto E = decay_factors(u, viscosity, dt);
  const auto E2 = decay_factors(u, viscosity, 0.5 * dt);
  const SpectralField k1 = ns_nonlinearity(u);
  const SpectralField k2 = ns_nonlinearity(scale_modes(u + k1 * (0.5 * dt), E2));
  const SpectralField k3 = ns_nonlinearity(scale_modes(u, E2) + k2 * (0.5 * dt));
  const SpectralField k4 = ns_nonlinearity(scale_modes(u, E) + scale_modes(k3, E2) * dt);
  SpectralField next = scale_modes(u, E);
  next += (scale_modes(k1, E) + scale_modes(k2 + k3, E2) * 2.0 + k4) * (dt / 6.0);
  next.dealias();
  next = leray_project_field(next);
  next.enforce_reality();
  return next;
}

Trajectory ns_run(const NSConfig& c) {
  if (c.M < 16) throw std::invalid_argument("grid must be at least 16^3");
  return ns_run(c, random_divfree_field(c.M, c.seed, c.spectrum_exponent, c.amplitude));
}

Trajectory ns_run(const NSConfig& c, const SpectralField& initial) {
  if (!(c.viscosity > 0.0)) throw std::invalid_argument("viscosity must be positive");
  if (!(c.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (c.snapshots < 1) throw std::invalid_argument("need at least one snapshot interval");
  if (initial.M() != c.M) throw std::invalid_argument("initial data grid does not match config");
  if (initial.divergence_defect() > 1e-12) throw std::invalid_argument("initial data must be divergence-free");

  SpectralField u = initial;
  u.dealias();
  const double interval = c.horizon / c.snapshots;
  double dt = c.dt;
  if (dt <= 0.0) {
    const double unit_cfl = cfl_number(u, 1.0);
    dt = unit_cfl > 0.0 ? std::min(interval, 0.5 * c.cfl_max / unit_cfl) : interval;
    dt = std::min(dt, interval / 4.0);
  }
  const int sub = std::max(1, static_cast<int>(std::ceil(interval / dt - 1e-12)));
  dt = interval / sub;
  const double cfl0 = cfl_number(u, dt);
  if (cfl0 > c.cfl_max)
    throw std::invalid_argument("CFL violation: dt * max|u| / h = " + std::to_string(cfl0) + " exceeds " +
                                std::to_string(c.cfl_max));

  Trajectory traj;
  traj.M = c.M;
  traj.viscosity = c.viscosity;
  traj.horizon = c.horizon;
  traj.times.push_back(0.0);
  traj.fields.push_back(u);
  for (int s = 1; s <= c.snapshots; ++s) {
    for (int j = 0; j < sub; ++j) u = ns_step(u, c.viscosity, dt);
    const double cfl = cfl_number(u, dt);
    if (cfl > c.cfl_max)
      throw std::runtime_error("CFL violation during the run at t = " + std::to_string(s * interval));
    traj.times.push_back(s * interval);
    traj.fields.push_back(u);
  }
  return traj;
}

}  // namespace nslab
