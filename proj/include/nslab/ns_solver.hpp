#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nslab/spectral_field.hpp"

namespace nslab {

struct NSConfig {
  int M = 32;
  double viscosity = 1.0;
  double horizon = 1.0;
  int snapshots = 64;          ///< number of intervals; snapshots + 1 fields are stored
  std::uint64_t seed = 1;
  double spectrum_exponent = -1.75;
  double amplitude = 1.0;
  double dt = 0.0;             ///< 0 selects the step automatically
  double cfl_max = 0.5;
  std::string delta = "5/8";
  int dyad_k0 = 0;             ///< scaling dyads 2^k0 .. 2^k1
  int dyad_k1 = 2;
};

NSConfig load_config(const std::string& path);
NSConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const NSConfig& c);

struct Trajectory {
  int M = 0;
  double viscosity = 1.0;
  double horizon = 1.0;
  std::vector<double> times;
  std::vector<SpectralField> fields;
};

/// Right-hand side of the truncated system without viscosity: -P Div(u (x) u).
SpectralField ns_nonlinearity(const SpectralField& u);

/// CFL number dt * max|u| / (2 pi / M).
double cfl_number(const SpectralField& u, double dt);

/// Integrating-factor RK4 pseudo-spectral solver with 2/3 dealiasing and
/// Leray projection at every stage. Throws std::invalid_argument for invalid
/// configuration or a CFL violation (checked before the first step and at every snapshot).
Trajectory ns_run(const NSConfig& config);
Trajectory ns_run(const NSConfig& config, const SpectralField& initial);

/// One integrating-factor RK4 step.
SpectralField ns_step(const SpectralField& u, double viscosity, double dt);

void write_trajectory(const Trajectory& traj, const std::string& dir);
Trajectory read_trajectory(const std::string& dir);

}  // namespace nslab
