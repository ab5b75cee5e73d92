#pragma once

#include <optional>
#include <vector>

#include "nslab/ledger.hpp"
#include "nslab/ns_solver.hpp"

namespace nslab {

struct DyadScaling {
  double N = 0.0;
  double A = 0.0;  ///< trapezoid-in-time integral of ||N_N^off(u,u)||_{H^-1}
  double r = 0.0;  ///< A / R
};

struct ScalingReport {
  std::vector<DyadScaling> rows;
  double R = 0.0;  ///< max_t ||u||_{H^1/2} * (int ||u||^2_{H^1} dt)^{1/2}
  bool degenerate = false;
  std::optional<double> slope;  ///< least-squares slope of log2 r_N against log2 N
};

/// Largest dyad whose off-diagonal annulus [N/2, 2N] fits inside the dealiased box.
bool scaling_dyad_representable(int M, double N);

/// Throws std::invalid_argument if fewer than three dyads are given or one is not representable.
ScalingReport scaling_fit(const Trajectory& traj, const std::vector<double>& dyads, const DeltaParam& delta);

/// The reference R alone.
double scaling_reference(const Trajectory& traj);

}  // namespace nslab
