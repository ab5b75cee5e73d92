#include "nslab/scaling.hpp"

#include <algorithm>

#include "nslab/bilinear.hpp"

namespace nslab {

bool scaling_dyad_representable(int M, double N) {
  return is_dyad(N) && 2.0 * N <= (M - 1) / 3;
}

namespace {

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) s += 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
  return s;
}

}  // namespace

double scaling_reference(const Trajectory& traj) {
  double sup_half = 0.0;
  std::vector<double> h1sq;
  for (const auto& f : traj.fields) {
    sup_half = std::max(sup_half, sobolev_norm(f, 0.5));
    const double h1 = sobolev_norm(f, 1.0);
    h1sq.push_back(h1 * h1);
  }
  return sup_half * std::sqrt(trapezoid(traj.times, h1sq));
}

ScalingReport scaling_fit(const Trajectory& traj, const std::vector<double>& dyads, const DeltaParam& delta) {
  if (dyads.size() < 3) throw std::invalid_argument("scaling fit needs at least three dyads");
  for (double N : dyads)
    if (!scaling_dyad_representable(traj.M, N))
      throw std::invalid_argument("dyad " + std::to_string(static_cast<long>(N)) + " not representable on grid " +
                                  std::to_string(traj.M));
  ScalingReport rep;
  rep.R = scaling_reference(traj);
  for (double N : dyads) {
    std::vector<double> norms;
    for (const auto& f : traj.fields) norms.push_back(sobolev_norm(offdiag_block(f, N, delta), -1.0));
    DyadScaling row;
    row.N = N;
    row.A = trapezoid(traj.times, norms);
    row.r = rep.R > 0.0 ? row.A / rep.R : 0.0;
    rep.rows.push_back(row);
  }
  rep.degenerate = std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.A == 0.0; });
  if (!rep.degenerate && std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.A > 0.0; })) {
    std::vector<double> x, y;
    for (const auto& r : rep.rows) {
      x.push_back(std::log2(r.N));
      y.push_back(std::log2(r.r));
    }
    rep.slope = fit_slope(x, y);
  }
  return rep;
}

}  // namespace nslab
