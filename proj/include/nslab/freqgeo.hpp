#pragma once

#include <cstdint>
#include <vector>

#include "nslab/ledger.hpp"
#include "nslab/numerics.hpp"

namespace nslab {

struct RhoCoords {
  double rho1 = 0.0;
  double rho2 = 0.0;
  Vec3 zeta;
};

struct FreqPair {
  Vec3 xi;
  Vec3 eta;

  double rho1() const { return 0.5 * (norm(xi) + norm(eta)); }
  double rho2() const { return 0.5 * (norm(xi) - norm(eta)); }
  Vec3 zeta() const { return xi + eta; }
};

RhoCoords rho_coords(const FreqPair& pair);

struct ZoneConstants {
  double annulus_lo = 0.5;  ///< |xi| ~ N means |xi| in [annulus_lo N, annulus_hi N]
  double annulus_hi = 2.0;
  double corona_c = 1.0;    ///< c in angle(eta, xi+eta) <= c N^{-1/2} |xi+eta| / N
  double radial_c = 1.0;    ///< |rho2| >= radial_c N^{1-delta} on the radial zone
};

struct ZoneFlags {
  bool in_offdiag = false;
  bool in_offdiag_rad = false;
  bool in_narrow_corona = false;
  bool in_diagonal = false;
};

ZoneFlags zone_membership(const FreqPair& pair, double N, const DeltaParam& delta,
                          const ZoneConstants& k = {});

/// The four narrow-corona inequalities without the delta > 1/2 gate.
bool narrow_corona_constraints(const FreqPair& pair, double N, double delta,
                               const ZoneConstants& k = {});

/// psi(|zeta| / N^{1-delta}).
double smooth_mask(const FreqPair& pair, double N, const DeltaParam& delta);
double smooth_mask(double zeta_norm, double N, double delta);

// ---------------------------------------------------------------------------

struct Tile {
  Vec3 center;
  double radius = 0.0;
};

struct TilingParams {
  double c_tile = 1.0;
  double count_factor = 8.0;   ///< count = ceil(count_factor N / c_tile^2)
  double fib_offset = 0.36;    ///< offset of the Fibonacci lattice away from the poles
};

class Tiling {
 public:
  Tiling(double N, const TilingParams& params = {});

  double N() const { return N_; }
  double radius() const { return radius_; }
  const std::vector<Tile>& tiles() const { return tiles_; }
  std::size_t size() const { return tiles_.size(); }

  /// Index of the nearest center (ties to the lowest index).
  std::size_t assign(const Vec3& direction) const;
  /// Indices of all tiles whose cap contains the direction.
  std::vector<std::size_t> covering(const Vec3& direction) const;

 private:
  template <class F>
  void for_candidates(const Vec3& u, F&& f) const;

  double N_;
  double radius_;
  std::vector<Tile> tiles_;
  double cell_;
  int cells_per_axis_;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

/// Convenience wrapper.
std::vector<Tile> build_tiling(double N, const TilingParams& params = {});

struct TilingQuality {
  std::size_t count = 0;
  double covering_ratio = 0.0;  ///< max over samples of (angle to nearest center) / radius
  int max_overlap = 0;
  bool antipodal_covered = false;
};

/// Checks coverage/overlap on a Fibonacci probe set of `samples` unit vectors
/// plus every antipodal center.
TilingQuality check_tiling(const Tiling& tiling, std::size_t samples);

bool rank4_predicate(const Tile& a, const Tile& b, double N, double c_r = 1.0);
std::size_t partner_count(std::size_t a, const Tiling& tiling, double c_r = 1.0);

// ---------------------------------------------------------------------------

/// Squared partition of unity sum_j chi_j^2 = 1 on [0, horizon] with windows
/// I_j = [t_j - L/2, t_j + L/2], L = N^{-1/2}. Consecutive centres are 2L/3
/// apart; each chi_j is 1 on [t_j - L/4, t_j + L/4] and hands over to its
/// neighbour on a ramp of width L/6.
class TimePartition {
 public:
  TimePartition(double N, double horizon);

  double N() const { return N_; }
  double window_length() const { return L_; }
  double horizon() const { return horizon_; }
  std::size_t size() const { return centers_.size(); }
  const std::vector<double>& centers() const { return centers_; }
  double center(std::size_t j) const { return centers_[j]; }
  /// Covered range on which the squares sum to one.
  double covered_lo() const { return centers_.front() - 0.25 * L_; }
  double covered_hi() const { return centers_.back() + 0.25 * L_; }

  /// k-th time derivative of chi_j (k = 0, 1, 2).
  double chi(std::size_t j, double t, int k = 0) const;

 private:
  double N_, horizon_, L_, width_;
  std::vector<double> centers_;
};

struct PartitionStats {
  double max_sum_sq_error = 0.0;
  double sup_sum_abs_d1 = 0.0;
  double sup_abs_d1 = 0.0;
  double sup_abs_d2 = 0.0;
  bool supports_inside_windows = true;
};

PartitionStats partition_stats(const TimePartition& p, std::size_t samples);

// ---------------------------------------------------------------------------

struct Cylinder {
  double t0 = 0.0;
  Vec3 x0;
  double scale = 1.0;

  static Cylinder at_scale(double N, double t0 = 0.0, Vec3 x0 = {}) {
    return {t0, x0, 1.0 / std::sqrt(N)};
  }
  double time_half_width() const { return scale; }
  double space_radius() const { return 2.0 * scale; }
  Cylinder doubled() const { return {t0, x0, 2.0 * scale}; }
  bool contains(double t, const Vec3& x) const {
    return std::abs(t - t0) <= time_half_width() && norm(x - x0) <= space_radius();
  }
};

}  // namespace nslab
