#pragma once

#include <cstdint>
#include <optional>

#include "nslab/freqgeo.hpp"
#include "nslab/numerics.hpp"

namespace nslab {

class LerayProjector {
 public:
  explicit LerayProjector(const Vec3& zeta);
  Vec3 apply(const Vec3& v) const { return v - dot(v, hat_) * hat_; }
  const Vec3& direction() const { return hat_; }
  /// Matrix entry (I - zeta_hat zeta_hat^T)_{ij}.
  double entry(int i, int j) const { return (i == j ? 1.0 : 0.0) - hat_[i] * hat_[j]; }

 private:
  Vec3 hat_;
};

/// v - (v . zeta_hat) zeta_hat. Throws std::invalid_argument for zeta = 0.
Vec3 leray_project(const Vec3& zeta, const Vec3& v);

struct NullformSymbol {
  double by_projection = 0.0;  ///< |Pi_zeta eta|
  double by_sine = 0.0;        ///< |eta| sin angle(eta, zeta)
};

/// |eta . Pi_{xi+eta}| by both routes. Throws for xi + eta = 0.
NullformSymbol nullform_symbol(const FreqPair& pair);

struct CoronaSample {
  FreqPair pair;
  double ratio = 0.0;        ///< |Pi eta| / N^{1/2-delta}
  double ratio_eta_norm = 0.0;  ///< ratio * N / |eta|
};

struct CoronaScan {
  bool empty_zone = false;
  std::size_t attempted = 0;
  std::size_t accepted = 0;
  double max_ratio = 0.0;
  double max_ratio_eta_norm = 0.0;  ///< sup of ratio * N / |eta|
  CoronaSample argmax;
  /// Number of sampled pairs meeting the four raw inequalities (ignoring the delta > 1/2 gate).
  std::size_t raw_hits = 0;
};

/// Samples the narrow corona by placing eta at a controlled angle to zeta and
/// setting xi = zeta - eta. Each sample draws from its own generator seeded
/// from (seed, index), so results do not depend on evaluation order.
CoronaScan corona_sup_scan(double N, const DeltaParam& delta, std::size_t samples, std::uint64_t seed = 1,
                           const ZoneConstants& k = {});

struct CoronaGeometry {
  double zeta_norm = 0.0;  ///< |xi + eta| for |xi| = |eta| = N, angle(xi, -eta) = theta
  double law = 0.0;        ///< 2 N sin(theta / 2)
};

CoronaGeometry corona_geometry_check(double N, double theta);

}  // namespace nslab
