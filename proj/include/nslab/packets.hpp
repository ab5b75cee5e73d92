#pragma once

#include <functional>

#include "nslab/freqgeo.hpp"
#include "nslab/numerics.hpp"

namespace nslab {

/// Isotropic space Gaussian  exp(log_amp - a |x - center|^2).
struct IsoGaussian {
  double log_amp = 0.0;
  double a = 0.0;
  Vec3 center;

  double operator()(const Vec3& x) const {
    const Vec3 d = x - center;
    return std::exp(log_amp - a * dot(d, d));
  }
  IsoGaussian pow(double p) const { return {p * log_amp, p * a, center}; }
};

IsoGaussian operator*(const IsoGaussian& f, const IsoGaussian& g);

/// int_{|x - ball_center| <= R} g(x) dx.
double gaussian_ball_integral(const IsoGaussian& g, const Vec3& ball_center, double R);

/// Unit-L2 Gaussian packet with frequency centre xi0 and isotropic spatial
/// width sigma, evolved exactly by the free Schroedinger group e^{it Delta}
/// (solution of i u_t + Delta u = 0). Heat evolution e^{tau Delta} is the
/// same formula at complex time t = -i tau.
class WavePacket {
 public:
  WavePacket(const Vec3& xi0, double sigma, const Vec3& x0 = {});

  const Vec3& xi0() const { return xi0_; }
  double sigma() const { return sigma_; }
  const Vec3& x0() const { return x0_; }

  Complex value(double t, const Vec3& x) const { return value_at(Complex(t, 0.0), x); }
  Complex heat_value(double tau, const Vec3& x) const { return value_at(Complex(0.0, -tau), x); }
  Complex value_at(Complex t, const Vec3& x) const;

  /// |u(t, .)|^2 as an isotropic Gaussian (t complex allowed).
  IsoGaussian modulus_squared(Complex t) const;
  IsoGaussian modulus_squared(double t) const { return modulus_squared(Complex(t, 0.0)); }

  /// Fraction of |f^|^2 in {|w| in [lo N, hi N], angle(w, axis) <= max_angle}.
  double frequency_concentration(double N, const Vec3& axis, double max_angle, double lo = 0.5,
                                 double hi = 2.0) const;

 private:
  Vec3 xi0_;
  double k_;
  double sigma_;
  Vec3 x0_;
  Vec3 e1_, e2_, e3_;
};

/// Packet adapted to a tile at scale N: xi0 = N * tile.center, sigma = N^{-1/2}.
WavePacket make_packet(const Tile& tile, double N, const Vec3& x0 = {});

/// || |u|^p ||_{L^1(Q)}^{1/p}-type integrals over a cylinder {|t - t0| <= T, |x - x0| <= R},
/// for a time-dependent isotropic Gaussian density g(t).
double cylinder_integral(const std::function<IsoGaussian(double)>& density, double t_lo, double t_hi,
                         const Vec3& x_center, double R, const std::vector<double>& t_breaks = {});

/// || u ||_{L^p(Q)} for a packet under Schroedinger evolution.
double packet_lp_norm(const WavePacket& p, double exponent, const Cylinder& Q);

struct DecouplingResult {
  double L3_product = 0.0;   ///< ||FG||_{L^3(Q)}
  double L6_F = 0.0;
  double L6_G = 0.0;
  double holder_ratio = 0.0;  ///< ||FG||_3 / (||F||_6 ||G||_6)
  double ratio = 0.0;         ///< ||FG||_3 / (N^{-1/4} ||F||_6 ||G||_6)
  double angle = 0.0;         ///< angle between tile centres
  double plane_wave_ratio = 0.0;  ///< same normalised ratio for plane waves on Q
};

/// Throws std::invalid_argument if the tiles fail the rank-4 predicate.
DecouplingResult decoupling_ratio(const Tile& a, const Tile& b, double N, double c_r = 1.0);

}  // namespace nslab
