#pragma once

#include <array>
#include <functional>

#include "nslab/freqgeo.hpp"
#include "nslab/ledger.hpp"
#include "nslab/numerics.hpp"

namespace nslab {

using Mat3 = std::array<std::array<double, 3>, 3>;

double det3(const Mat3& m);

/// Phi = x . zeta + 4 t rho1 rho2.
double phase_value(double t, const Vec3& x, const FreqPair& pair);
/// varpi = 4 rho1 rho2.
inline double phase_frequency(const FreqPair& pair) { return 4.0 * pair.rho1() * pair.rho2(); }

struct PhaseHessian {
  Mat3 A{};
  double det = 0.0;
};

/// Hessian of Phi in (t, rho1, rho2) and its closed-form determinant 128 rho1 rho2 t.
PhaseHessian phase_hessian(double t, double rho1, double rho2);

/// Central finite-difference Hessian of Phi in (t, rho1, rho2), step h = rel_step * |coordinate|.
Mat3 phase_hessian_fd(double t, double rho1, double rho2, const Vec3& x = {}, const Vec3& zeta = {},
                      double rel_step = 1e-4);

struct DerivativeMagnitudes {
  double dt = 0.0;
  double drho1 = 0.0;
  double drho2 = 0.0;
};

/// (|d_t Phi|, |d_rho1 Phi|, |d_rho2 Phi|) = (4 rho1 |rho2|, 4 |t| |rho2|, 4 |t| rho1).
DerivativeMagnitudes derivative_magnitudes(double rho1, double rho2, double t);
DerivativeMagnitudes derivative_magnitudes(const FreqPair& pair, double t);

/// N^{-6+4 delta}.
ExponentExpr ibp_gain();
ExponentExpr ibp_gain(const DeltaParam& delta);

/// The six-fold gain |d_t Phi|^-2 |d_rho1 Phi|^-2 |d_rho2 Phi|^-2 at rho1 = N,
/// |rho2| = N^{1-delta}, t = N^{-1/2}, divided by N^{-6+4 delta}.
double ibp_gain_ratio(double N, double delta);

using Amplitude = std::function<Complex(double)>;

/// int_{t_lo}^{t_hi} e^{i t varpi} a(t) dt by composite Gauss-Legendre
/// with at least `nodes_per_period` nodes per oscillation period.
Complex oscillatory_integral(double t_lo, double t_hi, double varpi, const Amplitude& a,
                             int nodes_per_period = 20);

/// Smooth compactly supported bump on [t_lo, t_hi] (glue(s) glue(1-s) in the
/// rescaled variable), normalised to peak value 1.
double window_bump(double t, double t_lo, double t_hi);

struct SmoothFunction {
  std::function<Complex(double)> f;
  std::function<Complex(double)> df;
};

struct DuhamelResidual {
  Complex lhs;
  Complex rhs;
  double residual = 0.0;        ///< |lhs - rhs| / max(|lhs|, tiny)
};

/// int_0^t e^{-(t-s) Z} F(s) ds against
/// [F(t) - e^{-tZ} F(0)]/lambda - (1/lambda) int_0^t e^{-(t-s) Z} (F' - i varpi F) ds,
/// lambda = Z + i varpi, Z = |zeta|^2.
DuhamelResidual duhamel_normal_form_check(const SmoothFunction& F, double t, double zeta_sq, double varpi);

/// Same left side against the identity with the oscillating factors e^{i t varpi},
/// e^{i s varpi} placed on the boundary and integral terms.
DuhamelResidual duhamel_printed_form_check(const SmoothFunction& F, double t, double zeta_sq, double varpi);

struct HeatReduction {
  Complex amplitude;     ///< a_N = 1/(|zeta|^2 + i varpi)
  Complex normal_form;   ///< m_N(t) = (1 - e^{-t lambda}) / lambda
  double remainder = 0.0;        ///< |m_N - a_N|
  double remainder_bound = 0.0;  ///< |a_N| e^{-t |zeta|^2}
};

HeatReduction heat_amplitude_remainder(double zeta_sq, double varpi, double t);
HeatReduction heat_amplitude_remainder(const FreqPair& pair, double t);

}  // namespace nslab
