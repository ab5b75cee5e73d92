#pragma once

#include <cstdint>
#include <string>

#include "nslab/freqgeo.hpp"
#include "nslab/numerics.hpp"

namespace nslab {

enum class KernelKind { schrodinger, heat };
KernelKind parse_kernel_kind(const std::string& s);
std::string to_string(KernelKind k);

/// K_1(tau, r) = (2 pi)^-3 4 pi int phi(rho) rho^2 e^{i rho^2 tau} sinc(rho r) d rho.
Complex unit_kernel(double tau, double r, double nodes_per_period = 12.0);

/// K_N(t, x) evaluated directly in the physical frequency variable s = N rho.
Complex schrodinger_kernel(double N, double t, const Vec3& x);
Complex schrodinger_kernel(double N, double t, double r);

/// Frequency-localised heat kernel (2 pi)^-3 int phi(|xi|/N)^... e^{-t|xi|^2} e^{i x.xi} d xi.
double heat_kernel_localized(double N, double t, double r);
/// Gaussian factor (4 pi t)^{-3/2} e^{-r^2 / 4t}.
double heat_gaussian(double t, double r);

/// Time centre of the heat cylinder: 3 N^{-1/2}, so that 2Q stays at t >= N^{-1/2}.
double heat_cylinder_t0(double N);

struct SupResult {
  double sup = 0.0;
  double ratio = 0.0;        ///< sup / N^3 (Schroedinger) or sup / N^{3/4} (heat)
  double origin_value = 0.0; ///< |K| at the cylinder's centre column point (t0, 0)
  std::size_t samples = 0;
};

SupResult kernel_sup_on_cylinder(double N, KernelKind kind, std::size_t samples = 10000, std::uint64_t seed = 7);

struct L3Result {
  double norm = 0.0;          ///< ||K_N||_{L^3(2Q)}
  double ratio = 0.0;         ///< norm / N^{4/3} or norm / N^{1/12}
  double refined_norm = 0.0;
  double refinement_gap = 0.0;  ///< |norm - refined| / refined
  double tail_estimate = 0.0;   ///< Schroedinger: relative L^3 mass beyond the truncation time
  double truncation_time = 0.0; ///< scaled time where the Schroedinger integral is cut
};

/// Throws std::runtime_error when two successive refinements disagree by more than 1%.
L3Result kernel_L3_on_cylinder(double N, KernelKind kind);

/// ||K_1||^3_{L^3} over {|tau| <= T, |y| <= R} in scaled variables.
double unit_kernel_L3_cubed(double T, double R, int refine = 1, double* tail = nullptr, double* t_cut = nullptr);

struct RescalingCheck {
  double lhs = 0.0;  ///< ||K_{4N}||_{L^3(2Q_{4N})}
  double rhs = 0.0;  ///< 4^{4/3} ||K_N||_{L^3(E')}, E' = {|t| <= 16 N^{-1/2}, |x| <= 8 N^{-1/2}}
  double rel_diff = 0.0;
};

/// Evaluates the right side with the direct physical-variable kernel and
/// physical quadrature, the left side through the unit kernel.
RescalingCheck kernel_rescaling_check(double N);

struct StrichartzResult {
  double N = 0.0;
  double max_ratio = 0.0;      ///< max ||U f||_{L^6(Q)} / ||f||_2
  double normalized = 0.0;     ///< max_ratio / N^{2/3}, or / N^{1/12} for the heat flow
  std::size_t trials = 0;
  double best_sigma = 0.0;
};

/// Schroedinger: Gaussian packets at frequency N with widths between 3/N and
/// N^{-1/2}, random directions and passage offsets; the first trial is the centred
/// narrowest packet. Heat: unmodulated Gaussians (the frequency cutoff is dropped,
/// as for the heat kernel bounds) on the cylinder of half-width N^{-1/2} centred
/// at heat_cylinder_t0(N).
StrichartzResult strichartz_ratio(double N, std::size_t trials, KernelKind kind = KernelKind::schrodinger,
                                  std::uint64_t seed = 11);

}  // namespace nslab
