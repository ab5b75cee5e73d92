#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nslab/freqgeo.hpp"
#include "nslab/numerics.hpp"

namespace nslab {

/// Real divergence-free (optionally) vector field on [0, 2pi)^3 stored as
/// Fourier coefficients u(x) = sum_k u^(k) e^{i k.x}. Index i in [0, M) maps to
/// the frequency i for i <= M/2 and i - M otherwise. Coefficients are
/// component-major, each component in lexicographic (k_x, k_y, k_z) index order.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int M, bool divergence_free = true);

  int M() const { return M_; }
  std::size_t modes() const { return static_cast<std::size_t>(M_) * M_ * M_; }
  bool divergence_free() const { return divfree_; }
  void set_divergence_free(bool v) { divfree_ = v; }

  int freq(int i) const { return i <= M_ / 2 ? i : i - M_; }
  int index_of(int f) const { return f >= 0 ? f : f + M_; }
  std::size_t flat(int i, int j, int l) const { return (static_cast<std::size_t>(i) * M_ + j) * M_ + l; }
  std::array<int, 3> wavenumber(std::size_t idx) const {
    const int l = static_cast<int>(idx % M_);
    const int j = static_cast<int>((idx / M_) % M_);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(M_) * M_));
    return {freq(i), freq(j), freq(l)};
  }
  Vec3 kvec(std::size_t idx) const {
    const auto k = wavenumber(idx);
    return {double(k[0]), double(k[1]), double(k[2])};
  }
  /// Flat index of wavenumber (kx, ky, kz); assumes each component representable.
  std::size_t index(int kx, int ky, int kz) const { return flat(index_of(kx), index_of(ky), index_of(kz)); }
  bool representable(int kx, int ky, int kz) const {
    auto ok = [&](int f) { return f > -M_ / 2 - (M_ % 2) && f <= M_ / 2; };
    return ok(kx) && ok(ky) && ok(kz);
  }
  std::size_t mirror(std::size_t idx) const;

  Complex& at(int c, std::size_t idx) { return data_[c * modes() + idx]; }
  const Complex& at(int c, std::size_t idx) const { return data_[c * modes() + idx]; }
  std::array<Complex, 3> vec(std::size_t idx) const { return {at(0, idx), at(1, idx), at(2, idx)}; }
  void set_vec(std::size_t idx, const std::array<Complex, 3>& v) {
    for (int c = 0; c < 3; ++c) at(c, idx) = v[c];
  }

  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  SpectralField operator+(const SpectralField& o) const { SpectralField r = *this; r += o; return r; }
  SpectralField operator-(const SpectralField& o) const { SpectralField r = *this; r -= o; return r; }
  SpectralField operator*(double s) const { SpectralField r = *this; r *= s; return r; }

  /// Largest |k_i| kept by the 2/3 rule: the largest integer strictly below M/3.
  int dealias_cutoff() const { return (M_ - 1) / 3; }
  bool in_dealiased_box(std::size_t idx) const;
  void dealias();

  /// Sum of |u^|^2 over all modes and components.
  double energy_sum() const;
  double max_abs_coefficient() const;

  /// max |u^(k) - conj(u^(-k))| / max |u^|.
  double reality_defect() const;
  /// max |k . u^(k)| / (|k| max|u^|).
  double divergence_defect() const;
  /// Sets u^(-k) = conj(u^(k)) by averaging; zeroes the Nyquist planes.
  void enforce_reality();

 private:
  int M_ = 0;
  bool divfree_ = true;
  std::vector<Complex> data_;
};

/// Multiplies by phi(|k|/N). Requires 2N <= M/2.
SpectralField lp_project(const SpectralField& f, double N);
/// Multiplies by phi(|k|/N)^2.
SpectralField lp_project_squared(const SpectralField& f, double N);
/// Multiplies by a smooth angular cutoff that is 1 within one tile radius of
/// +-center and 0 beyond two radii (both signs, so the output stays real).
SpectralField angular_project(const SpectralField& f, const Tile& tile);
SpectralField leray_project_field(const SpectralField& f);

/// (sum_{k != 0} |k|^{2s} |u^(k)|^2)^{1/2}, plain coefficient sum, no volume factor.
double sobolev_norm(const SpectralField& f, double s);

/// Random real divergence-free field with |u^(k)| proportional to |k|^{exponent}
/// on 1 <= |k| and inside the dealiased box; zero mean.
SpectralField random_divfree_field(int M, std::uint64_t seed, double exponent = -1.75, double amplitude = 1.0);
/// Real random field, not projected.
SpectralField random_field(int M, std::uint64_t seed, double kmax);

/// Physical-space values on the M^3 grid, one real array per component.
std::array<std::vector<double>, 3> to_physical(const SpectralField& f);
SpectralField from_physical(const std::array<std::vector<double>, 3>& u, int M);

}  // namespace nslab
