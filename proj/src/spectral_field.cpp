#include "nslab/spectral_field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <random>

#include <fftw3.h>

#include "nslab/symbols.hpp"

namespace nslab {

namespace {

class Fft3 {
 public:
  explicit Fft3(int M) : M_(M) {
    std::vector<Complex> buf(static_cast<std::size_t>(M) * M * M);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fwd_ = fftw_plan_dft_3d(M, M, M, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_3d(M, M, M, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~Fft3() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  void forward(Complex* data) const {
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
  }
  void backward(Complex* data) const {
    fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
  }

  static const Fft3& get(int M) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Fft3>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[M];
    if (!slot) slot = std::make_unique<Fft3>(M);
    return *slot;
  }

 private:
  int M_;
  fftw_plan fwd_{}, bwd_{};
};

}  // namespace

SpectralField::SpectralField(int M, bool divergence_free)
    : M_(M), divfree_(divergence_free), data_(3 * static_cast<std::size_t>(M) * M * M) {
  if (M < 2) throw std::invalid_argument("grid size must be at least 2");
}

std::size_t SpectralField::mirror(std::size_t idx) const {
  const int l = static_cast<int>(idx % M_);
  const int j = static_cast<int>((idx / M_) % M_);
  const int i = static_cast<int>(idx / (static_cast<std::size_t>(M_) * M_));
  return flat((M_ - i) % M_, (M_ - j) % M_, (M_ - l) % M_);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (o.M_ != M_) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  divfree_ = divfree_ && o.divfree_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (o.M_ != M_) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  divfree_ = divfree_ && o.divfree_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : data_) c *= s;
  return *this;
}

bool SpectralField::in_dealiased_box(std::size_t idx) const {
  const auto k = wavenumber(idx);
  const int K = dealias_cutoff();
  return std::abs(k[0]) <= K && std::abs(k[1]) <= K && std::abs(k[2]) <= K;
}

void SpectralField::dealias() {
  for (std::size_t idx = 0; idx < modes(); ++idx)
    if (!in_dealiased_box(idx))
      for (int c = 0; c < 3; ++c) at(c, idx) = 0.0;
}

double SpectralField::energy_sum() const {
  double s = 0.0;
  for (const auto& c : data_) s += std::norm(c);
  return s;
}

double SpectralField::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& c : data_) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::reality_defect() const {
  const double scale = max_abs_coefficient();
  if (scale == 0.0) return 0.0;
  double d = 0.0;
  for (std::size_t idx = 0; idx < modes(); ++idx) {
    const std::size_t m = mirror(idx);
    for (int c = 0; c < 3; ++c) d = std::max(d, std::abs(at(c, idx) - std::conj(at(c, m))));
  }
  return d / scale;
}

double SpectralField::divergence_defect() const {
  const double scale = max_abs_coefficient();
  if (scale == 0.0) return 0.0;
  double d = 0.0;
  for (std::size_t idx = 1; idx < modes(); ++idx) {
    const Vec3 k = kvec(idx);
    const Complex div = k.x * at(0, idx) + k.y * at(1, idx) + k.z * at(2, idx);
    d = std::max(d, std::abs(div) / norm(k));
  }
  return d / scale;
}

void SpectralField::enforce_reality() {
  for (std::size_t idx = 0; idx < modes(); ++idx) {
    const auto k = wavenumber(idx);
    const bool nyquist = (M_ % 2 == 0) && (k[0] == M_ / 2 || k[1] == M_ / 2 || k[2] == M_ / 2);
    if (nyquist) {
      for (int c = 0; c < 3; ++c) at(c, idx) = 0.0;
      continue;
    }
    const std::size_t m = mirror(idx);
    if (m < idx) continue;
    for (int c = 0; c < 3; ++c) {
      const Complex avg = 0.5 * (at(c, idx) + std::conj(at(c, m)));
      at(c, idx) = avg;
      at(c, m) = std::conj(avg);
    }
  }
}

namespace {

template <class W>
SpectralField multiply(const SpectralField& f, W&& weight) {
  SpectralField out = f;
  for (std::size_t idx = 0; idx < f.modes(); ++idx) {
    const double w = weight(idx);
    for (int c = 0; c < 3; ++c) out.at(c, idx) *= w;
  }
  return out;
}

void require_lp_fits(const SpectralField& f, double N) {
  require_dyad(N);
  if (2.0 * N > f.M() / 2.0)
    throw std::invalid_argument("dyad N = " + std::to_string(static_cast<long>(N)) + " too large for grid " +
                                std::to_string(f.M()));
}

}  // namespace

SpectralField lp_project(const SpectralField& f, double N) {
  require_lp_fits(f, N);
  return multiply(f, [&](std::size_t idx) { return lp_bump(norm(f.kvec(idx)) / N); });
}

SpectralField lp_project_squared(const SpectralField& f, double N) {
  require_lp_fits(f, N);
  return multiply(f, [&](std::size_t idx) { return lp_bump_squared(norm(f.kvec(idx)) / N); });
}

SpectralField angular_project(const SpectralField& f, const Tile& tile) {
  const Vec3 c = normalized(tile.center);
  return multiply(f, [&](std::size_t idx) {
    const Vec3 k = f.kvec(idx);
    if (idx == 0) return 0.0;
    const double a = angle_between(k, c);
    const double b = std::numbers::pi - a;
    const double x = std::min(a, b) / tile.radius;
    return 1.0 - smooth_step(x);
  });
}

SpectralField leray_project_field(const SpectralField& f) {
  SpectralField out = f;
  for (std::size_t idx = 1; idx < f.modes(); ++idx) {
    const Vec3 k = f.kvec(idx);
    const double k2 = dot(k, k);
    const Complex kd = k.x * f.at(0, idx) + k.y * f.at(1, idx) + k.z * f.at(2, idx);
    for (int c = 0; c < 3; ++c) out.at(c, idx) = f.at(c, idx) - k[c] * kd / k2;
  }
  out.set_divergence_free(true);
  return out;
}

double sobolev_norm(const SpectralField& f, double s) {
  double sum = 0.0;
  for (std::size_t idx = 1; idx < f.modes(); ++idx) {
    const Vec3 k = f.kvec(idx);
    double e = 0.0;
    for (int c = 0; c < 3; ++c) e += std::norm(f.at(c, idx));
    if (e == 0.0) continue;
    sum += std::pow(dot(k, k), s) * e;
  }
  return std::sqrt(sum);
}

SpectralField random_divfree_field(int M, std::uint64_t seed, double exponent, double amplitude) {
  SpectralField f(M, true);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> G(0.0, 1.0);
  for (std::size_t idx = 1; idx < f.modes(); ++idx) {
    if (!f.in_dealiased_box(idx)) continue;
    const std::size_t m = f.mirror(idx);
    if (m < idx) continue;
    const Vec3 k = f.kvec(idx);
    const double kn = norm(k);
    Vec3 re{G(rng), G(rng), G(rng)}, im{G(rng), G(rng), G(rng)};
    re = leray_project(k, re);
    im = leray_project(k, im);
    const double n = std::sqrt(dot(re, re) + dot(im, im));
    const double scale = amplitude * std::pow(kn, exponent) / n;
    for (int c = 0; c < 3; ++c) {
      const Complex v(scale * re[c], scale * im[c]);
      f.at(c, idx) = v;
      f.at(c, m) = std::conj(v);
    }
  }
  return f;
}

SpectralField random_field(int M, std::uint64_t seed, double kmax) {
  SpectralField f(M, false);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> G(0.0, 1.0);
  for (std::size_t idx = 1; idx < f.modes(); ++idx) {
    const std::size_t m = f.mirror(idx);
    if (m < idx || m == idx) continue;
    if (norm(f.kvec(idx)) > kmax) continue;
    for (int c = 0; c < 3; ++c) {
      const Complex v(G(rng), G(rng));
      f.at(c, idx) = v;
      f.at(c, m) = std::conj(v);
    }
  }
  return f;
}

std::array<std::vector<double>, 3> to_physical(const SpectralField& f) {
  const Fft3& fft = Fft3::get(f.M());
  std::array<std::vector<double>, 3> out;
  std::vector<Complex> buf(f.modes());
  for (int c = 0; c < 3; ++c) {
    std::copy(f.data().begin() + c * f.modes(), f.data().begin() + (c + 1) * f.modes(), buf.begin());
    fft.backward(buf.data());
    out[c].resize(f.modes());
    for (std::size_t i = 0; i < buf.size(); ++i) out[c][i] = buf[i].real();
  }
  return out;
}

SpectralField from_physical(const std::array<std::vector<double>, 3>& u, int M) {
  SpectralField f(M, false);
  const Fft3& fft = Fft3::get(M);
  std::vector<Complex> buf(f.modes());
  const double inv = 1.0 / static_cast<double>(f.modes());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = u[c][i];
    fft.forward(buf.data());
    for (std::size_t i = 0; i < buf.size(); ++i) f.at(c, i) = buf[i] * inv;
  }
  return f;
}

}  // namespace nslab
