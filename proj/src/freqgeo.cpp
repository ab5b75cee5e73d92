#include "nslab/freqgeo.hpp"

#include <algorithm>
#include <limits>

namespace nslab {

RhoCoords rho_coords(const FreqPair& pair) {
  return {pair.rho1(), pair.rho2(), pair.zeta()};
}

namespace {

bool in_annulus(double r, double N, const ZoneConstants& k) {
  return r >= k.annulus_lo * N && r <= k.annulus_hi * N;
}

}  // namespace

bool narrow_corona_constraints(const FreqPair& pair, double N, double delta, const ZoneConstants& k) {
  const double a = norm(pair.xi), b = norm(pair.eta);
  if (!in_annulus(a, N, k) || !in_annulus(b, N, k)) return false;
  const Vec3 z = pair.zeta();
  const double zn = norm(z);
  const double scale = std::pow(N, 1.0 - delta);
  if (zn < scale || zn > 2.0 * scale) return false;
  const double inv_sqrt = 1.0 / std::sqrt(N);
  if (angle_between(pair.xi, -pair.eta) > inv_sqrt) return false;
  return angle_between(pair.eta, z) <= k.corona_c * inv_sqrt * zn / N;
}

ZoneFlags zone_membership(const FreqPair& pair, double N, const DeltaParam& delta, const ZoneConstants& k) {
  ZoneFlags f;
  const double d = delta.as_double();
  const bool ann = in_annulus(norm(pair.xi), N, k) && in_annulus(norm(pair.eta), N, k);
  if (!ann) return f;
  const double zn = norm(pair.zeta());
  const double scale = std::pow(N, 1.0 - d);
  f.in_diagonal = zn < scale;
  f.in_offdiag = !f.in_diagonal;
  f.in_offdiag_rad = f.in_offdiag && std::abs(pair.rho2()) >= k.radial_c * scale;
  f.in_narrow_corona = delta.value() > Rational(1, 2) && narrow_corona_constraints(pair, N, d, k);
  return f;
}

double smooth_mask(double zeta_norm, double N, double delta) {
  return smooth_step(zeta_norm / std::pow(N, 1.0 - delta));
}

double smooth_mask(const FreqPair& pair, double N, const DeltaParam& delta) {
  return smooth_mask(norm(pair.zeta()), N, delta.as_double());
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Vec3> fibonacci_points(std::size_t n, double eps) {
  std::vector<Vec3> pts(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = n == 1 ? 1.0 : 1.0 - 2.0 * (i + eps) / (n - 1 + 2 * eps);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    pts[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return pts;
}

}  // namespace

Tiling::Tiling(double N, const TilingParams& params) : N_(N) {
  require_dyad(N, 4.0);
  radius_ = params.c_tile / std::sqrt(N);
  const auto n = static_cast<std::size_t>(std::ceil(params.count_factor * N / (params.c_tile * params.c_tile)));
  for (const auto& p : fibonacci_points(n, params.fib_offset)) tiles_.push_back({p, radius_});

  cell_ = std::max(2.0 * radius_, 0.02);
  cells_per_axis_ = static_cast<int>(std::ceil(2.0 / cell_)) + 1;
  buckets_.assign(static_cast<std::size_t>(cells_per_axis_) * cells_per_axis_ * cells_per_axis_, {});
  auto cell_of = [&](double v) {
    return std::clamp(static_cast<int>((v + 1.0) / cell_), 0, cells_per_axis_ - 1);
  };
  for (std::size_t i = 0; i < tiles_.size(); ++i) {
    const Vec3& c = tiles_[i].center;
    const std::size_t key =
        (static_cast<std::size_t>(cell_of(c.x)) * cells_per_axis_ + cell_of(c.y)) * cells_per_axis_ + cell_of(c.z);
    buckets_[key].push_back(static_cast<std::uint32_t>(i));
  }
}

template <class F>
void Tiling::for_candidates(const Vec3& u, F&& f) const {
  auto cell_of = [&](double v) {
    return std::clamp(static_cast<int>((v + 1.0) / cell_), 0, cells_per_axis_ - 1);
  };
  const int cx = cell_of(u.x), cy = cell_of(u.y), cz = cell_of(u.z);
  for (int i = std::max(cx - 1, 0); i <= std::min(cx + 1, cells_per_axis_ - 1); ++i)
    for (int j = std::max(cy - 1, 0); j <= std::min(cy + 1, cells_per_axis_ - 1); ++j)
      for (int l = std::max(cz - 1, 0); l <= std::min(cz + 1, cells_per_axis_ - 1); ++l)
        for (auto idx : buckets_[(static_cast<std::size_t>(i) * cells_per_axis_ + j) * cells_per_axis_ + l]) f(idx);
}

std::size_t Tiling::assign(const Vec3& direction) const {
  const Vec3 u = normalized(direction);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_angle = std::numeric_limits<double>::infinity();
  auto consider = [&](std::size_t idx) {
    const double a = angle_between(u, tiles_[idx].center);
    if (a < best_angle || (a == best_angle && idx < best)) {
      best_angle = a;
      best = idx;
    }
  };
  for_candidates(u, consider);
  // The neighbourhood search only sees centers within about one cell; fall back
  // to a full scan when the nearest candidate might lie outside it.
  if (best_angle > cell_) {
    for (std::size_t i = 0; i < tiles_.size(); ++i) consider(i);
  }
  return best;
}

std::vector<std::size_t> Tiling::covering(const Vec3& direction) const {
  const Vec3 u = normalized(direction);
  std::vector<std::size_t> out;
  for_candidates(u, [&](std::size_t idx) {
    if (angle_between(u, tiles_[idx].center) <= radius_) out.push_back(idx);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Tile> build_tiling(double N, const TilingParams& params) { return Tiling(N, params).tiles(); }

TilingQuality check_tiling(const Tiling& tiling, std::size_t samples) {
  TilingQuality q;
  q.count = tiling.size();
  auto probe = [&](const Vec3& u) {
    const std::size_t near = tiling.assign(u);
    const double ratio = angle_between(u, tiling.tiles()[near].center) / tiling.radius();
    q.covering_ratio = std::max(q.covering_ratio, ratio);
    q.max_overlap = std::max(q.max_overlap, static_cast<int>(tiling.covering(u).size()));
    return ratio <= 1.0;
  };
  for (const auto& u : fibonacci_points(samples, 0.5)) probe(u);
  q.antipodal_covered = true;
  for (const auto& t : tiling.tiles())
    if (!probe(-t.center)) q.antipodal_covered = false;
  return q;
}

bool rank4_predicate(const Tile& a, const Tile& b, double N, double c_r) {
  const double thr = c_r / std::sqrt(N);
  return angle_between(a.center, -b.center) >= thr && angle_between(a.center, b.center) >= thr;
}

std::size_t partner_count(std::size_t a, const Tiling& tiling, double c_r) {
  std::size_t count = 0;
  const Tile& ta = tiling.tiles().at(a);
  for (const auto& tb : tiling.tiles())
    if (rank4_predicate(ta, tb, tiling.N(), c_r)) ++count;
  return count;
}

// ---------------------------------------------------------------------------

TimePartition::TimePartition(double N, double horizon) : N_(N), horizon_(horizon) {
  require_dyad(N, 1.0);
  L_ = 1.0 / std::sqrt(N);
  if (!(horizon >= L_))
    throw std::invalid_argument("horizon must be at least N^{-1/2}");
  width_ = L_ / 6.0;
  const double spacing = 2.0 * L_ / 3.0;
  const auto J = static_cast<std::size_t>(std::ceil(horizon / spacing)) + 1;
  for (std::size_t j = 0; j < J; ++j) centers_.push_back(spacing * static_cast<double>(j));
}

double TimePartition::chi(std::size_t j, double t, int k) const {
  const double u = t - centers_[j];
  const double au = std::abs(u);
  const double start = 0.25 * L_;
  if (au <= start) return k == 0 ? 1.0 : 0.0;
  if (au >= start + width_) return 0.0;
  // Falling edge: cos(pi/2 * r) with r the smooth ramp across [start, start + width].
  const double s = 1.0 + (au - start) / width_;
  const double r = smooth_step(s);
  const double half_pi = 0.5 * std::numbers::pi;
  if (k == 0) return std::cos(half_pi * r);
  const double sgn = u < 0 ? -1.0 : 1.0;
  const double r1 = smooth_step_derivative(s) / width_;
  if (k == 1) return -sgn * std::sin(half_pi * r) * half_pi * r1;
  const double r2 = smooth_step_second_derivative(s) / (width_ * width_);
  return -std::cos(half_pi * r) * half_pi * half_pi * r1 * r1 - std::sin(half_pi * r) * half_pi * r2;
}

PartitionStats partition_stats(const TimePartition& p, std::size_t samples) {
  PartitionStats st;
  const double lo = 0.0, hi = p.horizon();
  const double L = p.window_length();
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
    double sum_sq = 0.0, sum_d1 = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (std::abs(t - p.center(j)) > L) continue;
      const double c0 = p.chi(j, t, 0);
      const double c1 = p.chi(j, t, 1);
      const double c2 = p.chi(j, t, 2);
      if (c0 != 0.0 && std::abs(t - p.center(j)) > 0.5 * L) st.supports_inside_windows = false;
      sum_sq += c0 * c0;
      sum_d1 += std::abs(c1);
      st.sup_abs_d1 = std::max(st.sup_abs_d1, std::abs(c1));
      st.sup_abs_d2 = std::max(st.sup_abs_d2, std::abs(c2));
    }
    st.max_sum_sq_error = std::max(st.max_sum_sq_error, std::abs(sum_sq - 1.0));
    st.sup_sum_abs_d1 = std::max(st.sup_sum_abs_d1, sum_d1);
  }
  return st;
}

}  // namespace nslab
