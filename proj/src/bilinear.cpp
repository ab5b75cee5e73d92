#include "nslab/bilinear.hpp"

#include <algorithm>

namespace nslab {

std::string to_string(BlockLabel b) {
  switch (b) {
    case BlockLabel::lh_h: return "lh->h";
    case BlockLabel::hl_h: return "hl->h";
    case BlockLabel::hh_h: return "hh->h";
    case BlockLabel::hh_l: return "hh->l";
    case BlockLabel::lh_h_mirror: return "lh->h'";
    case BlockLabel::hl_h_mirror: return "hl->h'";
    case BlockLabel::hh_h_mirror: return "hh->h'";
    case BlockLabel::hh_l_mirror: return "hh->l'";
  }
  return "?";
}

std::string to_string(Zone z) {
  switch (z) {
    case Zone::none: return "none";
    case Zone::offdiag: return "offdiag";
    case Zone::offdiag_rad: return "offdiag_rad";
    case Zone::narrow_corona: return "narrow_corona";
  }
  return "?";
}

const std::vector<BlockLabel>& all_block_labels() {
  static const std::vector<BlockLabel> v{BlockLabel::lh_h,        BlockLabel::hl_h,        BlockLabel::hh_h,
                                         BlockLabel::hh_l,        BlockLabel::lh_h_mirror, BlockLabel::hl_h_mirror,
                                         BlockLabel::hh_h_mirror, BlockLabel::hh_l_mirror};
  return v;
}

BlockLabel parse_block_label(const std::string& s) {
  for (auto b : all_block_labels())
    if (to_string(b) == s) return b;
  throw std::invalid_argument("unknown block label '" + s + "'");
}

Zone parse_zone(const std::string& s) {
  for (auto z : {Zone::none, Zone::offdiag, Zone::offdiag_rad, Zone::narrow_corona})
    if (to_string(z) == s) return z;
  throw std::invalid_argument("unknown zone '" + s + "'");
}

bool is_mirror(BlockLabel b) {
  return b == BlockLabel::lh_h_mirror || b == BlockLabel::hl_h_mirror || b == BlockLabel::hh_h_mirror ||
         b == BlockLabel::hh_l_mirror;
}

namespace {

BlockLabel base_label(BlockLabel b) {
  switch (b) {
    case BlockLabel::lh_h_mirror: return BlockLabel::lh_h;
    case BlockLabel::hl_h_mirror: return BlockLabel::hl_h;
    case BlockLabel::hh_h_mirror: return BlockLabel::hh_h;
    case BlockLabel::hh_l_mirror: return BlockLabel::hh_l;
    default: return b;
  }
}

int dlog(double a, double b) { return static_cast<int>(std::lround(std::log2(a / b))); }

struct DyadWeight {
  double N;
  double w;
};

/// Dyads (at most two) whose multiplier is nonzero at radius r.
int dyad_weights(double r, Projection p, DyadWeight out[2]) {
  int n = 0;
  if (r <= 0.0) return 0;
  double N = std::exp2(std::floor(std::log2(r)));  // N <= r < 2N
  for (double cand : {N, 2.0 * N}) {
    if (cand < 1.0) continue;
    const double w = p == Projection::lp ? lp_bump(r / cand) : lp_bump_squared(r / cand);
    if (w != 0.0) out[n++] = {cand, w};
  }
  return n;
}

double dyad_weight(double r, double N, Projection p) {
  if (N < 1.0) return 0.0;
  return p == Projection::lp ? lp_bump(r / N) : lp_bump_squared(r / N);
}

}  // namespace

BlockLabel classify_dyads(double N1, double N2, double N) {
  const int d1 = dlog(N1, N), d2 = dlog(N2, N), d12 = dlog(N1, N2);
  if (std::abs(d1) <= 2 && std::abs(d2) <= 2) return BlockLabel::hh_h;
  if (std::abs(d12) <= 2 && std::max(d1, d2) >= 3) return BlockLabel::hh_l;
  return N2 < N1 ? BlockLabel::lh_h : BlockLabel::hl_h;
}

std::vector<double> grid_dyads(int M) {
  const double rmax = std::sqrt(3.0) * ((M - 1) / 3);
  std::vector<double> d;
  for (double N = 1.0; N / 2.0 < rmax; N *= 2.0) d.push_back(N);
  return d;
}

namespace {

std::vector<std::size_t> box_modes(const SpectralField& f) {
  std::vector<std::size_t> out;
  for (std::size_t idx = 0; idx < f.modes(); ++idx)
    if (f.in_dealiased_box(idx)) out.push_back(idx);
  return out;
}

std::array<Complex, 3> project(const Vec3& k, std::array<Complex, 3> v) {
  const double k2 = dot(k, k);
  if (k2 == 0.0) return {0.0, 0.0, 0.0};
  const Complex kd = k.x * v[0] + k.y * v[1] + k.z * v[2];
  for (int c = 0; c < 3; ++c) v[c] -= k[c] * kd / k2;
  return v;
}

}  // namespace

SpectralField bilinear_full(const SpectralField& u, const SpectralField& v) {
  if (u.M() != v.M()) throw std::invalid_argument("grid mismatch");
  const int M = u.M();
  SpectralField a = u, b = v;
  a.dealias();
  b.dealias();
  const auto pa = to_physical(a);
  const auto pb = to_physical(b);
  SpectralField out(M, true);
  const std::size_t n = out.modes();
  const Complex I(0.0, 1.0);
  for (int j = 0; j < 3; ++j) {
    std::array<std::vector<double>, 3> prod;
    for (int i = 0; i < 3; ++i) {
      prod[i].resize(n);
      for (std::size_t x = 0; x < n; ++x) prod[i][x] = pa[j][x] * pb[i][x];
    }
    const SpectralField ph = from_physical(prod, M);
    for (std::size_t idx = 0; idx < n; ++idx) {
      const double kj = out.kvec(idx)[j];
      for (int i = 0; i < 3; ++i) out.at(i, idx) += I * kj * ph.at(i, idx);
    }
  }
  out.dealias();
  return leray_project_field(out);
}

SpectralField bilinear_full_direct(const SpectralField& u, const SpectralField& v) {
  if (u.M() != v.M()) throw std::invalid_argument("grid mismatch");
  SpectralField out(u.M(), true);
  const auto box = box_modes(u);
  const Complex I(0.0, 1.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t a = 0; a < box.size(); ++a) {
    const std::size_t idx = box[a];
    const Vec3 k = out.kvec(idx);
    std::array<Complex, 3> acc{};
    for (std::size_t k1i : box) {
      const auto k1 = u.wavenumber(k1i);
      const int k2x = static_cast<int>(k.x) - k1[0], k2y = static_cast<int>(k.y) - k1[1],
                k2z = static_cast<int>(k.z) - k1[2];
      const int K = u.dealias_cutoff();
      if (std::abs(k2x) > K || std::abs(k2y) > K || std::abs(k2z) > K) continue;
      const std::size_t k2i = u.index(k2x, k2y, k2z);
      const Complex kdotu = k.x * u.at(0, k1i) + k.y * u.at(1, k1i) + k.z * u.at(2, k1i);
      for (int c = 0; c < 3; ++c) acc[c] += I * kdotu * v.at(c, k2i);
    }
    out.set_vec(idx, project(k, acc));
  }
  return out;
}

namespace {

double zone_weight(const Vec3& k1, const Vec3& k2, double r1, double r2, const BlockSpec& spec,
                   const DeltaParam& delta, double scale) {
  if (spec.zone == Zone::none) return 1.0;
  const double N = spec.N;
  const auto& c = spec.constants;
  const bool ann = r1 >= c.annulus_lo * N && r1 <= c.annulus_hi * N && r2 >= c.annulus_lo * N &&
                   r2 <= c.annulus_hi * N;
  if (!ann) return 0.0;
  if (spec.zone == Zone::narrow_corona)
    return zone_membership(FreqPair{k1, k2}, N, delta, c).in_narrow_corona ? 1.0 : 0.0;
  const double w = smooth_step(norm(k1 + k2) / scale);
  if (spec.zone == Zone::offdiag) return w;
  return 0.5 * std::abs(r1 - r2) >= c.radial_c * scale ? w : 0.0;
}

SpectralField weight_by_dyad(const SpectralField& f, double N, Projection p) {
  SpectralField out = f;
  for (std::size_t idx = 0; idx < f.modes(); ++idx) {
    const double w = dyad_weight(norm(f.kvec(idx)), N, p);
    for (int c = 0; c < 3; ++c) out.at(c, idx) *= w;
  }
  return out;
}

}  // namespace

SpectralField bilinear_block(const SpectralField& u, const SpectralField& v, const BlockSpec& spec,
                             BilinearMethod method) {
  if (u.M() != v.M()) throw std::invalid_argument("grid mismatch");
  require_dyad(spec.N);
  const auto dyads = grid_dyads(u.M());
  if (std::find(dyads.begin(), dyads.end(), spec.N) == dyads.end())
    throw std::invalid_argument("output dyad too large for the grid");
  const DeltaParam delta(spec.delta);
  const BlockLabel base = base_label(spec.label);
  const SpectralField& a = is_mirror(spec.label) ? v : u;
  const SpectralField& b = is_mirror(spec.label) ? u : v;

  if (method == BilinearMethod::convolution) {
    if (spec.zone != Zone::none)
      throw std::invalid_argument("zone masks are bilinear symbols; use the direct method");
    SpectralField acc(u.M(), true);
    for (double N1 : dyads)
      for (double N2 : dyads) {
        if (classify_dyads(N1, N2, spec.N) != base) continue;
        acc += bilinear_full(weight_by_dyad(a, N1, spec.projection), weight_by_dyad(b, N2, spec.projection));
      }
    return weight_by_dyad(acc, spec.N, spec.projection);
  }

  SpectralField out(u.M(), true);
  const auto box = box_modes(u);
  // Per-mode radii and dyad weights, shared by every pair below.
  std::vector<double> radius(u.modes(), 0.0);
  std::vector<std::array<DyadWeight, 2>> weights(u.modes());
  std::vector<int> nweights(u.modes(), 0);
  std::vector<std::size_t> outputs, inputs;
  for (std::size_t idx : box) {
    const double r = norm(u.kvec(idx));
    radius[idx] = r;
    nweights[idx] = dyad_weights(r, spec.projection, weights[idx].data());
    if (dyad_weight(r, spec.N, spec.projection) != 0.0) outputs.push_back(idx);
    if (spec.zone == Zone::none ||
        (r >= spec.constants.annulus_lo * spec.N && r <= spec.constants.annulus_hi * spec.N))
      inputs.push_back(idx);
  }
  std::vector<std::pair<double, double>> in_block;
  for (double N1 : dyads)
    for (double N2 : dyads)
      if (classify_dyads(N1, N2, spec.N) == base) in_block.emplace_back(N1, N2);
  auto pair_in_block = [&](double N1, double N2) {
    return std::find(in_block.begin(), in_block.end(), std::make_pair(N1, N2)) != in_block.end();
  };
  const double scale = std::pow(spec.N, 1.0 - delta.as_double());
  const int K = u.dealias_cutoff();
  const Complex I(0.0, 1.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t oi = 0; oi < outputs.size(); ++oi) {
    const std::size_t idx = outputs[oi];
    const auto kk = u.wavenumber(idx);
    const Vec3 k = u.kvec(idx);
    std::array<Complex, 3> acc{};
    for (std::size_t k1i : inputs) {
      const auto k1 = u.wavenumber(k1i);
      const int k2x = kk[0] - k1[0], k2y = kk[1] - k1[1], k2z = kk[2] - k1[2];
      if (std::abs(k2x) > K || std::abs(k2y) > K || std::abs(k2z) > K) continue;
      const std::size_t k2i = u.index(k2x, k2y, k2z);
      const auto& w1 = weights[k1i];
      const auto& w2 = weights[k2i];
      double W = 0.0;
      for (int i = 0; i < nweights[k1i]; ++i)
        for (int j = 0; j < nweights[k2i]; ++j)
          if (pair_in_block(w1[i].N, w2[j].N)) W += w1[i].w * w2[j].w;
      if (W == 0.0) continue;
      if (spec.zone != Zone::none) {
        const Vec3 v1{double(k1[0]), double(k1[1]), double(k1[2])};
        const Vec3 v2{double(k2x), double(k2y), double(k2z)};
        W *= zone_weight(v1, v2, radius[k1i], radius[k2i], spec, delta, scale);
        if (W == 0.0) continue;
      }
      const Complex kdota = k.x * a.at(0, k1i) + k.y * a.at(1, k1i) + k.z * a.at(2, k1i);
      for (int c = 0; c < 3; ++c) acc[c] += W * I * kdota * b.at(c, k2i);
    }
    const double wout = dyad_weight(radius[idx], spec.N, spec.projection);
    auto p = project(k, acc);
    for (int c = 0; c < 3; ++c) p[c] *= wout;
    out.set_vec(idx, p);
  }
  return out;
}

SpectralField offdiag_block(const SpectralField& u, double N, const DeltaParam& delta, const ZoneConstants& k) {
  BlockSpec spec;
  spec.label = BlockLabel::hh_h;
  spec.N = N;
  spec.zone = Zone::offdiag;
  spec.delta = delta.value();
  spec.projection = Projection::lp;
  spec.constants = k;
  return bilinear_block(u, u, spec, BilinearMethod::direct);
}

}  // namespace nslab
