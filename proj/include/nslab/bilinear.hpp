#pragma once

#include <string>
#include <vector>

#include "nslab/freqgeo.hpp"
#include "nslab/ledger.hpp"
#include "nslab/spectral_field.hpp"

namespace nslab {

/// Paraproduct blocks of B(u, v) = P Div(u (x) v) relative to the output dyad N,
/// with input dyads N1 (on u) and N2 (on v):
///   hh_h : |log2(N1/N)| <= 2 and |log2(N2/N)| <= 2  (both inputs P_{~N})
///   hh_l : otherwise, N1 ~ N2 (|log2(N1/N2)| <= 2) and max(N1, N2) >= 8N
///   lh_h : otherwise with N2 < N1   (N2 << N1 ~ N)
///   hl_h : otherwise with N1 <= N2  (N1 << N2 ~ N)
/// The mirrored labels apply the same rule to B(v, u).
enum class BlockLabel { lh_h, hl_h, hh_h, hh_l, lh_h_mirror, hl_h_mirror, hh_h_mirror, hh_l_mirror };

enum class Zone { none, offdiag, offdiag_rad, narrow_corona };
enum class Projection { lp, lp_squared };
enum class BilinearMethod { direct, convolution };

std::string to_string(BlockLabel b);
std::string to_string(Zone z);
BlockLabel parse_block_label(const std::string& s);
Zone parse_zone(const std::string& s);
const std::vector<BlockLabel>& all_block_labels();
bool is_mirror(BlockLabel b);

struct BlockSpec {
  BlockLabel label = BlockLabel::hh_h;
  double N = 1.0;
  Zone zone = Zone::none;
  Rational delta = Rational(5, 8);
  Projection projection = Projection::lp_squared;
  ZoneConstants constants{};
};

/// Block label (unmirrored) of the input dyad pair (N1, N2) at output dyad N.
BlockLabel classify_dyads(double N1, double N2, double N);

/// Dyads 1, 2, 4, ... whose LP multiplier can be nonzero on the dealiased box of an M grid.
std::vector<double> grid_dyads(int M);

/// The full dealiased bilinear term P Div(u (x) v), computed pseudo-spectrally.
SpectralField bilinear_full(const SpectralField& u, const SpectralField& v);
/// Same quantity by brute-force summation over pairs k1 + k2 = k in the dealiased box.
SpectralField bilinear_full_direct(const SpectralField& u, const SpectralField& v);

/// Output projection P_N, Leray projection and the divergence symbol applied to
/// the pair-weighted product of u and v restricted to the block.
/// The convolution method only supports zone == none.
SpectralField bilinear_block(const SpectralField& u, const SpectralField& v, const BlockSpec& spec,
                             BilinearMethod method = BilinearMethod::direct);

/// Off-diagonal block  P_N P Div[P_{~N} u (x) P_{~N} u 1_{O_N}]  with the smooth off-diagonal mask.
SpectralField offdiag_block(const SpectralField& u, double N, const DeltaParam& delta,
                            const ZoneConstants& k = {});

}  // namespace nslab
