#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nslab/report.hpp"

namespace nslab {

struct CampaignOptions {
  std::uint64_t seed = 1;
  std::string delta = "5/8";
  std::optional<std::pair<int, int>> dyads;  ///< exponents k0..k1, inclusive
  bool quick = false;

  // Subcommand-specific knobs; zero or empty selects the campaign default.
  std::optional<double> N;
  std::size_t samples = 0;
  std::size_t trials = 0;
  std::string kind = "schrodinger";
  std::string geometry = "orthogonal";
  std::string alpha = "15/4";
  long k0 = 0;
  long kmax = 20;
  std::string config_path;
  std::string traj_dir;
  std::string out_dir = "nslab_out";
};

/// Parses "k0..k1" (k0 <= k1, both non-negative).
std::pair<int, int> parse_dyad_range(const std::string& text);
std::vector<double> dyads_from_range(std::pair<int, int> range);

CampaignReport run_ledger_verify(const CampaignOptions& o);
CampaignReport run_ledger_sum(const CampaignOptions& o);
CampaignReport run_freqgeo_check(const CampaignOptions& o);
CampaignReport run_phase_verify(const CampaignOptions& o);
CampaignReport run_symbols_corona(const CampaignOptions& o);
CampaignReport run_kernels_scan(const CampaignOptions& o);
CampaignReport run_packets_decoupling(const CampaignOptions& o);

/// Integrates the configured run, stores the trajectory under `traj_dir`
/// (default <out>/trajectory) and checks the solver invariants.
CampaignReport run_fields_run(const CampaignOptions& o);
/// Reads a stored trajectory and fits the off-diagonal scaling slope.
CampaignReport run_fields_scaling(const CampaignOptions& o);
/// Bilinear oracles, projections and a solver pass; the non-quick variant adds
/// the 32^3 scaling measurement.
CampaignReport run_fields_suite(const CampaignOptions& o);

/// One report per module, in a fixed order regardless of `parallel`.
std::vector<CampaignReport> run_all(const CampaignOptions& o, bool parallel);

}  // namespace nslab
