#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nslab/campaigns.hpp"
#include "nslab/ledger.hpp"

using namespace nslab;

namespace {

constexpr int kUsageError = 2;

void print_table(const CsvTable& t, std::ostream& os) {
  std::vector<std::size_t> w(t.columns.size());
  for (std::size_t c = 0; c < w.size(); ++c) {
    w[c] = t.columns[c].size();
    for (const auto& row : t.rows) w[c] = std::max(w[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    os << "  ";
    for (std::size_t c = 0; c < cells.size(); ++c) os << std::left << std::setw(static_cast<int>(w[c] + 2)) << cells[c];
    os << "\n";
  };
  line(t.columns);
  for (const auto& row : t.rows) line(row);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nslab: numerical checks for frequency-localized estimates of the Navier-Stokes nonlinearity"};
  app.require_subcommand(1);
  app.fallthrough();

  CampaignOptions opt;
  std::string delta_text = "5/8", dyads_text;
  bool parallel = false;
  app.add_option("--out", opt.out_dir, "output directory for JSON/CSV reports")->envname("NSLAB_OUT");
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--delta", delta_text, "delta as p/q, in (1/3, 5/8]");
  app.add_option("--dyads", dyads_text, "dyad exponents k0..k1");
  app.add_flag("--quick", opt.quick, "fast variants of every suite");
  app.add_flag("--parallel", parallel, "run independent campaigns concurrently (all)");

  std::vector<CampaignReport> reports;
  std::function<void()> action;
  bool show_table = false;

  auto ledger = app.add_subcommand("ledger", "exact exponent tables and dyadic sums")->require_subcommand(1);
  ledger->fallthrough();
  ledger->add_subcommand("verify", "recompute every balance table\nCSV ledger_tables: name,total,expected,margin_at_5/8,pass")
      ->fallthrough()
      ->callback([&] {
        action = [&] {
          show_table = true;
          reports.push_back(run_ledger_verify(opt));
        };
      });
  auto lsum = ledger->add_subcommand("sum", "partial dyadic sum against its geometric tail\nCSV ledger_sum_partials: k,partial_sum");
  lsum->fallthrough();
  lsum->add_option("--alpha", opt.alpha, "decay exponent as p/q")->required();
  lsum->add_option("--k0", opt.k0, "first index");
  lsum->add_option("--kmax", opt.kmax, "last index");
  lsum->callback([&] { action = [&] { reports.push_back(run_ledger_sum(opt)); }; });

  double N = 0.0;
  auto freqgeo = app.add_subcommand("freqgeo", "masks, zones, tilings and time partitions")->require_subcommand(1);
  freqgeo->fallthrough();
  auto fcheck = freqgeo->add_subcommand(
      "check",
      "zone/mask invariants, tilings and partitions\nCSV freqgeo_tilings: N,count,covering_ratio,max_overlap,antipodal,"
      "partners_over_N\nCSV freqgeo_tiling_N<N>: center_x,center_y,center_z,radius\nCSV freqgeo_partition: N,windows,"
      "sum_sq_error,sup_sum_d1_over_sqrtN,sup_d1_over_sqrtN,sup_d2_over_N");
  fcheck->fallthrough();
  fcheck->add_option("--N", N, "dyad");
  fcheck->add_option("--samples", opt.samples, "random pair samples");
  fcheck->callback([&] { action = [&] { reports.push_back(run_freqgeo_check(opt)); }; });

  auto phase = app.add_subcommand("phase", "phase geometry and time normal forms")->require_subcommand(1);
  phase->fallthrough();
  auto pverify = phase->add_subcommand("verify", "Hessian, derivative sizes, IBP gain and Duhamel checks\nCSV phase_ibp: N,dt,drho1,drho2,gain_over_reference");
  pverify->fallthrough();
  pverify->add_option("--N", N, "dyad");
  pverify->callback([&] { action = [&] { reports.push_back(run_phase_verify(opt)); }; });

  auto symbols = app.add_subcommand("symbols", "Leray projection and the null-form symbol")->require_subcommand(1);
  symbols->fallthrough();
  auto corona = symbols->add_subcommand(
      "corona",
      "sampled sup of the null-form symbol on the narrow corona\nCSV symbols_corona: N,delta,max_ratio,"
      "max_ratio_eta_norm,accepted,argmax_eta_norm_over_N,argmax_zeta_norm_over_scale,argmax_angle_over_limit");
  corona->fallthrough();
  corona->add_option("--N", N, "dyad (default 2^8, 2^10, 2^12)");
  corona->add_option("--samples", opt.samples, "samples per dyad");
  corona->callback([&] { action = [&] { reports.push_back(run_symbols_corona(opt)); }; });

  auto kernels = app.add_subcommand("kernels", "propagator kernels and L6 ratios")->require_subcommand(1);
  kernels->fallthrough();
  auto kscan = kernels->add_subcommand("scan", "kernel norms across dyads\nCSV kernels_scan: N,sup_ratio,L3_ratio,L6_ratio,fitted_exponent");
  kscan->fallthrough();
  kscan->add_option("--kind", opt.kind, "schrodinger or heat")->check(CLI::IsMember({"schrodinger", "heat"}));
  kscan->add_option("--trials", opt.trials, "packet trials per dyad");
  kscan->add_option("--samples", opt.samples, "cylinder samples for the sup");
  kscan->callback([&] { action = [&] { reports.push_back(run_kernels_scan(opt)); }; });

  auto packets = app.add_subcommand("packets", "wave packets and bilinear decoupling")->require_subcommand(1);
  packets->fallthrough();
  auto dec = packets->add_subcommand("decoupling", "rank-4 decoupling ratio\nCSV packets_decoupling: N,angleAB,ratio,L3,L6F,L6G");
  dec->fallthrough();
  dec->add_option("--geometry", opt.geometry, "orthogonal or generic")->check(CLI::IsMember({"orthogonal", "generic"}));
  dec->add_option("--trials", opt.trials, "random tile pairs per dyad (generic)");
  dec->callback([&] { action = [&] { reports.push_back(run_packets_decoupling(opt)); }; });

  auto fields = app.add_subcommand("fields", "spectral fields, bilinear blocks and the solver")->require_subcommand(1);
  fields->fallthrough();
  auto frun = fields->add_subcommand("run", "integrate a configured run and store the trajectory\nCSV fields_run_energy: t,energy,H1/2,H1");
  frun->fallthrough();
  frun->add_option("--config", opt.config_path, "JSON config")->required()->check(CLI::ExistingFile);
  frun->add_option("--traj", opt.traj_dir, "trajectory directory (default <out>/trajectory)");
  frun->callback([&] { action = [&] { reports.push_back(run_fields_run(opt)); }; });
  auto fscale = fields->add_subcommand("scaling", "off-diagonal scaling fit on a stored trajectory\nCSV fields_scaling_scaling: N,A_N,r_N");
  fscale->fallthrough();
  fscale->add_option("--traj", opt.traj_dir, "trajectory directory")->required()->check(CLI::ExistingDirectory);
  fscale->callback([&] { action = [&] { reports.push_back(run_fields_scaling(opt)); }; });

  app.add_subcommand("all", "every module suite")->fallthrough()->callback([&] {
    action = [&] {
      for (auto& r : run_all(opt, parallel)) reports.push_back(std::move(r));
    };
  });

  try {
    app.parse(argc, argv);
    if (!DeltaParam::admissible(parse_rational(delta_text)))
      throw CLI::ValidationError("--delta", "delta must lie in (1/3, 5/8], got " + delta_text);
    opt.delta = delta_text;
    if (!dyads_text.empty()) opt.dyads = parse_dyad_range(dyads_text);
    if (N != 0.0) opt.N = N;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "nslab: usage error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    action();
  } catch (const std::logic_error& e) {
    std::cerr << "nslab: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "nslab: " << e.what() << "\n";
    return EXIT_FAILURE;
  }

  bool ok = true;
  for (const auto& r : reports) {
    try {
      write_report(r, opt.out_dir);
    } catch (const std::exception& e) {
      std::cerr << "nslab: cannot write report: " << e.what() << "\n";
      return kUsageError;
    }
    print_summary(r, std::cout);
    if (show_table && !r.tables.empty()) print_table(r.tables.front(), std::cout);
    ok = ok && r.passed();
  }
  std::cout << (ok ? "all checks passed" : "some checks failed") << " (reports in " << opt.out_dir << ")\n";
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
