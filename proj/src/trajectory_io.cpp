#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nslab/ns_solver.hpp"

namespace nslab {

using nlohmann::json;
namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little, "trajectory dumps assume a little-endian host");

NSConfig config_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  NSConfig c;
  c.M = j.value("grid", c.M);
  c.viscosity = j.value("viscosity", c.viscosity);
  c.horizon = j.value("horizon", c.horizon);
  c.snapshots = j.value("snapshots", c.snapshots);
  c.seed = j.value("seed", c.seed);
  c.spectrum_exponent = j.value("spectrum_exponent", c.spectrum_exponent);
  c.amplitude = j.value("amplitude", c.amplitude);
  c.dt = j.value("dt", c.dt);
  c.cfl_max = j.value("cfl_max", c.cfl_max);
  if (j.contains("delta")) c.delta = j["delta"].is_string() ? j["delta"].get<std::string>() : j["delta"].dump();
  if (j.contains("dyads")) {
    const auto& d = j["dyads"];
    c.dyad_k0 = d.at(0).get<int>();
    c.dyad_k1 = d.at(1).get<int>();
  }
  return c;
}

NSConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const NSConfig& c) {
  json j;
  j["grid"] = c.M;
  j["viscosity"] = c.viscosity;
  j["horizon"] = c.horizon;
  j["snapshots"] = c.snapshots;
  j["seed"] = c.seed;
  j["spectrum_exponent"] = c.spectrum_exponent;
  j["amplitude"] = c.amplitude;
  j["dt"] = c.dt;
  j["cfl_max"] = c.cfl_max;
  j["delta"] = c.delta;
  j["dyads"] = {c.dyad_k0, c.dyad_k1};
  return j.dump(2);
}

void write_trajectory(const Trajectory& traj, const std::string& dir) {
  fs::create_directories(dir);
  json m;
  m["grid"] = traj.M;
  m["viscosity"] = traj.viscosity;
  m["horizon"] = traj.horizon;
  m["times"] = traj.times;
  m["endianness"] = "little";
  m["scalar"] = "complex float64 (re, im)";
  m["layout"] = "component-major, k-order lexicographic (kx, ky, kz), index i -> i if i <= M/2 else i - M";
  json files = json::array();
  for (std::size_t s = 0; s < traj.fields.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.bin", s);
    files.push_back(name);
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    const auto& d = traj.fields[s].data();
    out.write(reinterpret_cast<const char*>(d.data()), static_cast<std::streamsize>(d.size() * sizeof(Complex)));
    if (!out) throw std::runtime_error("failed writing snapshot " + std::string(name));
  }
  m["files"] = files;
  std::ofstream(fs::path(dir) / "manifest.json") << m.dump(2) << "\n";
}

Trajectory read_trajectory(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw std::runtime_error("no manifest.json in '" + dir + "'");
  json m;
  in >> m;
  if (m.value("endianness", "little") != "little") throw std::runtime_error("unsupported endianness");
  Trajectory t;
  t.M = m.at("grid").get<int>();
  t.viscosity = m.at("viscosity").get<double>();
  t.horizon = m.at("horizon").get<double>();
  t.times = m.at("times").get<std::vector<double>>();
  for (const auto& f : m.at("files")) {
    SpectralField field(t.M, true);
    std::ifstream bin(fs::path(dir) / f.get<std::string>(), std::ios::binary);
    auto& d = field.data();
    bin.read(reinterpret_cast<char*>(d.data()), static_cast<std::streamsize>(d.size() * sizeof(Complex)));
    if (!bin) throw std::runtime_error("truncated snapshot " + f.get<std::string>());
    t.fields.push_back(std::move(field));
  }
  if (t.fields.size() != t.times.size()) throw std::runtime_error("manifest times/files mismatch");
  return t;
}

}  // namespace nslab
