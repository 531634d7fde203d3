#pragma once

#include <string>
#include <vector>

#include "prandtl/march.hpp"

namespace prandtl {

struct RunConfig {
  std::string command = "all";  // blasius|march|verify|fit|barrier|all
  std::string out_dir = "out";
  std::string resolution = "default";  // low|default|high

  std::string data_kind = "blasius-shift";  // blasius-shift|gaussian-concave|table
  double x0 = 2.0;
  double amplitude = 1.6;
  double width = 1.2;
  std::string table_path;

  double zeta_max = 12.0;
  double blasius_tol = 1e-10;

  MarchConfig march;
  std::string concavity_mode = "auto";  // auto|on|off

  double fit_x_lo = 10.0;
  bool with_log = false;
  // Empty = the full panel {phi, dx_phi, dpsi_phi, d2psi_phi, dpsix_w, d2x_w}.
  std::vector<std::string> quantities;

  double barrier_eps = 0.05;
  std::vector<double> stations = {1.0, 10.0, 100.0, 1000.0, 10000.0};
};

// low/default/high presets for n cells and dx0; explicit march keys in the
// file still win.
void apply_resolution(RunConfig& cfg, const std::string& resolution);

// Line-oriented `key = value` with [sections]; '#' comments. Parse errors
// carry the offending line number.
RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

std::string config_echo(const RunConfig& cfg);

}  // namespace prandtl
