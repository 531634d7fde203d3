#include "prandtl/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace prandtl {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line,
                       const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

double to_double(const std::string& origin, std::size_t line,
                 const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    fail(origin, line, "expected a number, got '" + v + "'");
  return out;
}

std::size_t to_count(const std::string& origin, std::size_t line,
                     const std::string& v) {
  const double d = to_double(origin, line, v);
  if (d < 1.0 || d != static_cast<double>(static_cast<std::size_t>(d)))
    fail(origin, line, "expected a positive integer, got '" + v + "'");
  return static_cast<std::size_t>(d);
}

bool to_bool(const std::string& origin, std::size_t line,
             const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  fail(origin, line, "expected a boolean, got '" + v + "'");
}

}  // namespace

void apply_resolution(RunConfig& cfg, const std::string& resolution) {
  if (resolution == "low") {
    cfg.march.n_cells = 384;
    cfg.march.dx0 = 5e-4;
  } else if (resolution == "default") {
    cfg.march.n_cells = 768;
    cfg.march.dx0 = 2.5e-4;
  } else if (resolution == "high") {
    cfg.march.n_cells = 1536;
    cfg.march.dx0 = 1.25e-4;
  } else {
    throw std::runtime_error("unknown resolution '" + resolution + "'");
  }
  cfg.resolution = resolution;
}

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  RunConfig cfg;
  std::string section = "run";
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;

  // First pass to honor a resolution preset before explicit march keys.
  {
    std::istringstream scan(text);
    std::string l;
    while (std::getline(scan, l)) {
      const auto hash = l.find('#');
      if (hash != std::string::npos) l = l.substr(0, hash);
      l = trim(l);
      if (l.rfind("resolution", 0) == 0) {
        const auto eq = l.find('=');
        if (eq != std::string::npos) apply_resolution(cfg, trim(l.substr(eq + 1)));
      }
    }
  }

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "initial-data" && section != "blasius" &&
          section != "march" && section != "diagnostics" && section != "barrier")
        fail(origin, lineno, "unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(origin, lineno, "empty key or value");

    if (section == "run") {
      if (key == "command") {
        if (value != "blasius" && value != "march" && value != "verify" &&
            value != "fit" && value != "barrier" && value != "all")
          fail(origin, lineno, "unknown command '" + value + "'");
        cfg.command = value;
      } else if (key == "out") {
        cfg.out_dir = value;
      } else if (key == "resolution") {
        // applied in the first pass
      } else {
        fail(origin, lineno, "unknown key '" + key + "' in [run]");
      }
    } else if (section == "initial-data") {
      if (key == "kind") {
        if (value != "blasius-shift" && value != "gaussian-concave" &&
            value != "table")
          fail(origin, lineno, "unknown initial data kind '" + value + "'");
        cfg.data_kind = value;
      } else if (key == "x0") {
        cfg.x0 = to_double(origin, lineno, value);
      } else if (key == "amplitude") {
        cfg.amplitude = to_double(origin, lineno, value);
      } else if (key == "width") {
        cfg.width = to_double(origin, lineno, value);
      } else if (key == "table") {
        cfg.table_path = value;
      } else {
        fail(origin, lineno, "unknown key '" + key + "' in [initial-data]");
      }
    } else if (section == "blasius") {
      if (key == "zeta_max")
        cfg.zeta_max = to_double(origin, lineno, value);
      else if (key == "tol")
        cfg.blasius_tol = to_double(origin, lineno, value);
      else
        fail(origin, lineno, "unknown key '" + key + "' in [blasius]");
    } else if (section == "march") {
      if (key == "x_end")
        cfg.march.x_end = to_double(origin, lineno, value);
      else if (key == "dx0")
        cfg.march.dx0 = to_double(origin, lineno, value);
      else if (key == "step_growth")
        cfg.march.step_growth = to_double(origin, lineno, value);
      else if (key == "n")
        cfg.march.n_cells = to_count(origin, lineno, value);
      else if (key == "grading")
        cfg.march.grading = to_double(origin, lineno, value);
      else if (key == "psi_max_factor")
        cfg.march.psi_max_factor = to_double(origin, lineno, value);
      else if (key == "psi_max")
        cfg.march.psi_max = to_double(origin, lineno, value);
      else if (key == "w_floor_coeff")
        cfg.march.w_floor_coeff = to_double(origin, lineno, value);
      else if (key == "picard_iters")
        cfg.march.picard_iters = static_cast<int>(to_count(origin, lineno, value));
      else if (key == "scheme") {
        if (value == "implicit-frozen")
          cfg.march.scheme = Scheme::ImplicitFrozen;
        else if (value == "crank-nicolson-frozen")
          cfg.march.scheme = Scheme::CrankNicolsonFrozen;
        else
          fail(origin, lineno, "unknown scheme '" + value + "'");
      } else if (key == "checkpoint_ratio")
        cfg.march.checkpoint_ratio = to_double(origin, lineno, value);
      else if (key == "far_field_tol")
        cfg.march.far_field_tol = to_double(origin, lineno, value);
      else if (key == "comparison_drift")
        cfg.march.comparison_drift = to_double(origin, lineno, value);
      else if (key == "concavity") {
        if (value != "auto" && value != "on" && value != "off")
          fail(origin, lineno, "concavity must be auto|on|off");
        cfg.concavity_mode = value;
      } else
        fail(origin, lineno, "unknown key '" + key + "' in [march]");
    } else if (section == "diagnostics") {
      if (key == "fit_x_lo")
        cfg.fit_x_lo = to_double(origin, lineno, value);
      else if (key == "with_log")
        cfg.with_log = to_bool(origin, lineno, value);
      else if (key == "quantities") {
        cfg.quantities.clear();
        std::istringstream list(value);
        std::string item;
        while (std::getline(list, item, ',')) {
          item = trim(item);
          if (item != "phi" && item != "dx_phi" && item != "dpsi_phi" &&
              item != "d2psi_phi" && item != "dpsix_w" && item != "d2x_w")
            fail(origin, lineno, "unknown quantity '" + item + "'");
          cfg.quantities.push_back(item);
        }
        if (cfg.quantities.empty()) fail(origin, lineno, "empty quantity list");
      } else
        fail(origin, lineno, "unknown key '" + key + "' in [diagnostics]");
    } else if (section == "barrier") {
      if (key == "eps")
        cfg.barrier_eps = to_double(origin, lineno, value);
      else if (key == "stations") {
        cfg.stations.clear();
        std::istringstream list(value);
        std::string item;
        while (std::getline(list, item, ','))
          cfg.stations.push_back(to_double(origin, lineno, trim(item)));
        if (cfg.stations.empty()) fail(origin, lineno, "empty station list");
      } else
        fail(origin, lineno, "unknown key '" + key + "' in [barrier]");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string config_echo(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[run]\ncommand = " << cfg.command << "\nout = " << cfg.out_dir
      << "\nresolution = " << cfg.resolution << "\n[initial-data]\nkind = "
      << cfg.data_kind << "\nx0 = " << format_double(cfg.x0)
      << "\namplitude = " << format_double(cfg.amplitude)
      << "\nwidth = " << format_double(cfg.width);
  if (!cfg.table_path.empty()) out << "\ntable = " << cfg.table_path;
  out << "\n[blasius]\nzeta_max = " << format_double(cfg.zeta_max)
      << "\ntol = " << format_double(cfg.blasius_tol)
      << "\n[march]\nx_end = " << format_double(cfg.march.x_end)
      << "\ndx0 = " << format_double(cfg.march.dx0)
      << "\nn = " << cfg.march.n_cells
      << "\ngrading = " << format_double(cfg.march.grading)
      << "\npsi_max_factor = " << format_double(cfg.march.psi_max_factor)
      << "\nw_floor_coeff = " << format_double(cfg.march.w_floor_coeff)
      << "\npicard_iters = " << cfg.march.picard_iters << "\nscheme = "
      << (cfg.march.scheme == Scheme::ImplicitFrozen ? "implicit-frozen"
                                                     : "crank-nicolson-frozen")
      << "\ncheckpoint_ratio = " << format_double(cfg.march.checkpoint_ratio)
      << "\nconcavity = " << cfg.concavity_mode
      << "\n[diagnostics]\nfit_x_lo = " << format_double(cfg.fit_x_lo)
      << "\nwith_log = " << (cfg.with_log ? "true" : "false");
  if (!cfg.quantities.empty()) {
    out << "\nquantities = ";
    for (std::size_t i = 0; i < cfg.quantities.size(); ++i)
      out << (i ? "," : "") << cfg.quantities[i];
  }
  out
      << "\n[barrier]\neps = " << format_double(cfg.barrier_eps)
      << "\nstations = ";
  for (std::size_t i = 0; i < cfg.stations.size(); ++i)
    out << (i ? "," : "") << format_double(cfg.stations[i]);
  out << "\n";
  return out.str();
}

}  // namespace prandtl
