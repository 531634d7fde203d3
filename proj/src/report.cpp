#include "prandtl/report.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace prandtl {

RunReport::RunReport(std::string out_dir) : dir_(std::move(out_dir)) {
  std::filesystem::create_directories(dir_);
  summary_ = nlohmann::ordered_json::object();
}

std::string RunReport::path(const std::string& relative) const {
  return (std::filesystem::path(dir_) / relative).string();
}

void RunReport::note_output(const std::string& relative) {
  outputs_.push_back(relative);
}

void RunReport::audit(const std::string& name, bool pass,
                      const std::string& detail) {
  audits_.push_back({name, pass, detail});
}

bool RunReport::all_audits_pass() const {
  for (const auto& a : audits_)
    if (!a.pass) return false;
  return true;
}

void RunReport::write_audit_log(const std::string& relative) {
  std::ofstream out(path(relative));
  if (!out) throw std::runtime_error("cannot write " + path(relative));
  for (const auto& a : audits_)
    out << (a.pass ? "PASS " : "FAIL ") << a.name
        << (a.detail.empty() ? "" : " | " + a.detail) << '\n';
  note_output(relative);
}

void RunReport::write_summary(const std::string& relative) {
  auto audits = nlohmann::ordered_json::array();
  for (const auto& a : audits_)
    audits.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  summary_["audits"] = audits;
  summary_["pass"] = all_audits_pass();

  auto files = nlohmann::ordered_json::array();
  for (const auto& rel : outputs_) {
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(path(rel))));
    files.push_back({{"path", rel}, {"fnv1a64", hex}});
  }
  summary_["outputs"] = files;

  std::ofstream out(path(relative));
  if (!out) throw std::runtime_error("cannot write " + path(relative));
  out << summary_.dump(2) << '\n';
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << header << '\n';
  if (columns.empty()) return;
  const std::size_t rows = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      out << (c ? "," : "") << format_double(columns[c][r]);
    out << '\n';
  }
}

}  // namespace prandtl
