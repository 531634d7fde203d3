#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "prandtl/numerics.hpp"

namespace prandtl {

// Collects the files a run produced and the audit-gate outcomes; feeds
// summary.json and the process exit status.
class RunReport {
public:
  explicit RunReport(std::string out_dir);

  const std::string& dir() const { return dir_; }
  std::string path(const std::string& relative) const;

  // Registers a produced file; hashed lazily when the summary is written.
  void note_output(const std::string& relative);

  void audit(const std::string& name, bool pass, const std::string& detail);
  bool all_audits_pass() const;

  nlohmann::ordered_json& summary() { return summary_; }

  void write_audit_log(const std::string& relative = "audit.log");
  void write_summary(const std::string& relative = "summary.json");

private:
  std::string dir_;
  std::vector<std::string> outputs_;
  struct AuditLine {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<AuditLine> audits_;
  nlohmann::ordered_json summary_;
};

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& columns);

}  // namespace prandtl
