#pragma once

#include <functional>
#include <string>
#include <vector>

#include "prandtl/blasius.hpp"

namespace prandtl {

// Inflow velocity u0(y) with the wall slope known analytically when possible.
struct InitialData {
  std::string name;
  std::function<double(double)> u;
  double slope0 = 0.0;  // u0'(0)
  bool concave = false;
  // Member of the self-similar family: the decay-ordering screen conditions
  // are informational for it (it solves the system exactly).
  bool exact_solution = false;
};

// u0(y) = f'(y / sqrt(x0)), the self-similar family member with offset x0.
InitialData blasius_shift_data(const BlasiusProfile& p, double x0);

// u0(y) = 1 - exp(-(y/width)^2 - amplitude*y/width). Concave iff
// amplitude >= sqrt(2); Gaussian approach rate 1/width^2.
InitialData gaussian_concave_data(double amplitude, double width);

// Two-column CSV "y,u"; held with a monotone cubic, constant past the table.
InitialData table_data(const std::string& csv_path);

struct AdmissibilityCondition {
  std::string name;
  bool pass = false;
  bool gating = true;
  std::string detail;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityCondition> conditions;
  double measured_c5 = 0.0;   // Gaussian approach rate of |u0 - 1|
  double measured_c7 = 0.0;   // Gaussian envelope rate of |u0''|
  double c1_reference = 0.0;  // profile tail constant the rates are compared to
  double wall_curvature = 0.0;
  bool concave = false;
  bool inflow_pass = false;  // u0(0) = 0, u0'(0) > 0, u0 > 0
  bool all_gating_pass = false;
};

AdmissibilityReport validate_initial_data(const InitialData& data,
                                          const BlasiusProfile& p);

}  // namespace prandtl
