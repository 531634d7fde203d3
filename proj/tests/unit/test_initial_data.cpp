#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fixtures.hpp"
#include "prandtl/initial_data.hpp"

using namespace prandtl;

namespace {

bool condition_pass(const AdmissibilityReport& r, const std::string& prefix) {
  for (const auto& c : r.conditions)
    if (c.name.rfind(prefix, 0) == 0) return c.pass;
  FAIL("condition not found: ", prefix);
  return false;
}

}  // namespace

TEST_SUITE("initial_data") {

TEST_CASE("reference datum passes the full screen") {
  const BlasiusProfile& p = default_profile();
  const AdmissibilityReport r = validate_initial_data(blasius_shift_data(p, 1.0), p);
  CHECK(r.inflow_pass);
  CHECK(r.concave);
  CHECK(r.all_gating_pass);
  CHECK(condition_pass(r, "approach rate"));
  // Gaussian approach rate of the family at offset x0 is 1/(4 x0).
  CHECK(r.measured_c5 == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("offset datum beyond the reference decays slower than the screen asks") {
  const BlasiusProfile& p = default_profile();
  const AdmissibilityReport r = validate_initial_data(blasius_shift_data(p, 2.0), p);
  CHECK(r.inflow_pass);
  CHECK(r.measured_c5 == doctest::Approx(0.125).epsilon(0.1));
  CHECK_FALSE(condition_pass(r, "approach rate"));
  // The family solves the system exactly, so the ordering is informational.
  CHECK(r.all_gating_pass);
}

TEST_CASE("gaussian concave family") {
  const BlasiusProfile& p = default_profile();
  const InitialData d = gaussian_concave_data(1.6, 1.2);
  CHECK(d.concave);
  CHECK(d.slope0 == doctest::Approx(1.6 / 1.2));
  const AdmissibilityReport r = validate_initial_data(d, p);
  CHECK(r.inflow_pass);
  CHECK(r.concave);
  CHECK(r.all_gating_pass);
  CHECK(r.measured_c5 == doctest::Approx(1.0 / 1.44).epsilon(0.05));
  CHECK(r.measured_c7 >= p.c1_fit);
}

TEST_CASE("too-weak shear breaks concavity and the screen notices") {
  const BlasiusProfile& p = default_profile();
  const InitialData d = gaussian_concave_data(1.0, 1.2);  // amplitude < sqrt(2)
  CHECK_FALSE(d.concave);
  const AdmissibilityReport r = validate_initial_data(d, p);
  CHECK_FALSE(r.concave);
}

TEST_CASE("exponential tails fail the Gaussian-decay screen") {
  const BlasiusProfile& p = default_profile();
  InitialData d;
  d.name = "tanh(2y)";
  d.u = [](double y) { return std::tanh(2.0 * y); };
  d.slope0 = 2.0;
  d.concave = true;
  const AdmissibilityReport r = validate_initial_data(d, p);
  CHECK(r.inflow_pass);
  CHECK(r.concave);  // -8 tanh sech^2 <= 0 on y >= 0
  CHECK_FALSE(condition_pass(r, "approach rate"));
  CHECK_FALSE(r.all_gating_pass);
}

TEST_CASE("tabulated data loads and screens") {
  const BlasiusProfile& p = default_profile();
  const std::string path = "table_data_test.csv";
  {
    // Full-precision rows: the curvature screen resolves 1e-4, which
    // coarse-precision tables genuinely cannot certify.
    std::ofstream out(path);
    out << "y,u\n";
    for (int i = 0; i <= 1500; ++i) {
      const double y = 0.01 * i;
      out << format_double(y) << ","
          << format_double(-std::expm1(-(y * y) / 1.44 - 1.5 * y)) << "\n";
    }
  }
  const InitialData d = table_data(path);
  CHECK(d.u(0.0) == 0.0);
  CHECK(d.u(20.0) == d.u(15.0));  // constant continuation past the table
  CHECK(d.slope0 == doctest::Approx(1.5).epsilon(1e-3));
  const AdmissibilityReport r = validate_initial_data(d, p);
  CHECK(r.inflow_pass);
  CHECK(r.concave);
  CHECK(r.measured_c5 == doctest::Approx(1.0 / 1.44).epsilon(0.1));
  std::remove(path.c_str());

  CHECK_THROWS_AS(table_data("no_such_file.csv"), std::runtime_error);
}

TEST_CASE("nonzero wall velocity fails the basic screen") {
  const BlasiusProfile& p = default_profile();
  InitialData d;
  d.name = "offset wall";
  d.u = [](double y) { return 0.1 + 0.9 * std::tanh(2.0 * y); };
  d.slope0 = 1.8;
  const AdmissibilityReport r = validate_initial_data(d, p);
  CHECK_FALSE(condition_pass(r, "inflow: u0(0) = 0"));
  CHECK_FALSE(r.inflow_pass);
}

}  // TEST_SUITE
