#include <doctest.h>

#include <stdexcept>

#include "prandtl/config.hpp"

using namespace prandtl;

TEST_SUITE("config") {

TEST_CASE("full file parses into the expected settings") {
  const std::string text = R"(# sample run
[run]
command = march
out = results
resolution = low

[initial-data]
kind = gaussian-concave
amplitude = 1.7
width = 1.1

[march]
x_end = 250   # stop early
scheme = crank-nicolson-frozen
n = 200
concavity = on

[diagnostics]
quantities = phi, dx_phi

[barrier]
eps = 0.04
stations = 1, 10, 100
)";
  const RunConfig cfg = parse_config_text(text, "sample");
  CHECK(cfg.command == "march");
  CHECK(cfg.out_dir == "results");
  CHECK(cfg.resolution == "low");
  CHECK(cfg.data_kind == "gaussian-concave");
  CHECK(cfg.amplitude == 1.7);
  CHECK(cfg.width == 1.1);
  CHECK(cfg.march.x_end == 250.0);
  CHECK(cfg.march.scheme == Scheme::CrankNicolsonFrozen);
  CHECK(cfg.march.n_cells == 200);  // explicit key beats the preset
  CHECK(cfg.march.dx0 == 5e-4);     // preset value retained
  CHECK(cfg.concavity_mode == "on");
  CHECK(cfg.barrier_eps == 0.04);
  REQUIRE(cfg.stations.size() == 3);
  CHECK(cfg.stations[2] == 100.0);
  REQUIRE(cfg.quantities.size() == 2);
  CHECK(cfg.quantities[1] == "dx_phi");
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\nbogus = 1\n", "f"),
                       doctest::Contains("f:2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("[what]\n", "f"),
                       doctest::Contains("f:1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_config_text("[march]\nx_end = fast\n", "f"),
      doctest::Contains("expected a number"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\ncommand = dance\n", "f"),
                       doctest::Contains("unknown command"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_config_text("[diagnostics]\nquantities = phi, vorticity\n", "f"),
      doctest::Contains("unknown quantity"), std::runtime_error);
}

TEST_CASE("resolution presets") {
  RunConfig cfg;
  apply_resolution(cfg, "high");
  CHECK(cfg.march.n_cells == 1536);
  CHECK(cfg.march.dx0 == 1.25e-4);
  CHECK_THROWS_AS(apply_resolution(cfg, "ultra"), std::runtime_error);
}

TEST_CASE("echo round trip") {
  RunConfig cfg;
  cfg.command = "fit";
  cfg.x0 = 3.0;
  const RunConfig back = parse_config_text(config_echo(cfg), "echo");
  CHECK(back.command == "fit");
  CHECK(back.x0 == 3.0);
  CHECK(back.march.n_cells == cfg.march.n_cells);
  CHECK(config_echo(back) == config_echo(cfg));
}

}  // TEST_SUITE
