#pragma once

#include "prandtl/blasius.hpp"

// Shared across test files; solving once keeps the suite fast.
inline const prandtl::BlasiusProfile& default_profile() {
  static const prandtl::BlasiusProfile p = prandtl::solve_blasius(12.0, 1e-10);
  return p;
}
