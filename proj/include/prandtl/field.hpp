#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace prandtl {

// Graded one-dimensional grid in the stream-function variable,
// psi_j = psi_max * (j/N)^gamma. Denser near the wall where w ~ psi.
struct PsiGrid {
  std::vector<double> nodes;
  double psi_max = 0.0;
  double grading = 2.0;

  static PsiGrid graded(double psi_max, std::size_t n_cells, double gamma);

  std::size_t n() const { return nodes.size(); }
  double spacing(std::size_t j) const { return nodes[j + 1] - nodes[j]; }
};

// w = u^2 sampled on a PsiGrid at one station x.
struct WField {
  double x = 0.0;
  std::shared_ptr<const PsiGrid> grid;
  std::vector<double> values;

  // Scheme metadata, filled by the marcher.
  double dx_last = 0.0;
  double residual_norm = 0.0;   // sup |w_new - w_old| / dx over the last step
  std::vector<double> dxw;      // (w_new - w_old)/dx of the accepting step

  double wall_slope() const { return values[1] / grid->nodes[1]; }
};

// Three-point second-difference weights on the nonuniform grid:
// D2 v_j = cl*v_{j-1} - cc*v_j + cr*v_{j+1}.
struct D2Weights {
  double cl, cc, cr;
};

inline D2Weights d2_weights(const PsiGrid& g, std::size_t j) {
  const double dm = g.nodes[j] - g.nodes[j - 1];
  const double dp = g.nodes[j + 1] - g.nodes[j];
  return {2.0 / (dm * (dm + dp)), 2.0 / (dm * dp), 2.0 / (dp * (dm + dp))};
}

inline double second_difference(const PsiGrid& g, const std::vector<double>& v,
                                std::size_t j) {
  const D2Weights w = d2_weights(g, j);
  return w.cl * v[j - 1] - w.cc * v[j] + w.cr * v[j + 1];
}

// Nonuniform centered first derivative (second order).
inline double first_difference(const PsiGrid& g, const std::vector<double>& v,
                               std::size_t j) {
  const double dm = g.nodes[j] - g.nodes[j - 1];
  const double dp = g.nodes[j + 1] - g.nodes[j];
  return (dm * dm * v[j + 1] - dp * dp * v[j - 1] +
          (dp * dp - dm * dm) * v[j]) /
         (dm * dp * (dm + dp));
}

}  // namespace prandtl
