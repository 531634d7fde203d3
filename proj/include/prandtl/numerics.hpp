#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace prandtl {

// Thomas algorithm for a tridiagonal system. lower[0] and upper[n-1] are
// ignored. Throws if a pivot falls below 1e-300.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

// Monotonicity-preserving piecewise cubic (Fritsch-Carlson slopes).
// Monotone data stays monotone between nodes; never overshoots.
class MonotoneCubic {
public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

private:
  std::size_t locate(double x) const;
  std::vector<double> x_, y_, m_;
};

struct LinearFit {
  std::vector<double> coeff;
  double rms = 0.0;
};

// Least squares for y ~ sum_k coeff[k] * basis[k], basis stored column-wise.
// Small column counts only (normal equations).
LinearFit least_squares(const std::vector<std::vector<double>>& columns,
                        std::span<const double> y);

// Straight-line fit y = a + b*x; returns {a, b, rms}.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Composite Simpson on a uniform grid (3/8 block absorbs an odd interval).
double simpson_uniform(std::span<const double> y, double dx);

// Cumulative integral of samples on a (possibly nonuniform) grid, trapezoid.
std::vector<double> cumulative_trapezoid(std::span<const double> x,
                                         std::span<const double> y);

double median(std::vector<double> v);

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64_file(const std::string& path);

std::string format_double(double v);

}  // namespace prandtl
