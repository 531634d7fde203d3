#include "prandtl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace prandtl {

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  std::vector<double> c(n), d(n), x(n);
  double pivot = diag[0];
  if (std::abs(pivot) < 1e-300)
    throw std::runtime_error("solve_tridiagonal: pivot underflow at row 0");
  c[0] = upper[0] / pivot;
  d[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (std::abs(pivot) < 1e-300)
      throw std::runtime_error("solve_tridiagonal: pivot underflow at row " +
                               std::to_string(i));
    c[i] = upper[i] / pivot;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw std::invalid_argument("MonotoneCubic: need >= 2 nodes");
  m_.assign(n, 0.0);
  std::vector<double> h(n - 1), s(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    if (h[i] <= 0.0)
      throw std::invalid_argument("MonotoneCubic: abscissae not increasing");
    s[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s[i - 1] * s[i] <= 0.0) {
      m_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
    }
  }
  auto endpoint = [](double h0, double h1, double s0, double s1) {
    double m = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (m * s0 <= 0.0) return 0.0;
    if (s0 * s1 < 0.0 && std::abs(m) > 3.0 * std::abs(s0)) return 3.0 * s0;
    return m;
  };
  if (n == 2) {
    m_[0] = m_[1] = s[0];
  } else {
    m_[0] = endpoint(h[0], h[1], s[0], s[1]);
    m_[n - 1] = endpoint(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
  }
}

std::size_t MonotoneCubic::locate(double x) const {
  if (x <= x_.front()) return 0;
  if (x >= x_[x_.size() - 2]) return x_.size() - 2;
  return static_cast<std::size_t>(
             std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) -
         1;
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t i = locate(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h * h10 * m_[i] + h01 * y_[i + 1] + h * h11 * m_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = locate(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
  return d00 * y_[i] + d10 * m_[i] + d01 * y_[i + 1] + d11 * m_[i + 1];
}

LinearFit least_squares(const std::vector<std::vector<double>>& columns,
                        std::span<const double> y) {
  const std::size_t k = columns.size();
  const std::size_t n = y.size();
  if (k == 0 || n < k) throw std::invalid_argument("least_squares: bad shape");
  for (const auto& c : columns)
    if (c.size() != n) throw std::invalid_argument("least_squares: ragged");

  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t i = 0; i < n; ++i) a[r][c] += columns[r][i] * columns[c][i];
    for (std::size_t i = 0; i < n; ++i) a[r][k] += columns[r][i] * y[i];
  }
  for (std::size_t p = 0; p < k; ++p) {
    std::size_t best = p;
    for (std::size_t r = p + 1; r < k; ++r)
      if (std::abs(a[r][p]) > std::abs(a[best][p])) best = r;
    std::swap(a[p], a[best]);
    if (std::abs(a[p][p]) < 1e-300)
      throw std::runtime_error("least_squares: singular normal equations");
    for (std::size_t r = p + 1; r < k; ++r) {
      const double f = a[r][p] / a[p][p];
      for (std::size_t c = p; c <= k; ++c) a[r][c] -= f * a[p][c];
    }
  }
  LinearFit fit;
  fit.coeff.assign(k, 0.0);
  for (std::size_t p = k; p-- > 0;) {
    double s = a[p][k];
    for (std::size_t c = p + 1; c < k; ++c) s -= a[p][c] * fit.coeff[c];
    fit.coeff[p] = s / a[p][p];
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t c = 0; c < k; ++c) pred += fit.coeff[c] * columns[c][i];
    ss += (y[i] - pred) * (y[i] - pred);
  }
  fit.rms = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  std::vector<double> ones(x.size(), 1.0);
  return least_squares({ones, std::vector<double>(x.begin(), x.end())}, y);
}

double simpson_uniform(std::span<const double> y, double dx) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  std::size_t m = n - 1;  // interval count
  double total = 0.0;
  std::size_t start = 0;
  if (m % 2 == 1) {
    if (m >= 3) {
      total += dx * 3.0 / 8.0 * (y[0] + 3 * y[1] + 3 * y[2] + y[3]);
      start = 3;
    } else {
      return 0.5 * dx * (y[0] + y[1]);
    }
  }
  for (std::size_t i = start; i + 2 <= n - 1; i += 2)
    total += dx / 3.0 * (y[i] + 4 * y[i + 1] + y[i + 2]);
  return total;
}

std::vector<double> cumulative_trapezoid(std::span<const double> x,
                                         std::span<const double> y) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("fnv1a64_file: cannot open " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return fnv1a64(buf);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace prandtl
