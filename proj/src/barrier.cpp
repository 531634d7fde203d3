#include "prandtl/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace prandtl {

std::string barrier_kind_name(BarrierKind k) {
  switch (k) {
    case BarrierKind::ExpTail: return "exp-tail";
    case BarrierKind::Algebraic: return "algebraic";
    case BarrierKind::Sharp: return "sharp";
    case BarrierKind::SmallH: return "small-h";
    case BarrierKind::DxPhi: return "dxphi";
    case BarrierKind::D2xwCos: return "d2xw-cos";
    case BarrierKind::D2xwAlg: return "d2xw-alg";
  }
  return "?";
}

BarrierKind barrier_kind_from(const std::string& name) {
  for (BarrierKind k :
       {BarrierKind::ExpTail, BarrierKind::Algebraic, BarrierKind::Sharp,
        BarrierKind::SmallH, BarrierKind::DxPhi, BarrierKind::D2xwCos,
        BarrierKind::D2xwAlg})
    if (barrier_kind_name(k) == name) return k;
  throw std::invalid_argument("unknown barrier kind: " + name);
}

namespace {

double require(const std::map<std::string, double>& c, const std::string& key,
               BarrierKind kind) {
  auto it = c.find(key);
  if (it == c.end())
    throw std::invalid_argument("build_barrier(" + barrier_kind_name(kind) +
                                "): missing constant '" + key + "'");
  return it->second;
}

void reject_unless(bool ok, BarrierKind kind, const std::string& condition) {
  if (!ok)
    throw std::invalid_argument("build_barrier(" + barrier_kind_name(kind) +
                                "): side condition violated: " + condition);
}

// Value and derivatives of the piece base at (x, psi); the c (x+1)^p wrapper
// is applied by the caller.
BarrierDerivs base_derivs(const BarrierPiece& piece, const BlasiusProfile& prof,
                          double x, double psi) {
  const double xp1 = x + 1.0;
  const double root = std::sqrt(xp1);
  const double h = psi / root;
  BarrierDerivs d{0.0, 0.0, 0.0, 0.0};
  switch (piece.formula) {
    case PieceFormula::Zero:
      return d;
    case PieceFormula::PowerPsi: {
      const double q = piece.q;
      d.g = std::pow(psi, q);
      d.gx = 0.0;
      d.gpsi = q * std::pow(psi, q - 1.0);
      d.gpp = q * (q - 1.0) * std::pow(psi, q - 2.0);
      return d;
    }
    case PieceFormula::GaussH: {
      const double e = piece.eps;
      const double g = std::exp(-e * psi * psi / xp1);
      d.g = g;
      d.gx = g * e * psi * psi / (xp1 * xp1);
      d.gpsi = -2.0 * e * psi / xp1 * g;
      d.gpp = g * (4.0 * e * e * psi * psi / (xp1 * xp1) - 2.0 * e / xp1);
      return d;
    }
    case PieceFormula::CosBand: {
      const double arg = h - piece.h1;
      d.g = std::cos(arg);
      d.gx = std::sin(arg) * h / (2.0 * xp1);
      d.gpsi = -std::sin(arg) / root;
      d.gpp = -std::cos(arg) / xp1;
      return d;
    }
    default:
      break;
  }
  // Profile-based pieces.
  const double zeta = invert_f(prof, h);
  const BlasiusValues v = eval_blasius(prof, zeta);
  const double f4 = -0.5 * (v.fp * v.fpp + v.f * v.fppp);
  switch (piece.formula) {
    case PieceFormula::DpsiWbar: {
      d.g = 2.0 * v.fpp / root;
      d.gx = -(v.fpp + h * v.fppp / v.fp) / (xp1 * root);
      d.gpsi = 2.0 * v.fppp / (xp1 * v.fp);
      d.gpp = 2.0 * (f4 * v.fp - v.fppp * v.fpp) /
              (xp1 * root * v.fp * v.fp * v.fp);
      return d;
    }
    case PieceFormula::Wbar: {
      d.g = v.fp * v.fp;
      d.gx = -h * v.fpp / xp1;
      d.gpsi = 2.0 * v.fpp / root;
      d.gpp = 2.0 * v.fppp / (xp1 * v.fp);
      return d;
    }
    case PieceFormula::NegDxWbar: {
      const double P = v.fp * v.fpp + v.f * v.fppp;
      const double Pp = v.fpp * v.fpp + 2.0 * v.fp * v.fppp + v.f * f4;
      d.g = v.f * v.fpp / xp1;
      d.gx = -(v.f * v.fpp + 0.5 * h * P / v.fp) / (xp1 * xp1);
      d.gpsi = P / (xp1 * root * v.fp);
      d.gpp = (Pp * v.fp - P * v.fpp) / (xp1 * xp1 * v.fp * v.fp * v.fp);
      return d;
    }
    default:
      throw std::logic_error("base_derivs: unhandled formula");
  }
}

const BarrierPiece& piece_at(const BarrierSpec& spec, double h) {
  for (const BarrierPiece& piece : spec.pieces)
    if (h >= piece.h_lo && h < piece.h_hi) return piece;
  return spec.pieces.back();
}

BarrierDerivs piece_derivs(const BarrierSpec& spec, const BarrierPiece& piece,
                           const BlasiusProfile& prof, double x, double psi) {
  const double xp1 = x + 1.0;
  BarrierDerivs b = base_derivs(piece, prof, x, psi);
  const double wrap = piece.c * std::pow(xp1, piece.p);
  BarrierDerivs out;
  out.g = wrap * b.g;
  out.gx = wrap * (b.gx + piece.p * b.g / xp1);
  out.gpsi = wrap * b.gpsi;
  out.gpp = wrap * b.gpp;
  if (spec.xfactor_k > 0.0) {
    const double m = std::exp(-spec.xfactor_k * std::pow(xp1, -spec.xfactor_kappa));
    const double mx = m * spec.xfactor_k * spec.xfactor_kappa *
                      std::pow(xp1, -spec.xfactor_kappa - 1.0);
    out.gx = m * out.gx + mx * out.g;
    out.g *= m;
    out.gpsi *= m;
    out.gpp *= m;
  }
  return out;
}

}  // namespace

BarrierDerivs eval_barrier_derivs(const BarrierSpec& spec,
                                  const BlasiusProfile& p, double x,
                                  double psi) {
  if (x < 0.0 || psi < 0.0)
    throw std::invalid_argument("eval_barrier: x, psi >= 0");
  const double h = psi / std::sqrt(x + 1.0);
  return piece_derivs(spec, piece_at(spec, h), p, x, psi);
}

double eval_barrier(const BarrierSpec& spec, const BlasiusProfile& p, double x,
                    double psi) {
  return eval_barrier_derivs(spec, p, x, psi).g;
}

BarrierSpec build_barrier(BarrierKind kind, const BlasiusProfile& p,
                          const std::map<std::string, double>& constants) {
  BarrierSpec spec;
  spec.kind = kind;
  spec.constants = constants;
  switch (kind) {
    case BarrierKind::ExpTail: {
      const double eps = require(constants, "eps", kind);
      reject_unless(eps > 0.0, kind, "eps > 0");
      BarrierPiece piece;
      piece.formula = PieceFormula::GaussH;
      piece.eps = eps;
      spec.pieces = {piece};
      break;
    }
    case BarrierKind::Algebraic: {
      const double lambda = require(constants, "lambda", kind);
      const double M = require(constants, "M", kind);
      const double h0 = require(constants, "h0", kind);
      reject_unless(lambda > 0.0 && lambda < 1.0, kind, "lambda in (0, 1)");
      reject_unless(M >= 1.0, kind, "M >= 1");
      reject_unless(h0 > 1.0 / M, kind, "h0 > 1/M");
      BarrierPiece near, mid, far;
      near.h_lo = 0.0;
      near.h_hi = 1.0 / M;
      near.formula = PieceFormula::PowerPsi;
      near.c = std::sqrt(M);
      near.p = -lambda - 0.25;
      near.q = 0.5;
      mid.h_lo = 1.0 / M;
      mid.h_hi = h0;
      mid.formula = PieceFormula::PowerPsi;
      mid.c = 1.0;
      mid.p = -lambda;
      mid.q = 0.0;
      far.h_lo = h0;
      far.formula = PieceFormula::PowerPsi;
      far.c = std::pow(h0, 2.0 + 2.0 * lambda);
      far.p = 1.0;
      far.q = -(2.0 + 2.0 * lambda);
      spec.pieces = {near, mid, far};
      spec.ridges = {1.0 / M, h0};
      break;
    }
    case BarrierKind::Sharp: {
      const double alpha = require(constants, "alpha", kind);
      const double N = require(constants, "N", kind);
      const double B = require(constants, "B", kind);
      const double lambda = require(constants, "lambda", kind);
      reject_unless(alpha > 0.0 && alpha < 1.0, kind, "alpha in (0, 1)");
      reject_unless(N > 1.0, kind, "N > 1");
      reject_unless(lambda > 0.0 && lambda < 1.0, kind, "lambda in (0, 1)");
      const double zeta0 = invert_f(p, 1.0 / N);
      const double fpp0 = eval_blasius(p, zeta0).fpp;
      reject_unless(fpp0 > 0.0, kind, "f''(zeta_0) > 0");
      BarrierPiece near, far;
      near.h_lo = 0.0;
      near.h_hi = 1.0 / N;
      near.formula = PieceFormula::PowerPsi;
      near.c = std::pow(N, 1.0 - alpha);
      near.p = -0.5 - 0.5 * (1.0 - alpha);
      near.q = 1.0 - alpha;
      far.h_lo = 1.0 / N;
      far.formula = PieceFormula::DpsiWbar;
      far.c = 1.0 / (2.0 * fpp0);
      spec.pieces = {near, far};
      spec.ridges = {1.0 / N};
      spec.xfactor_k = B;
      spec.xfactor_kappa = 0.5 * lambda;
      spec.constants["zeta0"] = zeta0;
      spec.constants["b0_ridge"] = 2.0 * fpp0;
      break;
    }
    case BarrierKind::SmallH: {
      const double alpha = require(constants, "alpha", kind);
      const double M = require(constants, "M", kind);
      reject_unless(alpha > 0.0 && alpha < 1.0, kind, "alpha in (0, 1)");
      reject_unless(M > 1.0, kind, "M > 1");
      const double zeta0 = invert_f(p, 1.0 / M);
      const double b1 = std::pow(eval_blasius(p, zeta0).fp, 2);
      reject_unless(b1 > 0.0, kind, "f'(zeta_0)^2 > 0");
      BarrierPiece near, far;
      near.h_lo = 0.0;
      near.h_hi = 1.0 / M;
      near.formula = PieceFormula::Wbar;
      near.c = 1.0 / b1;
      near.p = -alpha;
      far.h_lo = 1.0 / M;
      far.formula = PieceFormula::PowerPsi;
      far.c = 1.0;
      far.p = -alpha;
      far.q = 0.0;
      spec.pieces = {near, far};
      spec.ridges = {1.0 / M};
      spec.constants["zeta0"] = zeta0;
      spec.constants["b1"] = b1;
      break;
    }
    case BarrierKind::DxPhi: {
      const double K = require(constants, "K", kind);
      const double eps = require(constants, "eps", kind);
      reject_unless(K >= 0.0, kind, "K >= 0");
      reject_unless(eps > 0.0 && eps < 1.0, kind, "eps in (0, 1)");
      BarrierPiece piece;
      piece.formula = PieceFormula::NegDxWbar;
      spec.pieces = {piece};
      spec.xfactor_k = K;
      spec.xfactor_kappa = eps;
      break;
    }
    case BarrierKind::D2xwCos: {
      const double h1 = require(constants, "h1", kind);
      const double eps = require(constants, "eps", kind);
      reject_unless(eps > 0.0, kind, "eps > 0");
      reject_unless(h1 > 1.5 * M_PI, kind, "h1 > 3 pi / 2");
      reject_unless(0.5 * eps * h1 * h1 > 3.0, kind, "eps h1^2 / 2 > 3");
      BarrierPiece zero, band, tail;
      zero.h_lo = 0.0;
      zero.h_hi = h1 - 1.5 * M_PI;
      zero.formula = PieceFormula::Zero;
      band.h_lo = h1 - 1.5 * M_PI;
      band.h_hi = h1;
      band.formula = PieceFormula::CosBand;
      band.c = 1.0;
      band.p = -2.0;
      band.h1 = h1;
      tail.h_lo = h1;
      tail.formula = PieceFormula::GaussH;
      tail.c = std::exp(h1 * h1 * eps);
      tail.p = -2.0;
      tail.eps = eps;
      spec.pieces = {zero, band, tail};
      spec.ridges = {h1 - 1.5 * M_PI, h1};
      spec.add_dpsi_w_term = true;
      break;
    }
    case BarrierKind::D2xwAlg: {
      const double alpha = require(constants, "alpha", kind);
      const double h0 = require(constants, "h0", kind);
      const double h1 = require(constants, "h1", kind);
      const double eps = require(constants, "eps", kind);
      reject_unless(alpha > 0.0 && alpha < 0.125, kind, "alpha in (0, 1/8)");
      reject_unless(h0 > 0.0 && h0 < 1.0, kind, "h0 in (0, 1)");
      reject_unless(h1 > h0, kind, "h1 > h0");
      reject_unless(eps > 0.0, kind, "eps > 0");
      reject_unless(0.5 * eps * h1 * h1 > 1.0, kind, "eps h1^2 / 2 > 1");
      BarrierPiece near, mid, tail;
      near.h_lo = 0.0;
      near.h_hi = h0;
      near.formula = PieceFormula::PowerPsi;
      near.c = 1.0;
      near.p = -0.5 - 0.5 * (1.0 - alpha);
      near.q = 1.0 - alpha;
      mid.h_lo = h0;
      mid.h_hi = h1;
      mid.formula = PieceFormula::PowerPsi;
      mid.c = std::pow(h0, 1.0 - alpha);
      mid.p = -0.5;
      mid.q = 0.0;
      tail.h_lo = h1;
      tail.formula = PieceFormula::GaussH;
      tail.c = std::pow(h0, 1.0 - alpha) * std::exp(h1 * h1 * eps);
      tail.p = -0.5;
      tail.eps = eps;
      spec.pieces = {near, mid, tail};
      spec.ridges = {h0, h1};
      break;
    }
  }
  // Pieces must tile [0, inf) and match at the seams.
  for (std::size_t i = 0; i + 1 < spec.pieces.size(); ++i)
    if (spec.pieces[i].h_hi != spec.pieces[i + 1].h_lo)
      throw std::logic_error("build_barrier: pieces do not tile");
  for (double gap : continuity_gaps(spec, p, 1.0))
    if (gap > 1e-10)
      throw std::logic_error("build_barrier(" + barrier_kind_name(kind) +
                             "): continuity gap " + format_double(gap));
  return spec;
}

std::vector<double> continuity_gaps(const BarrierSpec& spec,
                                    const BlasiusProfile& p, double x) {
  std::vector<double> gaps;
  const double root = std::sqrt(x + 1.0);
  for (std::size_t i = 0; i + 1 < spec.pieces.size(); ++i) {
    const double h = spec.pieces[i].h_hi;
    const double psi = h * root;
    const double left = piece_derivs(spec, spec.pieces[i], p, x, psi).g;
    const double right = piece_derivs(spec, spec.pieces[i + 1], p, x, psi).g;
    // A seam may sit at a zero of both pieces (the cos band enters at zero);
    // normalize by the piece amplitudes, not just the seam values.
    const double scale = std::max(
        {std::abs(left), std::abs(right),
         std::abs(spec.pieces[i].c) * std::pow(x + 1.0, spec.pieces[i].p),
         std::abs(spec.pieces[i + 1].c) *
             std::pow(x + 1.0, spec.pieces[i + 1].p),
         1e-30});
    gaps.push_back(std::abs(left - right) / scale);
  }
  return gaps;
}

ResidualReport residual_check(const BarrierSpec& spec, const BlasiusProfile& p,
                              const CoefficientSource& coeff, double x,
                              double h_lo, double h_hi,
                              std::size_t n_samples) {
  if (!(h_hi > h_lo) || n_samples < 8)
    throw std::invalid_argument("residual_check: bad region");
  for (double r : spec.ridges)
    if (r > h_lo && r < h_hi)
      throw std::invalid_argument(
          "residual_check: region contains a ridge at h = " +
          format_double(r));
  const double root = std::sqrt(x + 1.0);
  const double margin = (h_hi - h_lo) / (2.0 * static_cast<double>(n_samples));

  ResidualReport rep;
  rep.x = x;
  rep.samples = n_samples;
  rep.min_residual = 1e300;

  for (std::size_t i = 0; i < n_samples; ++i) {
    const double h = h_lo + margin +
                     (h_hi - h_lo - 2.0 * margin) * static_cast<double>(i) /
                         static_cast<double>(n_samples - 1);
    const double psi = h * root;
    const BarrierDerivs g = eval_barrier_derivs(spec, p, x, psi);
    const WbarValues wb = wbar(p, x, psi);

    auto residual_for = [&](double w_value) {
      const double sw = std::sqrt(std::max(w_value, 0.0));
      const double swb = std::sqrt(wb.w);
      const double A = -wb.dx / (swb * (swb + sw));
      return g.gx - sw * g.gpp + A * g.g;
    };

    double res;
    if (coeff.field) {
      const WField& w = *coeff.field;
      auto it = std::lower_bound(w.grid->nodes.begin(), w.grid->nodes.end(), psi);
      double wv;
      if (it == w.grid->nodes.begin())
        wv = 0.0;
      else if (it == w.grid->nodes.end())
        wv = w.values.back();
      else {
        const std::size_t j = static_cast<std::size_t>(it - w.grid->nodes.begin());
        const double t =
            (psi - w.grid->nodes[j - 1]) / (w.grid->nodes[j] - w.grid->nodes[j - 1]);
        wv = w.values[j - 1] + t * (w.values[j] - w.values[j - 1]);
      }
      res = residual_for(wv);
    } else {
      res = 1e300;
      for (int m = 0; m <= 4; ++m) {
        const double r = coeff.bracket_lo +
                         (coeff.bracket_hi - coeff.bracket_lo) * m / 4.0;
        res = std::min(res, residual_for(r * r * wb.w));
      }
    }
    if (res < rep.min_residual) {
      rep.min_residual = res;
      rep.argmin_h = h;
    }
  }
  return rep;
}

std::vector<RidgeReport> ridge_verify(const BarrierSpec& spec,
                                      const BlasiusProfile& p, double x) {
  std::vector<RidgeReport> out;
  const double root = std::sqrt(x + 1.0);
  for (double h : spec.ridges) {
    const double psi = h * root;
    const BarrierPiece* left = nullptr;
    const BarrierPiece* right = nullptr;
    for (const BarrierPiece& piece : spec.pieces) {
      if (piece.h_hi == h) left = &piece;
      if (piece.h_lo == h) right = &piece;
    }
    if (!left || !right)
      throw std::logic_error("ridge_verify: ridge without adjacent pieces");
    RidgeReport r;
    r.h = h;
    // Slopes in h at fixed x: dg/dh = sqrt(x+1) dg/dpsi.
    r.left_slope = root * piece_derivs(spec, *left, p, x, psi).gpsi;
    r.right_slope = root * piece_derivs(spec, *right, p, x, psi).gpsi;
    r.ok = r.left_slope > r.right_slope;
    out.push_back(r);
  }
  return out;
}

DominanceReport dominance(const BarrierSpec& spec, const BlasiusProfile& p,
                          const Trajectory& t, Quantity q,
                          const std::vector<double>& abs_floor) {
  DominanceReport rep;
  const bool needs_xdiff = q == Quantity::D2xW;
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (needs_xdiff && k + 1 >= t.size()) continue;
    const DerivativeFields d = derivative_fields(t, p, k);
    const std::vector<double>* v = nullptr;
    switch (q) {
      case Quantity::Phi: v = &d.phi; break;
      case Quantity::DxPhi: v = &d.dxphi; break;
      case Quantity::DpsiPhi: v = &d.dpsiphi; break;
      case Quantity::D2psiPhi: v = &d.d2psiphi; break;
      case Quantity::DpsixW: v = &d.dpsixw; break;
      case Quantity::D2xW: v = &d.d2xw; break;
    }
    const WField& w = t.checkpoints[k];
    const double decay = std::exp(-1.0 / std::sqrt(w.x + 1.0));
    std::vector<double> g(w.grid->n(), 0.0);
    double q_sup = 0.0, g_peak = 0.0;
    for (std::size_t j = 1; j + 1 < w.grid->n(); ++j) {
      q_sup = std::max(q_sup, std::abs((*v)[j]));
      g[j] = eval_barrier(spec, p, w.x, w.grid->nodes[j]);
      if (spec.add_dpsi_w_term)
        g[j] += decay * first_difference(*w.grid, w.values, j);
      g_peak = std::max(g_peak, g[j]);
    }
    // Two measurement floors: quantity values far below their own sup are
    // tail noise, and where the barrier has fallen five decades below its
    // peak the marched field's tail is scheme-error pollution, not signal.
    double q_floor = std::max(1e-12, 1e-6 * q_sup);
    if (k < abs_floor.size()) q_floor = std::max(q_floor, abs_floor[k]);
    const double g_floor = 1e-5 * g_peak;
    double c_star = 0.0;
    for (std::size_t j = 1; j + 1 < w.grid->n(); ++j) {
      const double qv = std::abs((*v)[j]);
      if (qv < q_floor) continue;
      if (g[j] <= 1e-300) {
        rep.possible = false;
        continue;
      }
      if (g[j] < g_floor) continue;
      c_star = std::max(c_star, qv / g[j]);
    }
    rep.series.push_back({w.x, c_star});
  }
  // Bounded and nonincreasing within 10% after an onset in the first half.
  for (std::size_t k0 = 0; k0 < rep.series.size(); ++k0) {
    if (rep.series[k0].x > t.checkpoints.back().x / 10.0) break;
    bool ok = true;
    for (std::size_t k = k0; k + 1 < rep.series.size(); ++k)
      if (rep.series[k + 1].c_star > 1.1 * rep.series[k].c_star + 1e-300) {
        ok = false;
        break;
      }
    if (ok) {
      rep.pass = true;
      rep.onset_x = rep.series[k0].x;
      break;
    }
  }
  return rep;
}

double doubling_search(const std::function<bool(double)>& predicate,
                       double start, int steps) {
  double value = start;
  for (int i = 0; i <= steps; ++i) {
    if (predicate(value)) return value;
    value *= 2.0;
  }
  return 0.0;
}

}  // namespace prandtl
