#pragma once

// Spectral enclosure regions for H = H0 + V on l2(Z) with complex V:
//
//   l1     : |lambda^2 - 4| <= Q^2, excluding the open band (-2,2); Q = ||v||_1
//   lp     : |k - 1/k| * ((1-|k|^q)/(1+|k|^q))^{1/q} <= Q with k the disk
//            parameter of lambda and q the dual exponent; Q = ||v||_p
//   interp : |lambda^2 - 4| * dist(lambda,[-2,2])^{2p-2} <= Q^{2p}; the
//            p = infinity limit is dist(lambda,[-2,2]) <= Q
//
// plus explicit boundary parametrizations for each region.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "domain.hpp"

namespace specenc {

enum class RegionKind { l1, lp, interp };

inline const char* region_kind_name(RegionKind k) {
  switch (k) {
    case RegionKind::l1: return "l1";
    case RegionKind::lp: return "lp";
    default: return "interp";
  }
}

inline RegionKind region_kind_from_name(const std::string& s) {
  if (s == "l1") return RegionKind::l1;
  if (s == "lp") return RegionKind::lp;
  if (s == "interp") return RegionKind::interp;
  throw std::invalid_argument("unknown region kind: " + s);
}

/// Left side of the lp region's defining inequality,
/// |k - 1/k| * ((1 - |k|^q)/(1 + |k|^q))^{1/q}; zero on the band.
inline double lp_boundary_functional(Complex lambda, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("lp_boundary_functional: requires q >= 1");
  const Complex k = inverse_joukowsky(lambda).value();
  const double a = std::abs(k);
  double num = 1.0 - std::pow(a, q);
  if (num < 0.0) num = 0.0;  // |k| may exceed 1 by an ulp on the band
  const double ratio = num / (1.0 + std::pow(a, q));
  return std::abs(k - 1.0 / k) * std::pow(ratio, 1.0 / q);
}

inline bool l1_region_contains(Complex lambda, double Q) {
  if (!(Q >= 0.0)) throw std::invalid_argument("l1_region_contains: requires Q >= 0");
  detail::require_finite(lambda, "l1_region_contains");
  const bool open_band = lambda.imag() == 0.0 && std::abs(lambda.real()) < 2.0;
  return !open_band && std::abs(lambda * lambda - 4.0) <= Q * Q;
}

inline bool lp_region_contains(Complex lambda, double Q, double q) {
  if (!(Q >= 0.0)) throw std::invalid_argument("lp_region_contains: requires Q >= 0");
  detail::require_finite(lambda, "lp_region_contains");
  return lp_boundary_functional(lambda, q) <= Q;
}

inline bool interp_region_contains(Complex lambda, double Q, double p) {
  if (!(Q >= 0.0)) throw std::invalid_argument("interp_region_contains: requires Q >= 0");
  if (!(p > 1.0)) throw std::invalid_argument("interp_region_contains: requires p > 1");
  detail::require_finite(lambda, "interp_region_contains");
  const double d = dist_to_band(lambda);
  if (p == infinite_exponent) return d <= Q;
  return std::abs(lambda * lambda - 4.0) * std::pow(d, 2.0 * p - 2.0) <= std::pow(Q, 2.0 * p);
}

/// One enclosure region: kind, norm bound Q, and the exponent that matters
/// for the kind (dual exponent q for lp, original exponent p for interp).
struct EnclosureRegion {
  RegionKind kind = RegionKind::l1;
  double Q = 0.0;
  double exponent = 0.0;  // q for lp, p for interp, unused for l1

  static EnclosureRegion l1(double Q) { return {RegionKind::l1, Q, 0.0}; }
  static EnclosureRegion lp(double Q, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("EnclosureRegion::lp: requires q >= 1");
    return {RegionKind::lp, Q, q};
  }
  static EnclosureRegion interp(double Q, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("EnclosureRegion::interp: requires p > 1");
    return {RegionKind::interp, Q, p};
  }

  bool contains(Complex lambda) const {
    switch (kind) {
      case RegionKind::l1: return l1_region_contains(lambda, Q);
      case RegionKind::lp: return lp_region_contains(lambda, Q, exponent);
      default: return interp_region_contains(lambda, Q, exponent);
    }
  }

  /// Absolute defect |LHS - RHS| of the defining boundary equation at lambda.
  double boundary_residual(Complex lambda) const {
    switch (kind) {
      case RegionKind::l1:
        return std::abs(std::abs(lambda * lambda - 4.0) - Q * Q);
      case RegionKind::lp:
        return std::abs(lp_boundary_functional(lambda, exponent) - Q);
      default:
        if (exponent == infinite_exponent) return std::abs(dist_to_band(lambda) - Q);
        return std::abs(std::abs(lambda * lambda - 4.0) *
                            std::pow(dist_to_band(lambda), 2.0 * exponent - 2.0) -
                        std::pow(Q, 2.0 * exponent));
    }
  }
};

/// Sampled first-quadrant boundary arc of an enclosure region.  The full
/// boundary follows from the fourfold symmetry lambda -> -lambda, conj.
struct BoundaryCurve {
  RegionKind kind = RegionKind::l1;
  double Q = 0.0;
  double exponent = 0.0;       // q (lp) or p (interp); 0 for l1
  bool has_t_range = false;    // lp kind carries its parameter interval
  double t_min = 0.0, t_max = 0.0;
  std::vector<double> t;       // curve parameter per sample
  std::vector<Complex> points;
  std::vector<double> residuals;

  std::size_t size() const { return points.size(); }
};

namespace detail {

/// Root of a strictly increasing function by bisection plus secant polish.
/// The bracket starts as [lo0, hi0]; the upper end doubles until f > 0.
template <typename F>
inline double solve_increasing(F&& f, double lo0, double hi0, const char* what) {
  double lo = lo0, hi = hi0;
  double flo = f(lo);
  if (flo > 0.0) {
    throw std::runtime_error(std::string(what) + ": no bracket at the lower endpoint (parameters out of range)");
  }
  double fhi = f(hi);
  int doublings = 0;
  while (fhi <= 0.0) {
    if (++doublings > 64) {
      throw std::runtime_error(std::string(what) + ": bracketing failed (parameters out of range)");
    }
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
  }
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm <= 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  // secant polish inside the final bracket
  double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
  for (int it = 0; it < 8 && f1 != f0; ++it) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x2)) break;
    const double f2 = f(x2);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (std::abs(f2) < 1e-15 * (1.0 + std::abs(f0))) break;
  }
  return std::abs(f1) <= std::abs(f0) ? x1 : x0;
}

}  // namespace detail

/// Squared radius function R(t) = (Q^2/4) coth^{2/q}(q t / 2) of the lp
/// boundary in the (cosh, sinh) chart.
inline double lp_radius_sq(double Q, double q, double t) {
  return 0.25 * Q * Q * std::pow(1.0 / std::tanh(0.5 * q * t), 2.0 / q);
}

struct TRange {
  double t_min = 0.0;
  double t_max = 0.0;
};

/// Parameter interval of the lp boundary arc: t_min solves
/// cosh^2 t = R(t) (the curve meets the imaginary axis), t_max solves
/// sinh^2 t = R(t) (the curve meets the real axis).
inline TRange solve_t_range(double Q, double q) {
  if (!(Q > 0.0)) throw std::invalid_argument("solve_t_range: requires Q > 0");
  if (!(q >= 1.0)) throw std::invalid_argument("solve_t_range: requires q >= 1");
  const auto f_min = [&](double t) { return std::cosh(t) * std::cosh(t) - lp_radius_sq(Q, q, t); };
  const auto f_max = [&](double t) { return std::sinh(t) * std::sinh(t) - lp_radius_sq(Q, q, t); };
  TRange r;
  r.t_min = detail::solve_increasing(f_min, 1e-8, 1.0, "solve_t_range(t_min)");
  r.t_max = detail::solve_increasing(f_max, 1e-8, 1.0, "solve_t_range(t_max)");
  if (!(r.t_min <= r.t_max)) throw std::runtime_error("solve_t_range: inverted interval");
  return r;
}

/// First-quadrant arc of the l1 boundary |lambda^2 - 4| = Q^2, sampled as
/// lambda(theta) = sqrt(4 + Q^2 exp(i theta)), theta in [0, pi].
inline BoundaryCurve sample_l1_boundary(double Q, std::size_t n) {
  if (!(Q > 0.0)) throw std::invalid_argument("sample_l1_boundary: requires Q > 0");
  if (n < 2) throw std::invalid_argument("sample_l1_boundary: requires n >= 2");
  const double pi = std::acos(-1.0);
  BoundaryCurve c;
  c.kind = RegionKind::l1;
  c.Q = Q;
  const EnclosureRegion region = EnclosureRegion::l1(Q);
  c.t.reserve(n);
  c.points.reserve(n);
  c.residuals.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = pi * static_cast<double>(j) / static_cast<double>(n - 1);
    const Complex rhs = 4.0 + Q * Q * Complex(std::cos(theta), std::sin(theta));
    const Complex lambda = std::sqrt(rhs);  // principal branch: first quadrant
    c.t.push_back(theta);
    c.points.push_back(lambda);
    c.residuals.push_back(region.boundary_residual(lambda));
  }
  return c;
}

/// First-quadrant arc of the lp boundary over t in [t_min, t_max]:
///   Re = 2 cosh(t) sqrt(cosh^2 t - R(t)),  Im = 2 sinh(t) sqrt(R(t) - sinh^2 t).
inline BoundaryCurve sample_lp_boundary(double Q, double q, std::size_t n) {
  if (!(Q > 0.0)) throw std::invalid_argument("sample_lp_boundary: requires Q > 0");
  if (!(q >= 1.0)) throw std::invalid_argument("sample_lp_boundary: requires q >= 1");
  if (n < 2) throw std::invalid_argument("sample_lp_boundary: requires n >= 2");
  const TRange tr = solve_t_range(Q, q);
  BoundaryCurve c;
  c.kind = RegionKind::lp;
  c.Q = Q;
  c.exponent = q;
  c.has_t_range = true;
  c.t_min = tr.t_min;
  c.t_max = tr.t_max;
  const EnclosureRegion region = EnclosureRegion::lp(Q, q);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = tr.t_min + (tr.t_max - tr.t_min) * static_cast<double>(j) / static_cast<double>(n - 1);
    const double R = lp_radius_sq(Q, q, t);
    const double ch = std::cosh(t), sh = std::sinh(t);
    double rad_re = ch * ch - R;
    double rad_im = R - sh * sh;
    // the radicands vanish at the interval ends; tolerate an ulp of slack
    if (rad_re < 0.0) {
      if (rad_re < -1e-10 * std::max(1.0, R)) {
        throw std::runtime_error("sample_lp_boundary: negative radicand (solver defect)");
      }
      rad_re = 0.0;
    }
    if (rad_im < 0.0) {
      if (rad_im < -1e-10 * std::max(1.0, R)) {
        throw std::runtime_error("sample_lp_boundary: negative radicand (solver defect)");
      }
      rad_im = 0.0;
    }
    const Complex lambda(2.0 * ch * std::sqrt(rad_re), 2.0 * sh * std::sqrt(rad_im));
    c.t.push_back(t);
    c.points.push_back(lambda);
    c.residuals.push_back(region.boundary_residual(lambda));
  }
  return c;
}

namespace detail {

/// Left side of the interp boundary equation at lambda (finite p).
inline double interp_lhs(Complex lambda, double p) {
  return std::abs(lambda * lambda - 4.0) * std::pow(dist_to_band(lambda), 2.0 * p - 2.0);
}

}  // namespace detail

/// First-quadrant arc of the interp boundary, parametrized by the polar
/// angle phi about the right band edge (2,0).  Along each ray the first
/// crossing of the boundary equation is located by a forward scan plus
/// bisection, so multiple crossings further out cannot be picked up by
/// mistake.  For p = infinity the boundary is the stadium dist = Q and the
/// rays are evaluated in closed form.
inline BoundaryCurve sample_interp_boundary(double Q, double p, std::size_t n) {
  if (!(Q > 0.0)) throw std::invalid_argument("sample_interp_boundary: requires Q > 0");
  if (!(p > 1.0)) throw std::invalid_argument("sample_interp_boundary: requires p > 1");
  if (n < 2) throw std::invalid_argument("sample_interp_boundary: requires n >= 2");
  const double pi = std::acos(-1.0);
  BoundaryCurve c;
  c.kind = RegionKind::interp;
  c.Q = Q;
  c.exponent = p;
  const EnclosureRegion region = EnclosureRegion::interp(Q, p);

  // imaginary-axis endpoint (0, y0) fixes the angular extent of the arc
  double y0;
  if (p == infinite_exponent) {
    y0 = Q;
  } else {
    const double target = 2.0 * p * std::log(Q);
    const auto g = [&](double y) {
      return std::log(y * y + 4.0) + (2.0 * p - 2.0) * std::log(y) - target;
    };
    y0 = detail::solve_increasing(g, 1e-12, 1.0, "sample_interp_boundary(y0)");
  }
  const double phi_end = std::atan2(y0, -2.0);

  for (std::size_t j = 0; j < n; ++j) {
    const double phi = phi_end * static_cast<double>(j) / static_cast<double>(n - 1);
    const Complex dir = (j == 0) ? Complex(1.0, 0.0)
                                 : Complex(std::cos(phi), std::sin(phi));
    double s;
    if (p == infinite_exponent) {
      s = (phi <= 0.5 * pi) ? Q : Q / dir.imag();
    } else {
      const auto g = [&](double r) { return detail::interp_lhs(Complex(2.0, 0.0) + r * dir, p) - std::pow(Q, 2.0 * p); };
      // forward scan for the first sign change, then bisect inside the step
      const double s_cap = 8.0 + 8.0 * Q;
      const int steps = 512;
      double s_lo = 0.0, s_hi = -1.0;
      for (int m = 1; m <= steps; ++m) {
        const double r = s_cap * static_cast<double>(m) / steps;
        if (g(r) > 0.0) {
          s_hi = r;
          break;
        }
        s_lo = r;
      }
      if (s_hi < 0.0) {
        throw std::runtime_error("sample_interp_boundary: ray never leaves the region (scan budget exhausted)");
      }
      for (int it = 0; it < 96; ++it) {
        const double mid = 0.5 * (s_lo + s_hi);
        if (mid <= s_lo || mid >= s_hi) break;
        if (g(mid) <= 0.0) {
          s_lo = mid;
        } else {
          s_hi = mid;
        }
      }
      s = 0.5 * (s_lo + s_hi);
    }
    const Complex lambda = Complex(2.0, 0.0) + s * dir;
    c.t.push_back(phi);
    c.points.push_back(lambda);
    c.residuals.push_back(region.boundary_residual(lambda));
  }
  return c;
}

}  // namespace specenc
