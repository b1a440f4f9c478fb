#pragma once

// Jost solutions of the three-term recurrence
//   phi_{n+1} + (v_n - lambda) phi_n + phi_{n-1} = 0,   lambda = k + 1/k,
// normalized to k^{+n} (right) / k^{-n} (left) outside the support of v.
// For compactly supported v the normalization is exact, the discrete
// Wronskian of the two solutions is n-independent, and its zeros in the
// punctured disk are exactly the eigenvalues of H = H0 + V.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "domain.hpp"
#include "operators.hpp"

namespace specenc {

struct JostSolution {
  enum class Side { right, left };

  Complex k;
  std::int64_t first_index = 0;  // lattice index of samples.front()
  std::vector<Complex> samples;
  Side side = Side::right;

  std::int64_t last_index() const {
    return first_index + static_cast<std::int64_t>(samples.size()) - 1;
  }
  Complex at(std::int64_t n) const {
    if (n < first_index || n > last_index()) {
      throw std::out_of_range("JostSolution::at: index outside the computed window");
    }
    return samples[static_cast<std::size_t>(n - first_index)];
  }
};

namespace detail {

inline std::pair<std::int64_t, std::int64_t> jost_window(const PotentialSpec& v,
                                                         const char* where) {
  if (v.values.empty()) {
    throw std::invalid_argument(std::string(where) + ": empty potential window");
  }
  if (const auto s = v.support()) return {s->first, s->second};
  return {0, 0};  // zero potential: any window works, the recursion is free
}

inline void reject_unit_band_edge(Complex k, const char* where) {
  if (k == Complex(1.0, 0.0) || k == Complex(-1.0, 0.0)) {
    throw std::domain_error(std::string(where) + ": k = +-1 (band edge)");
  }
}

}  // namespace detail

/// Right Jost solution on [a-2, b+2] where [a, b] is the support of v;
/// phi_n = k^n holds exactly for n > b.
inline JostSolution jost_right(const PotentialSpec& v, const DiskParameter& kd) {
  const Complex k = kd.value();
  detail::reject_unit_band_edge(k, "jost_right");
  v.require_finite_entries("jost_right");
  const auto [a, b] = detail::jost_window(v, "jost_right");
  const Complex lambda = k + 1.0 / k;
  JostSolution phi;
  phi.k = k;
  phi.side = JostSolution::Side::right;
  phi.first_index = a - 2;
  phi.samples.assign(static_cast<std::size_t>(b - a + 5), Complex(0.0, 0.0));
  auto slot = [&](std::int64_t n) -> Complex& {
    return phi.samples[static_cast<std::size_t>(n - phi.first_index)];
  };
  slot(b + 2) = detail::cpow_int(k, b + 2);
  slot(b + 1) = detail::cpow_int(k, b + 1);
  for (std::int64_t n = b + 1; n >= a - 1; --n) {
    slot(n - 1) = (lambda - v.at(n)) * slot(n) - slot(n + 1);
  }
  return phi;
}

/// Left Jost solution on the same window; phi_n = k^{-n} exactly for n < a.
inline JostSolution jost_left(const PotentialSpec& v, const DiskParameter& kd) {
  const Complex k = kd.value();
  detail::reject_unit_band_edge(k, "jost_left");
  v.require_finite_entries("jost_left");
  const auto [a, b] = detail::jost_window(v, "jost_left");
  const Complex lambda = k + 1.0 / k;
  JostSolution phi;
  phi.k = k;
  phi.side = JostSolution::Side::left;
  phi.first_index = a - 2;
  phi.samples.assign(static_cast<std::size_t>(b - a + 5), Complex(0.0, 0.0));
  auto slot = [&](std::int64_t n) -> Complex& {
    return phi.samples[static_cast<std::size_t>(n - phi.first_index)];
  };
  slot(a - 2) = detail::cpow_int(k, -(a - 2));
  slot(a - 1) = detail::cpow_int(k, -(a - 1));
  for (std::int64_t n = a - 1; n <= b + 1; ++n) {
    slot(n + 1) = (lambda - v.at(n)) * slot(n) - slot(n - 1);
  }
  return phi;
}

/// Discrete Wronskian phi_n psi_{n+1} - phi_{n+1} psi_n at index n.
inline Complex wronskian_pair(const JostSolution& phi, const JostSolution& psi,
                              std::int64_t n) {
  return phi.at(n) * psi.at(n + 1) - phi.at(n + 1) * psi.at(n);
}

/// Wronskian of the right and left Jost solutions at k, |k| < 1.  The value
/// is n-independent; constancy across the window is asserted to 1e-12
/// relative (with an absolute floor set by the sample magnitudes), so a
/// blow-up of the recursion cannot pass silently.
inline Complex wronskian(const PotentialSpec& v, const DiskParameter& kd) {
  if (!(kd.modulus() < 1.0)) {
    throw std::domain_error("wronskian: requires |k| < 1");
  }
  const JostSolution phi = jost_right(v, kd);
  const JostSolution psi = jost_left(v, kd);
  const std::int64_t lo = phi.first_index;
  const std::int64_t hi = phi.last_index() - 1;
  Complex ref(0.0, 0.0);
  double scale = 0.0;
  double maxdev = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const Complex w = wronskian_pair(phi, psi, n);
    scale = std::max(scale, std::abs(phi.at(n)) * std::abs(psi.at(n + 1)) +
                                std::abs(phi.at(n + 1)) * std::abs(psi.at(n)));
    if (n == lo) {
      ref = w;
    } else {
      maxdev = std::max(maxdev, std::abs(w - ref));
    }
  }
  if (maxdev > 1e-12 * std::abs(ref) + 1e-12 * scale) {
    throw std::runtime_error("wronskian: value drifts across the window (recursion breakdown)");
  }
  return ref;
}

struct WronskianSearchOptions {
  std::size_t grid = 128;       // radial node count; angular count is 4x
  double refine_tol = 1e-12;    // absolute |W| target for the Newton polish;
                                // step collapse backstops scale-dominated cases
  double radius_floor = 0.02;   // inner edge of the search annulus
  double radius_ceil = 0.995;   // outer edge (eigenvalues closer to the band
                                // than this are out of scope by design)
  std::size_t newton_cap = 60;
  double dedup_radius = 1e-8;
};

/// All Wronskian zeros in the search annulus, located by a winding-number
/// scan on a polar grid (discrete argument principle per grid cell) and
/// polished by Newton's method with a central-difference derivative.
/// Returned as eigenvalues lambda = k + 1/k of H, canonically ordered; the
/// residual is the first-order eigenvalue error |W/W'| * |1 - 1/k^2|.
inline SpectrumResult locate_eigenvalues_wronskian(const PotentialSpec& v,
                                                   const WronskianSearchOptions& opt = {}) {
  if (opt.grid < 64) throw std::invalid_argument("locate_eigenvalues_wronskian: grid < 64");
  if (!(opt.refine_tol > 0.0)) {
    throw std::invalid_argument("locate_eigenvalues_wronskian: refine_tol <= 0");
  }
  v.require_finite_entries("locate_eigenvalues_wronskian");
  // W is invariant under translation of v; center the support to keep the
  // k^{+-n} seed magnitudes tame.
  PotentialSpec vc = v.values.empty() ? PotentialSpec{0, {Complex(0.0, 0.0)}} : v;
  if (const auto s = vc.support()) {
    vc = vc.translated(-(s->first + s->second) / 2);
  }
  const auto W = [&](Complex k) { return wronskian(vc, DiskParameter(k)); };

  const double pi = std::acos(-1.0);
  const std::size_t nr = opt.grid;
  const std::size_t nt = 4 * opt.grid;
  std::vector<Complex> val((nr + 1) * nt);
  std::vector<double> arg((nr + 1) * nt);
  for (std::size_t i = 0; i <= nr; ++i) {
    const double r =
        opt.radius_floor + (opt.radius_ceil - opt.radius_floor) * static_cast<double>(i) / nr;
    for (std::size_t j = 0; j < nt; ++j) {
      const double th = 2.0 * pi * static_cast<double>(j) / nt;
      const Complex w = W(Complex(r * std::cos(th), r * std::sin(th)));
      val[i * nt + j] = w;
      arg[i * nt + j] = std::atan2(w.imag(), w.real());
    }
  }

  SpectrumResult out;
  out.method = "wronskian";
  out.section_size = 0;

  std::vector<Complex> roots;
  std::vector<double> root_absw;
  auto wrap = [&](double d) {
    while (d > pi) d -= 2.0 * pi;
    while (d < -pi) d += 2.0 * pi;
    return d;
  };
  auto push_root = [&](Complex k, double absw) {
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (std::abs(roots[i] - k) <= opt.dedup_radius) {
        if (absw < root_absw[i]) {
          roots[i] = k;
          root_absw[i] = absw;
        }
        return;
      }
    }
    roots.push_back(k);
    root_absw.push_back(absw);
  };

  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t jn = (j + 1) % nt;
      const std::size_t c00 = i * nt + j, c10 = (i + 1) * nt + j;
      const std::size_t c11 = (i + 1) * nt + jn, c01 = i * nt + jn;
      if (val[c00] == Complex(0.0, 0.0) || val[c10] == Complex(0.0, 0.0) ||
          val[c11] == Complex(0.0, 0.0) || val[c01] == Complex(0.0, 0.0)) {
        // exact zero on a node: take it as a candidate directly
      } else {
        const double winding = wrap(arg[c10] - arg[c00]) + wrap(arg[c11] - arg[c10]) +
                               wrap(arg[c01] - arg[c11]) + wrap(arg[c00] - arg[c01]);
        if (std::abs(winding) < pi) continue;
      }
      const double r0 = opt.radius_floor +
                        (opt.radius_ceil - opt.radius_floor) * (static_cast<double>(i) + 0.5) / nr;
      const double th0 = 2.0 * pi * (static_cast<double>(j) + 0.5) / nt;
      Complex k(r0 * std::cos(th0), r0 * std::sin(th0));

      bool converged = false;
      bool runaway = false;
      double absw = 0.0;
      double laststep = std::numeric_limits<double>::infinity();
      for (std::size_t it = 0; it < opt.newton_cap; ++it) {
        const Complex w = W(k);
        absw = std::abs(w);
        if (absw <= opt.refine_tol) {
          converged = true;
          break;
        }
        const double h = 1e-7 * (1.0 + std::abs(k));
        const Complex dw = (W(k + Complex(h, 0.0)) - W(k - Complex(h, 0.0))) / (2.0 * h);
        if (dw == Complex(0.0, 0.0)) break;
        const Complex step = w / dw;
        k -= step;
        const double ak = std::abs(k);
        if (ak < 1e-4 || ak > 0.9999) {
          runaway = true;  // the zero left the search domain; not an eigenvalue here
          break;
        }
        const double st = std::abs(step);
        if (st <= 2e-14 * (1.0 + ak) && laststep <= 2e-14 * (1.0 + ak)) {
          absw = std::abs(W(k));
          converged = true;  // step collapse: at a zero to machine precision
          break;
        }
        laststep = st;
      }
      if (converged) {
        push_root(k, absw);
      } else if (!runaway) {
        out.warnings.push_back("newton stalled near cell (" + std::to_string(i) + "," +
                               std::to_string(j) + "), |W| = " + std::to_string(absw));
      }
    }
  }

  std::vector<std::pair<Complex, double>> found;  // (lambda, residual)
  for (const Complex& k : roots) {
    const Complex w = W(k);
    const double h = 1e-7 * (1.0 + std::abs(k));
    const Complex dw = (W(k + Complex(h, 0.0)) - W(k - Complex(h, 0.0))) / (2.0 * h);
    const Complex dlambda = 1.0 - 1.0 / (k * k);
    double res = std::abs(dw) > 0.0 ? std::abs(w) / std::abs(dw) * std::abs(dlambda)
                                    : std::abs(w);
    found.emplace_back(k + 1.0 / k, res);
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    if (x.first.real() != y.first.real()) return x.first.real() < y.first.real();
    return x.first.imag() < y.first.imag();
  });
  for (const auto& [lambda, res] : found) {
    out.eigenvalues.push_back(lambda);
    out.residuals.push_back(res);
  }
  return out;
}

/// Convenience overload mirroring the common call shape.
inline SpectrumResult locate_eigenvalues_wronskian(const PotentialSpec& v, std::size_t grid,
                                                   double refine_tol = 1e-12) {
  WronskianSearchOptions opt;
  opt.grid = grid;
  opt.refine_tol = refine_tol;
  return locate_eigenvalues_wronskian(v, opt);
}

}  // namespace specenc
