#pragma once

// Dense and tridiagonal complex linear algebra used by the operator module.
// Everything here is self-contained: a complex-symmetric variant of the
// implicit-shift QL iteration (EISPACK imtql1 lineage, after Cullum &
// Willoughby's CMTQL1), one-sided Jacobi for singular values (Hestenes),
// power iteration on the Gram matrix, and small pivoted solvers for
// inverse iteration.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "domain.hpp"

namespace specenc::linalg {

/// Dense row-major complex matrix; just enough surface for the solvers here.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Complex> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Complex(0.0, 0.0)) {}

  Complex& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  Complex operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline std::vector<Complex> matvec(const Matrix& m, const std::vector<Complex>& x) {
  std::vector<Complex> y(m.rows, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < m.rows; ++i) {
    Complex s(0.0, 0.0);
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline std::vector<Complex> adjoint_matvec(const Matrix& m, const std::vector<Complex>& x) {
  std::vector<Complex> y(m.cols, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) y[j] += std::conj(m(i, j)) * x[i];
  }
  return y;
}

inline double norm2(const std::vector<Complex>& x) {
  double s = 0.0;
  for (const Complex& z : x) s += std::norm(z);
  return std::sqrt(s);
}

inline Complex dot(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

/// Deterministic pseudo-random unit vector (fixed start for iterative solvers).
inline std::vector<Complex> seed_vector(std::size_t n) {
  std::vector<Complex> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j);
    x[j] = Complex(std::cos(0.7 * t + 0.3), std::sin(1.3 * t + 1.1));
  }
  const double nx = norm2(x);
  if (nx > 0.0) {
    for (Complex& z : x) z /= nx;
  }
  return x;
}

// --------------------------------------------------------------------------
// singular values
// --------------------------------------------------------------------------

/// All singular values by one-sided Jacobi (Hestenes): columns are rotated
/// pairwise until mutually orthogonal, then the column norms are the
/// singular values.  Returned in descending order.
inline std::vector<double> singular_values_jacobi(Matrix m) {
  const std::size_t n = m.cols;
  const double tol = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0;
        Complex apq(0.0, 0.0);
        for (std::size_t r = 0; r < m.rows; ++r) {
          app += std::norm(m(r, p));
          aqq += std::norm(m(r, q));
          apq += std::conj(m(r, p)) * m(r, q);
        }
        const double g = std::abs(apq);
        if (g <= tol * std::sqrt(app * aqq) || app == 0.0 || aqq == 0.0) continue;
        rotated = true;
        // diagonalize [[app, g],[g, aqq]] after factoring out the phase of apq
        const double zeta = (aqq - app) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        const Complex phase = apq / g;
        for (std::size_t r = 0; r < m.rows; ++r) {
          const Complex up = m(r, p);
          const Complex uq = m(r, q);
          m(r, p) = cs * phase * up - sn * uq;
          m(r, q) = sn * phase * up + cs * uq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) s += std::norm(m(r, p));
    sv[p] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), [](double a, double b) { return a > b; });
  return sv;
}

/// Largest singular value by power iteration on the Gram matrix M^H M.
inline double largest_singular_value_power(const Matrix& m, double rel_tol = 1e-12,
                                           std::size_t max_iter = 100000) {
  if (m.cols == 0 || m.rows == 0) return 0.0;
  std::vector<Complex> x = seed_vector(m.cols);
  double rho_prev = -1.0;
  double rho = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    const std::vector<Complex> y = matvec(m, x);
    rho = 0.0;
    for (const Complex& z : y) rho += std::norm(z);  // = ||Mx||^2 with ||x|| = 1
    std::vector<Complex> z = adjoint_matvec(m, y);
    const double nz = norm2(z);
    if (nz == 0.0) return 0.0;
    for (Complex& w : z) w /= nz;
    x = std::move(z);
    if (it > 0 && std::abs(rho - rho_prev) <= rel_tol * rho) break;
    rho_prev = rho;
  }
  return std::sqrt(rho);
}

// --------------------------------------------------------------------------
// dense LU (partial pivoting)
// --------------------------------------------------------------------------

struct DenseLU {
  Matrix lu;
  std::vector<std::size_t> piv;
};

inline DenseLU lu_factor(Matrix m) {
  const std::size_t n = m.rows;
  DenseLU f;
  f.piv.resize(n);
  double scale = 0.0;
  for (const Complex& z : m.a) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) scale = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pr = c;
    double best = std::abs(m(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      const double a = std::abs(m(r, c));
      if (a > best) {
        best = a;
        pr = r;
      }
    }
    f.piv[c] = pr;
    if (pr != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(pr, j));
    }
    // keep the factorization usable when the shift is (nearly) an eigenvalue
    if (std::abs(m(c, c)) < 1e-300) {
      m(c, c) = Complex(scale * std::numeric_limits<double>::epsilon(), 0.0);
    }
    const Complex inv = 1.0 / m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const Complex l = m(r, c) * inv;
      m(r, c) = l;
      if (l != Complex(0.0, 0.0)) {
        for (std::size_t j = c + 1; j < n; ++j) m(r, j) -= l * m(c, j);
      }
    }
  }
  f.lu = std::move(m);
  return f;
}

inline void lu_solve_inplace(const DenseLU& f, std::vector<Complex>& b) {
  const std::size_t n = f.lu.rows;
  for (std::size_t c = 0; c < n; ++c) {
    if (f.piv[c] != c) std::swap(b[c], b[f.piv[c]]);
    for (std::size_t r = c + 1; r < n; ++r) b[r] -= f.lu(r, c) * b[c];
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t j = c + 1; j < n; ++j) b[c] -= f.lu(c, j) * b[j];
    b[c] /= f.lu(c, c);
  }
}

// --------------------------------------------------------------------------
// complex symmetric tridiagonal eigenvalues (implicit-shift QL)
// --------------------------------------------------------------------------

struct TridiagEigen {
  std::vector<Complex> values;
  std::vector<std::size_t> unconverged;  // positions that hit the sweep cap
};

namespace detail {

/// sqrt(f^2 + g^2) without intermediate overflow; complex pythag.
inline Complex cpythag(Complex f, Complex g) {
  const double af = std::abs(f), ag = std::abs(g);
  const double m = af > ag ? af : ag;
  if (m == 0.0) return Complex(0.0, 0.0);
  const Complex fs = f / m, gs = g / m;
  return m * std::sqrt(fs * fs + gs * gs);
}

}  // namespace detail

/// Eigenvalues of the complex symmetric tridiagonal matrix with diagonal d
/// and off-diagonal e (|e| = n-1).  Implicit-shift QL; rotations are complex
/// orthogonal (c^2 + s^2 = 1), which is the natural transform preserving
/// complex symmetry.  Each eigenvalue gets at most `max_sweeps` iterations;
/// columns that fail are reported, not silently dropped.
inline TridiagEigen tridiag_eigenvalues(std::vector<Complex> d, std::vector<Complex> e,
                                        int max_sweeps = 80) {
  const std::size_t n = d.size();
  TridiagEigen out;
  if (n == 0) return out;
  if (e.size() + 1 != n) throw std::invalid_argument("tridiag_eigenvalues: off-diagonal size");
  e.push_back(Complex(0.0, 0.0));
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > max_sweeps) {
        out.unconverged.push_back(l);
        break;
      }
      // shift from the leading 2x2; branch chosen to maximize |denominator|
      Complex g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      Complex r = detail::cpythag(g, Complex(1.0, 0.0));
      const Complex gp = g + r, gm = g - r;
      g = d[m] - d[l] + e[l] / (std::abs(gp) >= std::abs(gm) ? gp : gm);
      Complex s(1.0, 0.0), c(1.0, 0.0), p(0.0, 0.0);
      bool breakdown = false;
      for (std::size_t i = m; i-- > l;) {
        Complex f = s * e[i];
        const Complex b = c * e[i];
        r = detail::cpythag(f, g);
        e[i + 1] = r;
        if (std::abs(r) <= 64.0 * eps * (std::abs(f) + std::abs(g)) || r == Complex(0.0, 0.0)) {
          // rotation collapsed (possible for complex symmetric input):
          // deflate what we have and retry with a fresh shift
          d[i + 1] -= p;
          e[m] = Complex(0.0, 0.0);
          breakdown = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (breakdown) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = Complex(0.0, 0.0);
    }
  }
  out.values.assign(d.begin(), d.end());
  return out;
}

/// Solve (T - sigma I) x = b in place for tridiagonal T = (diag, off), with
/// partial pivoting and fill-in on a second superdiagonal.  Zero pivots are
/// nudged so the solve survives exact shifts (inverse iteration use).
inline void shifted_tridiag_solve(const std::vector<Complex>& diag,
                                  const std::vector<Complex>& off, Complex sigma,
                                  std::vector<Complex>& b) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  std::vector<Complex> d0(n), d1(n, Complex(0.0, 0.0)), d2(n, Complex(0.0, 0.0));
  double scale = std::abs(sigma);
  for (std::size_t i = 0; i < n; ++i) {
    d0[i] = diag[i] - sigma;
    scale = std::max(scale, std::abs(diag[i]));
    if (i + 1 < n) {
      d1[i] = off[i];
      scale = std::max(scale, std::abs(off[i]));
    }
  }
  if (scale == 0.0) scale = 1.0;
  const double tiny = scale * std::numeric_limits<double>::epsilon() * 1e-3;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Complex sub = off[i];  // row i+1, column i
    if (std::abs(sub) > std::abs(d0[i])) {
      std::swap(d0[i], sub);
      std::swap(d1[i], d0[i + 1]);
      // row i originally has no column i+2 entry; row i+1 does not either,
      // so the swapped-in fill is the current d2 of row i+1 (zero or fill)
      std::swap(d2[i], d1[i + 1]);
      std::swap(b[i], b[i + 1]);
    }
    if (std::abs(d0[i]) == 0.0) d0[i] = Complex(tiny, 0.0);
    const Complex m = sub / d0[i];
    d0[i + 1] -= m * d1[i];
    d1[i + 1] -= m * d2[i];
    b[i + 1] -= m * b[i];
  }
  if (std::abs(d0[n - 1]) == 0.0) d0[n - 1] = Complex(tiny, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    Complex s = b[i];
    if (i + 1 < n) s -= d1[i] * b[i + 1];
    if (i + 2 < n) s -= d2[i] * b[i + 2];
    b[i] = s / d0[i];
  }
}

/// Relative residual ||(T - lambda) x|| / ||T||_inf with x obtained from two
/// steps of inverse iteration at lambda.
inline double tridiag_eigen_residual(const std::vector<Complex>& diag,
                                     const std::vector<Complex>& off, Complex lambda) {
  const std::size_t n = diag.size();
  if (n == 0) return 0.0;
  double hnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(off[i - 1]);
    if (i + 1 < n) row += std::abs(off[i]);
    hnorm = std::max(hnorm, row);
  }
  if (hnorm == 0.0) hnorm = 1.0;
  std::vector<Complex> x = seed_vector(n);
  double best = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 2; ++pass) {
    shifted_tridiag_solve(diag, off, lambda, x);
    const double nx = norm2(x);
    if (!(nx > 0.0) || !std::isfinite(nx)) break;
    for (Complex& z : x) z /= nx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex r = (diag[i] - lambda) * x[i];
      if (i > 0) r += off[i - 1] * x[i - 1];
      if (i + 1 < n) r += off[i] * x[i + 1];
      rss += std::norm(r);
    }
    best = std::min(best, std::sqrt(rss) / hnorm);
  }
  return best;
}

/// Eigenvalue of a dense matrix nearest to `target`: shift-inverted power
/// iteration warmup, then Rayleigh-quotient shifts.  Returns the estimate
/// with the smallest observed residual.
inline Complex eigenvalue_nearest(const Matrix& m, Complex target, double tol = 1e-11,
                                  int max_iter = 60) {
  const std::size_t n = m.rows;
  if (n == 0 || n != m.cols) throw std::invalid_argument("eigenvalue_nearest: square matrix required");
  double scale = std::abs(target);
  for (const Complex& z : m.a) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) scale = 1.0;
  std::vector<Complex> x = seed_vector(n);
  Complex shift = target;
  Complex best_nu = target;
  double best_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    Matrix a = m;
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= shift;
    const DenseLU f = lu_factor(std::move(a));
    std::vector<Complex> y = x;
    lu_solve_inplace(f, y);
    const double ny = norm2(y);
    if (!(ny > 0.0) || !std::isfinite(ny)) {
      shift += Complex(1.0, 1.0) * (scale * 1e-13);
      continue;
    }
    for (Complex& z : y) z /= ny;
    x = std::move(y);
    const std::vector<Complex> ax = matvec(m, x);
    const Complex nu = dot(x, ax);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) rss += std::norm(ax[i] - nu * x[i]);
    const double res = std::sqrt(rss);
    if (res < best_res) {
      best_res = res;
      best_nu = nu;
    }
    if (res <= tol * scale) break;
    if (it >= 2) shift = nu;
  }
  return best_nu;
}

}  // namespace specenc::linalg
