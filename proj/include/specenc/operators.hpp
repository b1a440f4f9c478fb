#pragma once

// The operator side: finite Jacobi sections of H = H0 + V, the
// Birman-Schwinger matrix K(lambda) = |V|^{1/2} (H0-lambda)^{-1} |V|^{1/2} sgn(V)
// restricted to the support of V, and spectra thereof.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "domain.hpp"
#include "linalg.hpp"

namespace specenc {

/// N x N truncation of the Jacobi matrix of H: unit off-diagonals, complex
/// diagonal given by the potential on a window.
struct JacobiSection {
  std::vector<Complex> diagonal;
  std::size_t size() const { return diagonal.size(); }
};

inline constexpr std::size_t max_section_size = 32768;

/// Eigenvalue list from one of the two methods, in canonical order
/// (lexicographic by real part, then imaginary part).
struct SpectrumResult {
  std::vector<Complex> eigenvalues;
  std::vector<double> residuals;
  std::string method;                      // "finite-section" or "wronskian"
  std::size_t section_size = 0;            // 0 for the wronskian method
  std::vector<double> residuals_doubled;   // 2N-section residuals (stability filter)
  std::vector<std::string> warnings;
};

/// Free resolvent kernel (H0 - lambda)^{-1}(m, n) = k^{|m-n|} / (k - 1/k).
inline Complex free_resolvent_entry(std::int64_t m, std::int64_t n, Complex lambda) {
  detail::require_finite(lambda, "free_resolvent_entry");
  if (dist_to_band(lambda) <= 0.0) {
    throw std::domain_error("free_resolvent_entry: lambda on the band [-2,2]");
  }
  const Complex k = inverse_joukowsky(lambda).value();
  const std::int64_t d = m >= n ? m - n : n - m;
  return detail::cpow_int(k, d) / (k - 1.0 / k);
}

/// Birman-Schwinger matrix on the support of v at spectral parameter lambda.
struct BSMatrix {
  std::vector<std::int64_t> support;  // indices with v != 0, ascending
  linalg::Matrix entries;
  Complex lambda;
  Complex k;

  std::size_t dimension() const { return support.size(); }
};

inline BSMatrix build_bs_matrix(const PotentialSpec& v, Complex lambda) {
  detail::require_finite(lambda, "build_bs_matrix");
  v.require_finite_entries("build_bs_matrix");
  if (dist_to_band(lambda) <= 0.0) {
    throw std::domain_error("build_bs_matrix: lambda on the band [-2,2]");
  }
  BSMatrix K;
  for (std::int64_t n = v.first_index(); v.size() && n <= v.last_index(); ++n) {
    if (v.at(n) != Complex(0.0, 0.0)) K.support.push_back(n);
  }
  if (K.support.empty()) {
    throw std::invalid_argument("build_bs_matrix: identically zero potential");
  }
  K.lambda = lambda;
  K.k = inverse_joukowsky(lambda).value();
  const Complex denom = K.k - 1.0 / K.k;
  const std::size_t d = K.support.size();
  const std::size_t span = static_cast<std::size_t>(K.support.back() - K.support.front());
  std::vector<Complex> kpow(span + 1);
  kpow[0] = Complex(1.0, 0.0);
  for (std::size_t j = 1; j <= span; ++j) kpow[j] = kpow[j - 1] * K.k;
  std::vector<double> root(d);
  std::vector<Complex> sgn(d);
  for (std::size_t j = 0; j < d; ++j) {
    const Complex w = v.at(K.support[j]);
    root[j] = std::sqrt(std::abs(w));
    sgn[j] = complex_sgn(w);
  }
  K.entries = linalg::Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t gap = static_cast<std::size_t>(
          i >= j ? K.support[i] - K.support[j] : K.support[j] - K.support[i]);
      K.entries(i, j) = root[i] * (kpow[gap] / denom) * root[j] * sgn[j];
    }
  }
  return K;
}

/// Operator norm ||K||: every singular value via one-sided Jacobi up to
/// dimension 64, power iteration on the Gram matrix beyond that.
inline double bs_operator_norm(const BSMatrix& K) {
  if (K.dimension() <= 64) return linalg::singular_values_jacobi(K.entries).front();
  return linalg::largest_singular_value_power(K.entries);
}

/// Eigenvalue of K nearest to `target`; the Birman-Schwinger criterion asks
/// for -1 in the spectrum of K(lambda) exactly when lambda is an eigenvalue.
inline Complex bs_eigenvalue_nearest(const BSMatrix& K, Complex target) {
  return linalg::eigenvalue_nearest(K.entries, target);
}

/// Eigenvalues of a finite Jacobi section, canonically ordered, each with an
/// inverse-iteration residual ||(H - lambda) x|| / ||H||_inf.  Entries that
/// hit the QL sweep cap or exceed the residual watermark are flagged in
/// `warnings`, never dropped.
inline SpectrumResult tridiagonal_eigenvalues(const JacobiSection& H) {
  const std::size_t n = H.size();
  if (n == 0 || n > max_section_size) {
    throw std::invalid_argument("tridiagonal_eigenvalues: section size out of range");
  }
  for (const Complex& z : H.diagonal) detail::require_finite(z, "tridiagonal_eigenvalues");
  const std::vector<Complex> off(n - 1, Complex(1.0, 0.0));
  linalg::TridiagEigen eig = linalg::tridiag_eigenvalues(H.diagonal, off);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Complex& x = eig.values[a];
    const Complex& y = eig.values[b];
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });

  SpectrumResult out;
  out.method = "finite-section";
  out.section_size = n;
  out.eigenvalues.reserve(n);
  out.residuals.reserve(n);
  std::vector<bool> capped(n, false);
  for (std::size_t idx : eig.unconverged) capped[idx] = true;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t src = order[pos];
    const Complex lambda = eig.values[src];
    const double res = linalg::tridiag_eigen_residual(H.diagonal, off, lambda);
    out.eigenvalues.push_back(lambda);
    out.residuals.push_back(res);
    if (capped[src]) {
      out.warnings.push_back("eigenvalue " + std::to_string(pos) +
                             " hit the QL sweep cap; residual " + std::to_string(res));
    } else if (!(res <= 1e-8)) {
      out.warnings.push_back("eigenvalue " + std::to_string(pos) +
                             " residual above 1e-8: " + std::to_string(res));
    }
  }
  return out;
}

/// Centered window [c - N/2, c + N/2) around the midpoint of the support.
inline JacobiSection centered_section(const PotentialSpec& v, std::size_t N) {
  std::int64_t a = 0, b = 0;
  if (const auto s = v.support()) {
    a = s->first;
    b = s->second;
  }
  const std::int64_t c = (a + b) / 2;
  const std::int64_t start = c - static_cast<std::int64_t>(N / 2);
  JacobiSection H;
  H.diagonal.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    H.diagonal[i] = v.at(start + static_cast<std::int64_t>(i));
  }
  return H;
}

/// Discrete eigenvalues that are stable under doubling the section size:
/// eigenvalues of the N-section with dist to the band > delta are kept when
/// the 2N-section has a partner within eps_match.  Both residuals are
/// reported (residuals = N-section, residuals_doubled = 2N partner).
inline SpectrumResult stable_discrete_eigenvalues(const PotentialSpec& v, std::size_t N,
                                                  double delta = 0.05,
                                                  double eps_match = 1e-4) {
  if (!(delta > 0.0)) throw std::invalid_argument("stable_discrete_eigenvalues: requires delta > 0");
  if (!(eps_match > 0.0)) throw std::invalid_argument("stable_discrete_eigenvalues: requires eps_match > 0");
  const PotentialSpec vt = v.trimmed();
  if (N < 4 * vt.size()) {
    throw std::invalid_argument("stable_discrete_eigenvalues: section smaller than 4x the support");
  }
  if (2 * N > max_section_size) {
    throw std::invalid_argument("stable_discrete_eigenvalues: doubled section exceeds the size cap");
  }
  const SpectrumResult base = tridiagonal_eigenvalues(centered_section(v, N));
  // The doubled section only backs the persistence check, so its residuals
  // are computed for matched partners alone; a full sweep would dominate the
  // runtime at large N without informing the result.
  const JacobiSection twice_sec = centered_section(v, 2 * N);
  const std::vector<Complex> off2(twice_sec.size() - 1, Complex(1.0, 0.0));
  const linalg::TridiagEigen twice = linalg::tridiag_eigenvalues(twice_sec.diagonal, off2);

  SpectrumResult out;
  out.method = "finite-section";
  out.section_size = N;
  for (std::size_t i = 0; i < base.eigenvalues.size(); ++i) {
    const Complex lambda = base.eigenvalues[i];
    if (!(dist_to_band(lambda) > delta)) continue;
    std::size_t best = twice.values.size();
    double bestd = eps_match;
    for (std::size_t j = 0; j < twice.values.size(); ++j) {
      const double dd = std::abs(lambda - twice.values[j]);
      if (dd <= bestd) {
        bestd = dd;
        best = j;
      }
    }
    if (best == twice.values.size()) continue;  // not stable: discretization artifact
    const double res2 =
        linalg::tridiag_eigen_residual(twice_sec.diagonal, off2, twice.values[best]);
    out.eigenvalues.push_back(lambda);
    out.residuals.push_back(base.residuals[i]);
    out.residuals_doubled.push_back(res2);
    if (!(res2 <= 1e-8)) {
      out.warnings.push_back("2N-section: partner residual above 1e-8: " +
                             std::to_string(res2));
    }
  }
  for (const std::string& w : base.warnings) out.warnings.push_back("N-section: " + w);
  if (!twice.unconverged.empty()) {
    out.warnings.push_back("2N-section: " + std::to_string(twice.unconverged.size()) +
                           " eigenvalue(s) hit the QL sweep cap");
  }
  return out;
}

}  // namespace specenc
