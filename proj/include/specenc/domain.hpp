#pragma once

// Spectral-plane geometry for the discrete Schroedinger operator on Z:
// the Joukowsky map lambda = k + 1/k between the punctured unit disk and the
// complement of the band [-2,2], plus the compactly supported potential type
// and the lp norms used throughout.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace specenc {

using Complex = std::complex<double>;

/// Sentinel for p = infinity in norm/exponent parameters.
inline constexpr double infinite_exponent = std::numeric_limits<double>::infinity();

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

namespace detail {

inline void require_finite(Complex z, const char* where) {
  if (!is_finite(z)) {
    throw std::invalid_argument(std::string(where) + ": non-finite argument");
  }
}

/// Integer power by repeated squaring; negative exponents go through 1/z.
inline Complex cpow_int(Complex z, std::int64_t e) {
  if (e < 0) {
    z = 1.0 / z;
    e = -e;
  }
  Complex r(1.0, 0.0);
  while (e > 0) {
    if (e & 1) r *= z;
    z *= z;
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Point k in the punctured closed unit disk, 0 < |k| <= 1; the Joukowsky
/// preimage of a spectral parameter lambda = k + 1/k.
class DiskParameter {
 public:
  explicit DiskParameter(Complex k) : k_(k) {
    detail::require_finite(k, "DiskParameter");
    const double a = std::abs(k);
    if (a == 0.0) throw std::domain_error("DiskParameter: k = 0");
    if (a > 1.0 + 16.0 * std::numeric_limits<double>::epsilon()) {
      throw std::domain_error("DiskParameter: |k| > 1");
    }
  }

  Complex value() const { return k_; }
  double modulus() const { return std::abs(k_); }

 private:
  Complex k_;
};

/// lambda = k + 1/k.
inline Complex joukowsky(const DiskParameter& k) {
  return k.value() + 1.0 / k.value();
}

/// The root k of k^2 - lambda*k + 1 = 0 with |k| <= 1.  Off the band [-2,2]
/// the root is unique and |k| < 1; on the band both roots lie on the unit
/// circle and the one with Im k <= 0 is returned.
inline DiskParameter inverse_joukowsky(Complex lambda) {
  detail::require_finite(lambda, "inverse_joukowsky");
  // Beyond this magnitude lambda^2 overflows; k = 1/lambda to full precision.
  if (std::abs(lambda) > 1e150) return DiskParameter(1.0 / lambda);
  Complex w = std::sqrt(lambda * lambda - 4.0);
  const double align = (std::conj(lambda) * w).real();
  if (align < 0.0) w = -w;
  // (lambda - w)/2 == 2/(lambda + w); the latter avoids the cancellation
  // that loses the root entirely for large |lambda|.
  Complex k = 2.0 / (lambda + w);
  if (std::abs(k) > 1.0) k = 1.0 / k;
  if (align == 0.0 && k.imag() > 0.0) k = 1.0 / k;  // on the band: pick Im k <= 0
  return DiskParameter(k);
}

/// Euclidean distance from lambda to the segment [-2,2].
inline double dist_to_band(Complex lambda) {
  const double x = std::abs(lambda.real());
  if (x <= 2.0) return std::abs(lambda.imag());
  return std::hypot(x - 2.0, lambda.imag());
}

/// z/|z| for z != 0, and 0 at z = 0.
inline Complex complex_sgn(Complex z) {
  detail::require_finite(z, "complex_sgn");
  const double a = std::abs(z);
  if (a == 0.0) return Complex(0.0, 0.0);
  return z / a;
}

/// Compactly supported complex sequence over Z: values[j] sits at lattice
/// index offset + j, everything outside the stored window is zero.
struct PotentialSpec {
  std::int64_t offset = 0;
  std::vector<Complex> values;

  std::size_t size() const { return values.size(); }
  std::int64_t first_index() const { return offset; }
  std::int64_t last_index() const {
    return offset + static_cast<std::int64_t>(values.size()) - 1;
  }

  Complex at(std::int64_t n) const {
    if (values.empty() || n < first_index() || n > last_index()) {
      return Complex(0.0, 0.0);
    }
    return values[static_cast<std::size_t>(n - offset)];
  }

  bool is_zero() const {
    for (const Complex& z : values) {
      if (z != Complex(0.0, 0.0)) return false;
    }
    return true;
  }

  /// Index range [first, last] of the nonzero entries; nullopt when zero.
  std::optional<std::pair<std::int64_t, std::int64_t>> support() const {
    std::int64_t lo = 0, hi = -1;
    bool seen = false;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] != Complex(0.0, 0.0)) {
        const std::int64_t n = offset + static_cast<std::int64_t>(j);
        if (!seen) lo = n;
        hi = n;
        seen = true;
      }
    }
    if (!seen) return std::nullopt;
    return std::make_pair(lo, hi);
  }

  /// Canonical form with zero margins stripped.  The zero potential
  /// normalizes to a single zero entry at the origin.  Idempotent.
  PotentialSpec trimmed() const {
    const auto s = support();
    if (!s) return PotentialSpec{0, {Complex(0.0, 0.0)}};
    PotentialSpec out;
    out.offset = s->first;
    out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(s->first - offset),
                      values.begin() + static_cast<std::ptrdiff_t>(s->second - offset + 1));
    return out;
  }

  PotentialSpec translated(std::int64_t shift) const { return {offset + shift, values}; }

  void require_finite_entries(const char* where) const {
    for (const Complex& z : values) detail::require_finite(z, where);
  }
};

/// (sum_n |v_n|^p)^(1/p); the sup norm for p = infinity.
inline double lp_norm(const PotentialSpec& v, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: requires p >= 1");
  v.require_finite_entries("lp_norm");
  double peak = 0.0;
  for (const Complex& z : v.values) peak = std::max(peak, std::abs(z));
  if (p == infinite_exponent || peak == 0.0) return peak;
  if (p == 1.0) {
    double s = 0.0;
    for (const Complex& z : v.values) s += std::abs(z);
    return s;
  }
  // scale by the peak so large p cannot underflow the partial sums
  double s = 0.0;
  for (const Complex& z : v.values) {
    const double a = std::abs(z) / peak;
    if (a > 0.0) s += std::pow(a, p);
  }
  return peak * std::pow(s, 1.0 / p);
}

/// Dual exponent: 1/p + 1/q = 1; maps infinity to 1.
inline double holder_dual(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("holder_dual: requires p > 1");
  if (p == infinite_exponent) return 1.0;
  return p / (p - 1.0);
}

}  // namespace specenc
