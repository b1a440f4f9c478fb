#pragma once

// Verification experiments: seeded random ensembles, containment checks of
// computed eigenvalues against the enclosure regions, sharpness of the l1
// region on delta potentials, and audits of the Birman-Schwinger norm
// against its closed-form bounds.  Every experiment returns a
// VerificationReport whose JSON serialization is byte-identical across runs
// and worker counts.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "domain.hpp"
#include "enclosures.hpp"
#include "jost.hpp"
#include "operators.hpp"
#include "parallel.hpp"
#include "version.hpp"

namespace specenc {

namespace rng {

/// splitmix64 finalizer; counter-based so draws are independent of call order.
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Uniform draw from the closed complex disk of the given radius, by
/// rejection from the bounding square.  Deterministic in (seed, stream, item).
inline Complex disk_point(std::uint64_t seed, std::uint64_t stream, std::uint64_t item,
                          double radius) {
  std::uint64_t h = mix(mix(mix(seed) ^ stream) ^ item);
  for (;;) {
    const double x = (2.0 * unit(mix(h ^ 0x243f6a8885a308d3ULL)) - 1.0) * radius;
    const double y = (2.0 * unit(mix(h ^ 0x13198a2e03707344ULL)) - 1.0) * radius;
    if (x * x + y * y <= radius * radius) return Complex(x, y);
    h = mix(h);
  }
}

}  // namespace rng

struct EnsembleConfig {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::size_t support_width = 1;  // odd, centered at the origin
  double magnitude_cap = 1.0;
};

inline std::vector<PotentialSpec> generate_ensemble(const EnsembleConfig& cfg) {
  if (cfg.support_width < 1 || cfg.support_width % 2 == 0) {
    throw std::invalid_argument("generate_ensemble: support_width must be odd and positive");
  }
  if (!(cfg.magnitude_cap > 0.0) || !std::isfinite(cfg.magnitude_cap)) {
    throw std::invalid_argument("generate_ensemble: magnitude_cap must be positive and finite");
  }
  const std::int64_t offset = -static_cast<std::int64_t>(cfg.support_width / 2);
  std::vector<PotentialSpec> out(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    out[i].offset = offset;
    out[i].values.resize(cfg.support_width);
    for (std::size_t j = 0; j < cfg.support_width; ++j) {
      out[i].values[j] = rng::disk_point(cfg.seed, i, j, cfg.magnitude_cap);
    }
  }
  return out;
}

namespace io_detail {

inline nlohmann::json complex_to_json(Complex z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

inline nlohmann::json exponent_to_json(double p) {
  if (p == infinite_exponent) return nlohmann::json("inf");
  return nlohmann::json(p);
}

inline std::string exponent_label(double p) {
  if (p == infinite_exponent) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", p);
  return buf;
}

}  // namespace io_detail

/// Outcome of one experiment: a config echo, per-item records, aggregate
/// summary, and the violation / diagnostic counters that drive exit codes.
struct VerificationReport {
  std::string kind;
  std::string version = toolkit_version;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json records = nlohmann::json::array();
  std::size_t violations = 0;
  std::size_t diagnostics = 0;
  std::vector<std::string> notes;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["version"] = version;
    j["config"] = config;
    j["summary"] = summary;
    j["records"] = records;
    j["violations"] = violations;
    j["diagnostics"] = diagnostics;
    j["notes"] = notes;
    return j;
  }

  void print_summary(std::ostream& os) const {
    os << "report: " << kind << " (toolkit " << version << ")\n";
    os << "  config: " << config.dump() << "\n";
    for (auto it = summary.begin(); it != summary.end(); ++it) {
      os << "  " << it.key() << ": " << it.value().dump() << "\n";
    }
    os << "  violations:  " << violations << "\n";
    os << "  diagnostics: " << diagnostics << "\n";
    for (const std::string& n : notes) os << "  note: " << n << "\n";
  }
};

/// Greedy minimum-distance matching between two eigenvalue lists.
struct SpectrumMatch {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> unmatched_a, unmatched_b;
  double max_pair_distance = 0.0;
};

inline SpectrumMatch match_spectra(const std::vector<Complex>& a,
                                   const std::vector<Complex>& b, double tol) {
  struct Cand {
    double d;
    std::size_t i, j;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = std::abs(a[i] - b[j]);
      if (d <= tol) cands.push_back({d, i, j});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.d != y.d) return x.d < y.d;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  SpectrumMatch m;
  std::vector<bool> ua(a.size(), false), ub(b.size(), false);
  for (const Cand& c : cands) {
    if (ua[c.i] || ub[c.j]) continue;
    ua[c.i] = true;
    ub[c.j] = true;
    m.pairs.emplace_back(c.i, c.j);
    m.max_pair_distance = std::max(m.max_pair_distance, c.d);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!ua[i]) m.unmatched_a.push_back(i);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!ub[j]) m.unmatched_b.push_back(j);
  }
  return m;
}

struct VerifyOptions {
  double delta = 0.05;             // band-distance filter for tested eigenvalues
  std::vector<double> p_values = {4.0 / 3.0, 2.0, 4.0, infinite_exponent};
  std::size_t section_size = 601;  // N for the finite-section cross-check
  double section_match_eps = 1e-4;
  double cross_match_tol = 1e-5;   // finite-section vs wronskian pairing
  std::size_t wronskian_grid = 128;
  double containment_tol = 1e-9;   // slack for genuine boundary points
};

/// Containment of every cross-validated eigenvalue in each enclosure region.
/// Margins are reported as bound-LHS minus bound-RHS, so inside means <= 0;
/// a margin above `containment_tol` counts as a violation.  Eigenvalues seen
/// by only one method are diagnostics, never silently dropped.
inline VerificationReport verify_enclosures(const std::vector<PotentialSpec>& potentials,
                                            const VerifyOptions& opt = {}) {
  using nlohmann::json;
  VerificationReport rep;
  rep.kind = "enclosure-verify";
  rep.config["delta"] = opt.delta;
  rep.config["section_size"] = opt.section_size;
  rep.config["section_match_eps"] = opt.section_match_eps;
  rep.config["cross_match_tol"] = opt.cross_match_tol;
  rep.config["wronskian_grid"] = opt.wronskian_grid;
  rep.config["containment_tol"] = opt.containment_tol;
  rep.config["count"] = potentials.size();
  {
    json ps = json::array();
    for (double p : opt.p_values) ps.push_back(io_detail::exponent_to_json(p));
    rep.config["p_values"] = ps;
  }

  struct Item {
    json record;
    std::size_t violations = 0, diagnostics = 0;
    std::vector<std::string> notes;
    std::size_t tested = 0, matched_within_1e6 = 0;
  };
  std::vector<Item> items(potentials.size());

  parallel_for(potentials.size(), [&](std::size_t idx) {
    const PotentialSpec v = potentials[idx].trimmed();
    Item& it = items[idx];
    json rec;
    rec["index"] = idx;
    rec["support_width"] = v.size();
    const double q1 = lp_norm(v, 1.0);
    rec["norm_l1"] = q1;
    json norms = json::object();
    std::vector<double> qp(opt.p_values.size());
    for (std::size_t pi = 0; pi < opt.p_values.size(); ++pi) {
      qp[pi] = lp_norm(v, opt.p_values[pi]);
      norms[io_detail::exponent_label(opt.p_values[pi])] = qp[pi];
    }
    rec["norms_p"] = norms;

    SpectrumResult fs = stable_discrete_eigenvalues(v, opt.section_size, opt.delta,
                                                    opt.section_match_eps);
    SpectrumResult wr = locate_eigenvalues_wronskian(v, opt.wronskian_grid);
    std::vector<Complex> wr_far;
    for (const Complex& lam : wr.eigenvalues) {
      if (dist_to_band(lam) > opt.delta) wr_far.push_back(lam);
    }
    const SpectrumMatch match = match_spectra(fs.eigenvalues, wr_far, opt.cross_match_tol);

    json eigs = json::array();
    for (const auto& [i_fs, i_wr] : match.pairs) {
      const Complex lam = wr_far[i_wr];  // wronskian locations are the sharper ones
      const double cross = std::abs(fs.eigenvalues[i_fs] - lam);
      it.tested += 1;
      if (cross <= 1e-6) it.matched_within_1e6 += 1;
      json e;
      e["lambda"] = io_detail::complex_to_json(lam);
      e["cross_distance"] = cross;
      e["dist_to_band"] = dist_to_band(lam);
      e["residual_section"] = fs.residuals[i_fs];
      json regions = json::array();
      auto add_region = [&](const std::string& name, double lhs, double rhs, bool domain_ok) {
        const double margin = lhs - rhs;
        const bool pass = domain_ok && margin <= opt.containment_tol;
        json r;
        r["region"] = name;
        r["lhs"] = lhs;
        r["rhs"] = rhs;
        r["margin"] = margin;
        r["pass"] = pass;
        regions.push_back(r);
        if (!pass) it.violations += 1;
      };
      const bool off_open_band =
          !(lam.imag() == 0.0 && std::abs(lam.real()) < 2.0);
      add_region("l1", std::abs(lam * lam - 4.0), q1 * q1, off_open_band);
      for (std::size_t pi = 0; pi < opt.p_values.size(); ++pi) {
        const double p = opt.p_values[pi];
        const std::string tag = io_detail::exponent_label(p);
        if (p > 1.0) {
          add_region("lp[p=" + tag + "]",
                     lp_boundary_functional(lam, holder_dual(p)), qp[pi], true);
          if (p == infinite_exponent) {
            add_region("interp[p=inf]", dist_to_band(lam), qp[pi], true);
          } else {
            add_region("interp[p=" + tag + "]",
                       std::abs(lam * lam - 4.0) *
                           std::pow(dist_to_band(lam), 2.0 * p - 2.0),
                       std::pow(qp[pi], 2.0 * p), true);
          }
        }
      }
      e["regions"] = regions;
      eigs.push_back(e);
    }
    rec["eigenvalues"] = eigs;
    if (!match.unmatched_a.empty() || !match.unmatched_b.empty()) {
      json ua = json::array(), ub = json::array();
      for (std::size_t i : match.unmatched_a) {
        ua.push_back(io_detail::complex_to_json(fs.eigenvalues[i]));
      }
      for (std::size_t j : match.unmatched_b) {
        ub.push_back(io_detail::complex_to_json(wr_far[j]));
      }
      rec["unmatched_finite_section"] = ua;
      rec["unmatched_wronskian"] = ub;
      it.diagnostics += match.unmatched_a.size() + match.unmatched_b.size();
      it.notes.push_back("potential " + std::to_string(idx) + ": " +
                         std::to_string(match.unmatched_a.size() + match.unmatched_b.size()) +
                         " eigenvalue(s) seen by one method only");
    }
    for (const std::string& w : fs.warnings) {
      it.notes.push_back("potential " + std::to_string(idx) + ": " + w);
    }
    for (const std::string& w : wr.warnings) {
      it.notes.push_back("potential " + std::to_string(idx) + ": " + w);
    }
    it.record = std::move(rec);
  });

  std::size_t tested = 0, within = 0, agree_instances = 0;
  for (const Item& it : items) {
    rep.records.push_back(it.record);
    rep.violations += it.violations;
    rep.diagnostics += it.diagnostics;
    for (const std::string& n : it.notes) rep.notes.push_back(n);
    tested += it.tested;
    within += it.matched_within_1e6;
    if (it.diagnostics == 0 && it.matched_within_1e6 == it.tested) agree_instances += 1;
  }
  rep.summary["eigenvalues_tested"] = tested;
  rep.summary["cross_matched_within_1e-6"] = within;
  rep.summary["fully_agreeing_instances"] = agree_instances;
  rep.summary["instances"] = potentials.size();
  return rep;
}

struct SharpnessOptions {
  std::size_t grid = 128;
  double skip_margin = 1e-6;      // omega too close to [-2i, 2i] is skipped
  double lambda_tol = 1e-10;      // |lambda - sqrt(4 + omega^2)|
  double boundary_tol = 1e-9;     // ||lambda^2-4| - Q^2|
};

/// Sharpness of the l1 region on delta potentials v = omega * delta_0 with
/// |omega| = Q: the single eigenvalue sqrt(4 + omega^2) must land on the
/// region boundary.  Phases where omega degenerates into the segment
/// [-2i, 2i] (eigenvalue absorbed by the band) are skipped and recorded.
inline VerificationReport sharpness_sweep(double Q, std::size_t count,
                                          const SharpnessOptions& opt = {}) {
  using nlohmann::json;
  if (!(Q > 0.0)) throw std::invalid_argument("sharpness_sweep: requires Q > 0");
  if (count == 0) throw std::invalid_argument("sharpness_sweep: requires count >= 1");
  VerificationReport rep;
  rep.kind = "sharpness";
  rep.config["Q"] = Q;
  rep.config["count"] = count;
  rep.config["grid"] = opt.grid;
  rep.config["skip_margin"] = opt.skip_margin;
  rep.config["lambda_tol"] = opt.lambda_tol;
  rep.config["boundary_tol"] = opt.boundary_tol;

  struct Item {
    json record;
    std::size_t violations = 0;
    bool skipped = false;
    std::vector<std::string> notes;
  };
  std::vector<Item> items(count);
  const double pi = std::acos(-1.0);

  parallel_for(count, [&](std::size_t j) {
    Item& it = items[j];
    const double theta = 2.0 * pi * static_cast<double>(j) / static_cast<double>(count);
    const Complex omega = Q * Complex(std::cos(theta), std::sin(theta));
    json rec;
    rec["phase"] = theta;
    rec["omega"] = io_detail::complex_to_json(omega);
    // distance from omega to the segment [-2i, 2i]
    const double seg_dist =
        std::hypot(omega.real(), std::max(0.0, std::abs(omega.imag()) - 2.0));
    if (seg_dist <= opt.skip_margin) {
      it.skipped = true;
      rec["skipped"] = "omega within skip margin of [-2i,2i]";
      it.record = std::move(rec);
      return;
    }
    // expected eigenvalue sqrt(4 + omega^2), branch via k = i * m with
    // m the disk parameter of i*omega  (then 1/k - k = omega)
    const Complex m = inverse_joukowsky(Complex(-omega.imag(), omega.real())).value();
    const Complex k_exp = Complex(0.0, 1.0) * m;
    const Complex lam_exp = k_exp + 1.0 / k_exp;
    rec["lambda_expected"] = io_detail::complex_to_json(lam_exp);

    const PotentialSpec delta{0, {omega}};
    WronskianSearchOptions wopt;
    wopt.grid = opt.grid;
    const SpectrumResult sr = locate_eigenvalues_wronskian(delta, wopt);
    rec["eigenvalues_found"] = sr.eigenvalues.size();
    if (sr.eigenvalues.size() != 1) {
      it.violations += 1;
      it.notes.push_back("phase " + std::to_string(theta) + ": expected exactly one eigenvalue, got " +
                         std::to_string(sr.eigenvalues.size()));
      it.record = std::move(rec);
      return;
    }
    const Complex lam = sr.eigenvalues.front();
    const double dev_lambda = std::abs(lam - lam_exp);
    const double dev_boundary = std::abs(std::abs(lam * lam - 4.0) - Q * Q);
    rec["lambda"] = io_detail::complex_to_json(lam);
    rec["deviation_lambda"] = dev_lambda;
    rec["deviation_boundary"] = dev_boundary;
    const bool pass = dev_lambda <= opt.lambda_tol && dev_boundary <= opt.boundary_tol;
    rec["pass"] = pass;
    if (!pass) {
      it.violations += 1;
      it.notes.push_back("phase " + std::to_string(theta) + ": deviations " +
                         std::to_string(dev_lambda) + ", " + std::to_string(dev_boundary));
    }
    it.record = std::move(rec);
  });

  std::size_t skipped = 0;
  for (Item& it : items) {
    rep.records.push_back(it.record);
    rep.violations += it.violations;
    for (const std::string& n : it.notes) rep.notes.push_back(n);
    if (it.skipped) skipped += 1;
  }
  rep.summary["phases"] = count;
  rep.summary["skipped_near_segment"] = skipped;
  rep.summary["checked"] = count - skipped;
  return rep;
}

struct BoundAuditOptions {
  std::vector<double> p_values = {4.0 / 3.0, 2.0, 4.0, infinite_exponent};
  double rel_slack = 1e-8;   // violation when norm > bound * (1 + rel_slack)
  double min_band_dist = 0.1;
};

/// Computed ||K(lambda)|| against the four closed-form bound families:
/// l1, sup (dual), general lp (dual), and the interpolated family.
inline VerificationReport audit_bs_bounds(const std::vector<PotentialSpec>& potentials,
                                          const std::vector<Complex>& lambda_grid,
                                          const BoundAuditOptions& opt = {}) {
  using nlohmann::json;
  for (const Complex& lam : lambda_grid) {
    detail::require_finite(lam, "audit_bs_bounds");
    if (!(dist_to_band(lam) >= opt.min_band_dist)) {
      throw std::invalid_argument("audit_bs_bounds: grid point closer to the band than the floor");
    }
  }
  VerificationReport rep;
  rep.kind = "bs-bound-audit";
  rep.config["potentials"] = potentials.size();
  rep.config["lambda_grid"] = lambda_grid.size();
  rep.config["rel_slack"] = opt.rel_slack;
  rep.config["min_band_dist"] = opt.min_band_dist;
  {
    json ps = json::array();
    for (double p : opt.p_values) ps.push_back(io_detail::exponent_to_json(p));
    rep.config["p_values"] = ps;
  }

  struct Item {
    json record;
    std::size_t violations = 0;
    std::size_t checks = 0;
    std::vector<std::string> notes;
  };
  std::vector<Item> items(potentials.size());

  parallel_for(potentials.size(), [&](std::size_t idx) {
    Item& it = items[idx];
    const PotentialSpec v = potentials[idx].trimmed();
    json rec;
    rec["index"] = idx;
    if (v.is_zero()) {
      rec["skipped"] = "zero potential";
      it.notes.push_back("potential " + std::to_string(idx) + ": zero, skipped");
      it.record = std::move(rec);
      return;
    }
    const double q1 = lp_norm(v, 1.0);
    const double qinf = lp_norm(v, infinite_exponent);
    std::vector<double> qp(opt.p_values.size());
    for (std::size_t pi = 0; pi < opt.p_values.size(); ++pi) {
      qp[pi] = lp_norm(v, opt.p_values[pi]);
    }
    rec["norm_l1"] = q1;
    rec["norm_sup"] = qinf;

    struct Worst {
      double margin = -std::numeric_limits<double>::infinity();
      Complex lambda;
      double norm = 0.0, bound = 0.0;
    };
    json families = json::object();
    auto family_record = [&](const Worst& w) {
      json f;
      f["worst_margin"] = w.margin;
      f["lambda"] = io_detail::complex_to_json(w.lambda);
      f["norm"] = w.norm;
      f["bound"] = w.bound;
      return f;
    };
    Worst w_l1, w_sup;
    std::vector<Worst> w_lp(opt.p_values.size()), w_interp(opt.p_values.size());

    for (const Complex& lam : lambda_grid) {
      const BSMatrix K = build_bs_matrix(v, lam);
      const double norm = bs_operator_norm(K);
      const double root_disc = std::sqrt(std::abs(lam * lam - 4.0));
      const double kk = std::abs(K.k - 1.0 / K.k);
      const double a = std::abs(K.k);
      const double d = dist_to_band(lam);
      auto check = [&](Worst& w, double bound) {
        it.checks += 1;
        const double margin = norm - bound;
        if (margin > w.margin) w = {margin, lam, norm, bound};
        if (norm > bound * (1.0 + opt.rel_slack)) it.violations += 1;
      };
      check(w_l1, q1 / root_disc);
      check(w_sup, qinf / kk * (1.0 + a) / (1.0 - a));
      for (std::size_t pi = 0; pi < opt.p_values.size(); ++pi) {
        const double p = opt.p_values[pi];
        if (p == infinite_exponent) {
          check(w_lp[pi], qinf / kk * (1.0 + a) / (1.0 - a));
          check(w_interp[pi], qinf / d);
        } else {
          const double q = holder_dual(p);
          const double aq = std::pow(a, q);
          check(w_lp[pi], qp[pi] / kk * std::pow((1.0 + aq) / (1.0 - aq), 1.0 / q));
          check(w_interp[pi], qp[pi] / (std::pow(std::abs(lam * lam - 4.0), 0.5 / p) *
                                        std::pow(d, 1.0 - 1.0 / p)));
        }
      }
    }
    families["l1"] = family_record(w_l1);
    families["sup"] = family_record(w_sup);
    for (std::size_t pi = 0; pi < opt.p_values.size(); ++pi) {
      const std::string tag = io_detail::exponent_label(opt.p_values[pi]);
      families["lp[p=" + tag + "]"] = family_record(w_lp[pi]);
      families["interp[p=" + tag + "]"] = family_record(w_interp[pi]);
    }
    rec["families"] = families;
    it.record = std::move(rec);
  });

  std::size_t checks = 0;
  for (Item& it : items) {
    rep.records.push_back(it.record);
    rep.violations += it.violations;
    for (const std::string& n : it.notes) rep.notes.push_back(n);
    checks += it.checks;
  }
  rep.summary["checks"] = checks;
  return rep;
}

}  // namespace specenc
