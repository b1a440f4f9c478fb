// Acceptance gate.  Runs the seven release criteria end to end, prints one
// [PASS]/[FAIL] line per criterion and exits nonzero when any of them fail.
// Every tolerance and budget is pinned right here; artifacts land under
// acceptance_out/ in the working directory.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "specenc/domain.hpp"
#include "specenc/enclosures.hpp"
#include "specenc/experiments.hpp"
#include "specenc/io.hpp"
#include "specenc/jost.hpp"
#include "specenc/operators.hpp"

#include "test_util.hpp"

#ifndef SPECENC_CLI_PATH
#error "SPECENC_CLI_PATH must point at the specenc binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using specenc::Complex;
using specenc::PotentialSpec;

namespace {

// pinned tolerances and budgets -----------------------------------------------
constexpr double kSharpnessLambdaTol = 1e-10;
constexpr double kSharpnessBoundaryTol = 1e-9;
constexpr double kSharpnessSkipMargin = 1e-6;
constexpr double kSharpnessBudgetSeconds = 10.0;
constexpr std::size_t kSharpnessPhases = 100;

constexpr std::size_t kVerifyCount = 500;
constexpr std::size_t kVerifySupport = 21;
constexpr double kVerifyCap = 3.0;
constexpr std::uint64_t kVerifySeed = 20250815;
constexpr double kVerifyBudgetSeconds = 300.0;

constexpr std::size_t kAuditPotentials = 50;
constexpr std::size_t kAuditGridSize = 200;
constexpr double kAuditRelSlack = 1e-8;

constexpr std::size_t kDeepSectionSize = 2001;
constexpr double kDeepEigenvalueTol = 1e-8;

constexpr double kCurveResidualTol = 1e-9;
constexpr double kOriginPassTol = 1e-7;

constexpr std::size_t kPropertySections = 1000;
constexpr double kSectionOracleTol = 1e-8;
constexpr std::size_t kRoundTrips = 100000;
constexpr std::size_t kRegionChecks = 10000;

constexpr double kGridResolution = 0.005;

int failures = 0;
json summary_rows = json::array();

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", index, name,
              detail.c_str());
  std::fflush(stdout);
  summary_rows.push_back({{"criterion", index},
                          {"name", name},
                          {"pass", pass},
                          {"detail", detail}});
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

int run_cli(const std::string& args, const std::string& tag) {
  fs::create_directories("acceptance_out/logs");
  const std::string cmd = std::string("\"") + SPECENC_CLI_PATH + "\" " + args +
                          " > acceptance_out/logs/" + tag + ".out" +
                          " 2> acceptance_out/logs/" + tag + ".err";
  const int rc = std::system(cmd.c_str());
  if (rc == -1 || !WIFEXITED(rc)) return -1;
  return WEXITSTATUS(rc);
}

double max_residual_of_curve_json(const std::string& path) {
  const json j = json::parse(specenc::io::read_text_file(path));
  double worst = 0.0;
  for (const auto& r : j.at("residuals")) worst = std::max(worst, r.get<double>());
  return worst;
}

// --- criterion 1: l1 sharpness on delta potentials ---------------------------
void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  specenc::SharpnessOptions opt;
  opt.skip_margin = kSharpnessSkipMargin;
  opt.lambda_tol = kSharpnessLambdaTol;
  opt.boundary_tol = kSharpnessBoundaryTol;
  std::size_t violations = 0;
  std::string counts;
  for (double Q : {0.75, 2.75}) {
    const specenc::VerificationReport rep =
        specenc::sharpness_sweep(Q, kSharpnessPhases, opt);
    violations += rep.violations;
    const auto checked = rep.summary.at("checked").get<std::size_t>();
    const auto skipped = rep.summary.at("skipped_near_segment").get<std::size_t>();
    // |omega| < 2 grazes the segment exactly at the two imaginary phases
    const std::size_t expect_skipped = Q < 2.0 ? 2 : 0;
    if (skipped != expect_skipped) ++violations;
    counts += " Q=" + fmt(Q) + ": checked " + std::to_string(checked) + ", skipped " +
              std::to_string(skipped) + ";";
    fs::create_directories("acceptance_out");
    specenc::io::write_text_file("acceptance_out/sharpness_Q" + fmt(Q) + ".json",
                                 rep.to_json().dump(2) + "\n");
  }
  const double dt = seconds_since(t0);
  const bool pass = violations == 0 && dt <= kSharpnessBudgetSeconds;
  report(1, "l1 sharpness", pass,
         "2x" + std::to_string(kSharpnessPhases) + " phases," + counts + " violations " +
             std::to_string(violations) + ", " + fmt(dt) + " s (budget " +
             fmt(kSharpnessBudgetSeconds) + " s)");
}

// --- criterion 2: ensemble containment ---------------------------------------
void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  specenc::EnsembleConfig cfg;
  cfg.seed = kVerifySeed;
  cfg.count = kVerifyCount;
  cfg.support_width = kVerifySupport;
  cfg.magnitude_cap = kVerifyCap;
  const specenc::VerificationReport rep =
      specenc::verify_enclosures(specenc::generate_ensemble(cfg));
  fs::create_directories("acceptance_out");
  specenc::io::write_text_file("acceptance_out/verify_ensemble.json",
                               rep.to_json().dump(2) + "\n");
  const double dt = seconds_since(t0);
  const auto tested = rep.summary.at("eigenvalues_tested").get<std::size_t>();
  const auto within = rep.summary.at("cross_matched_within_1e-6").get<std::size_t>();
  const bool pass = rep.violations == 0 && tested >= 500 && within == tested &&
                    dt <= kVerifyBudgetSeconds;
  report(2, "ensemble containment", pass,
         std::to_string(kVerifyCount) + " potentials, " + std::to_string(tested) +
             " eigenvalues tested (" + std::to_string(within) +
             " cross-matched within 1e-6), violations " + std::to_string(rep.violations) +
             ", diagnostics " + std::to_string(rep.diagnostics) + ", " + fmt(dt) +
             " s (budget " + fmt(kVerifyBudgetSeconds) + " s)");
}

// --- criterion 3: Birman-Schwinger bound audit --------------------------------
void criterion3() {
  specenc::EnsembleConfig cfg;
  cfg.seed = 7;
  cfg.count = kAuditPotentials;
  cfg.support_width = 7;
  cfg.magnitude_cap = 2.0;
  // 100 points hugging the band at distance 0.15 plus a far ring of 100
  std::vector<Complex> grid;
  for (std::size_t j = 0; j < kAuditGridSize / 2; ++j) {
    const double x = -2.2 + 4.4 * static_cast<double>(j) / (kAuditGridSize / 2 - 1);
    grid.push_back(Complex(x, j % 2 == 0 ? 0.15 : -0.15));
  }
  const double pi = std::acos(-1.0);
  for (std::size_t j = 0; j < kAuditGridSize / 2; ++j) {
    const double th = 2.0 * pi * static_cast<double>(j) / (kAuditGridSize / 2);
    grid.push_back(Complex(3.5 * std::cos(th), 3.5 * std::sin(th)));
  }
  specenc::BoundAuditOptions opt;
  opt.rel_slack = kAuditRelSlack;
  const specenc::VerificationReport rep =
      specenc::audit_bs_bounds(specenc::generate_ensemble(cfg), grid, opt);
  fs::create_directories("acceptance_out");
  specenc::io::write_text_file("acceptance_out/bs_bound_audit.json",
                               rep.to_json().dump(2) + "\n");
  const auto checks = rep.summary.at("checks").get<std::size_t>();
  const bool pass = rep.violations == 0 && checks == kAuditPotentials * kAuditGridSize * 10;
  report(3, "bound audit", pass,
         std::to_string(kAuditPotentials) + " potentials x " +
             std::to_string(grid.size()) + " spectral points, " + std::to_string(checks) +
             " bound checks, violations " + std::to_string(rep.violations) +
             " (slack " + fmt(kAuditRelSlack) + ")");
}

// --- criterion 4: deep section stability --------------------------------------
void criterion4() {
  const PotentialSpec v{0, {Complex(0.0, 3.0)}};
  const specenc::SpectrumResult sr =
      specenc::stable_discrete_eigenvalues(v, kDeepSectionSize);
  const Complex target(0.0, 2.23606797749979);  // i sqrt(5)
  bool pass = sr.eigenvalues.size() == 1 && sr.warnings.empty();
  double dev = -1.0;
  if (!sr.eigenvalues.empty()) {
    dev = std::abs(sr.eigenvalues.front() - target);
    pass = pass && dev <= kDeepEigenvalueTol;
  }
  report(4, "deep section stability", pass,
         "N = " + std::to_string(kDeepSectionSize) + ", " +
             std::to_string(sr.eigenvalues.size()) + " stable eigenvalue(s), |dev| = " +
             fmt(dev) + " (tol " + fmt(kDeepEigenvalueTol) + "), warnings " +
             std::to_string(sr.warnings.size()));
}

// --- criterion 5: figure families through the command line --------------------
void criterion5() {
  fs::create_directories("acceptance_out");
  bool pass = true;
  std::string why;
  std::size_t curves = 0;
  auto fail = [&](const std::string& msg) {
    pass = false;
    if (!why.empty()) why += "; ";
    why += msg;
  };

  // l1 family, norms 3/4 .. 11/4
  {
    std::string norms;
    for (int j = 3; j <= 11; ++j) norms += " --norm " + fmt(j / 4.0);
    if (run_cli("enclosure --kind l1" + norms +
                    " --format svg --out acceptance_out/l1_family.svg",
                "l1_family") != 0) {
      fail("l1 family svg");
    }
    for (int j = 3; j <= 11; ++j) {
      const std::string tag = "l1_Q" + fmt(j / 4.0);
      const std::string path = "acceptance_out/" + tag + ".json";
      if (run_cli("enclosure --kind l1 --norm " + fmt(j / 4.0) +
                      " --samples 512 --format json --out " + path,
                  tag) != 0 ||
          max_residual_of_curve_json(path) > kCurveResidualTol) {
        fail(tag);
      } else {
        ++curves;
      }
    }
  }

  // the Q = 2 l1 curve must pass through the origin
  {
    const std::string path = "acceptance_out/l1_Q2.csv";
    if (run_cli("enclosure --kind l1 --norm 2 --samples 513 --out " + path, "l1_origin") != 0) {
      fail("l1 Q=2 csv");
    } else {
      double closest = 1e300;
      std::istringstream in(specenc::io::read_text_file(path));
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        const std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
        const std::size_t c3 = line.find(',', c2 + 1);
        const double re = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const double im = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
        closest = std::min(closest, std::hypot(re, im));
      }
      if (closest > kOriginPassTol) {
        fail("l1 Q=2 curve misses the origin by " + fmt(closest));
      }
    }
  }

  // lp family over the dual exponents
  for (double q : {1.0, 1.125, 2.0, 3.0, 4.0, 5.0}) {
    const std::string tag = "lp_q" + fmt(q);
    if (run_cli("enclosure --kind lp --q " + fmt(q) +
                    " --norm 0.75 --norm 1.25 --norm 2 --format svg --out acceptance_out/" +
                    tag + "_family.svg",
                tag + "_svg") != 0) {
      fail(tag + " svg");
    }
    const std::string path = "acceptance_out/" + tag + "_Q1.json";
    if (run_cli("enclosure --kind lp --q " + fmt(q) +
                    " --norm 1 --samples 512 --format json --out " + path,
                tag) != 0 ||
        max_residual_of_curve_json(path) > kCurveResidualTol) {
      fail(tag);
    } else {
      ++curves;
    }
  }

  // interp family: p in {4/3, 3/2, 2, 3, 4, 5}, norms 3/4 .. 10/4
  for (const char* p : {"4/3", "3/2", "2", "3", "4", "5"}) {
    std::string tag = std::string("interp_p") + p;
    for (char& c : tag) {
      if (c == '/') c = '_';
    }
    std::string norms;
    for (int j = 3; j <= 10; ++j) norms += " --norm " + fmt(j / 4.0);
    if (run_cli(std::string("enclosure --kind interp --p ") + p + norms +
                    " --format svg --out acceptance_out/" + tag + "_family.svg",
                tag + "_svg") != 0) {
      fail(tag + " svg");
    }
    const std::string path = "acceptance_out/" + tag + "_Q1.json";
    if (run_cli(std::string("enclosure --kind interp --p ") + p +
                    " --norm 1 --samples 512 --format json --out " + path,
                tag) != 0 ||
        max_residual_of_curve_json(path) > kCurveResidualTol) {
      fail(tag);
    } else {
      ++curves;
    }
  }

  report(5, "figure families", pass,
         pass ? std::to_string(curves) +
                    " family curves sampled via the CLI, residuals <= " +
                    fmt(kCurveResidualTol) + ", Q=2 l1 curve passes the origin"
              : why);
}

// --- criterion 6: property suites ---------------------------------------------
void criterion6() {
  std::uint64_t st = 2026u;
  std::size_t bad_sections = 0;
  for (std::size_t trial = 0; trial < kPropertySections; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(testutil::next_u64(st) % 11);
    specenc::JacobiSection H;
    for (std::size_t i = 0; i < n; ++i) {
      H.diagonal.push_back(testutil::complex_box(st, 3.0));
    }
    const specenc::SpectrumResult sr = specenc::tridiagonal_eigenvalues(H);
    const std::vector<Complex> ref = testutil::charpoly_roots(
        H.diagonal, std::vector<Complex>(n - 1, Complex(1.0, 0.0)));
    if (sr.eigenvalues.size() != n ||
        testutil::match_multisets(sr.eigenvalues, ref) > kSectionOracleTol) {
      ++bad_sections;
    }
  }

  std::size_t bad_trips = 0;
  for (std::size_t i = 0; i < kRoundTrips; ++i) {
    if (i % 2 == 0) {
      const Complex lam = testutil::complex_box(st, 40.0);
      const Complex k = specenc::inverse_joukowsky(lam).value();
      if (std::abs(k + 1.0 / k - lam) > 1e-12 * (1.0 + std::abs(lam))) ++bad_trips;
    } else {
      Complex k = testutil::complex_box(st, 0.999);
      if (std::abs(k) < 1e-3) k = Complex(0.2, -0.3);
      if (std::abs(k) > 0.999) k *= 0.999 / std::abs(k);
      const Complex back =
          specenc::inverse_joukowsky(specenc::joukowsky(specenc::DiskParameter(k))).value();
      if (std::abs(back - k) > 1e-12 * (1.0 + std::abs(1.0 / k))) ++bad_trips;
    }
  }

  std::size_t bad_regions = 0;
  const auto region_suite = [&](const specenc::EnclosureRegion small,
                                const specenc::EnclosureRegion large) {
    for (std::size_t i = 0; i < kRegionChecks; ++i) {
      const Complex lam = testutil::complex_box(st, 4.5);
      const bool in = small.contains(lam);
      if (in != small.contains(-lam) || in != small.contains(std::conj(lam)) ||
          in != small.contains(-std::conj(lam))) {
        ++bad_regions;  // fourfold symmetry
      }
      if (in && !large.contains(lam)) ++bad_regions;  // monotone in the norm
    }
  };
  region_suite(specenc::EnclosureRegion::l1(0.9), specenc::EnclosureRegion::l1(1.8));
  region_suite(specenc::EnclosureRegion::lp(0.9, 2.0), specenc::EnclosureRegion::lp(1.8, 2.0));
  region_suite(specenc::EnclosureRegion::interp(0.9, 2.0),
               specenc::EnclosureRegion::interp(1.8, 2.0));

  const bool pass = bad_sections == 0 && bad_trips == 0 && bad_regions == 0;
  report(6, "property suites", pass,
         std::to_string(kPropertySections) + " random sections vs charpoly (bad " +
             std::to_string(bad_sections) + "), " + std::to_string(kRoundTrips) +
             " Joukowsky round trips (bad " + std::to_string(bad_trips) + "), 3x" +
             std::to_string(kRegionChecks) + " symmetry/monotonicity checks (bad " +
             std::to_string(bad_regions) + ")");
}

// --- criterion 7: strict non-inclusion search ----------------------------------
void criterion7() {
  // Does the interpolated region at p = 2, Q = 1 poke out of the lp region
  // with the same data?  Scan the first quadrant; symmetry covers the rest.
  const specenc::EnclosureRegion interp = specenc::EnclosureRegion::interp(1.0, 2.0);
  const specenc::EnclosureRegion lp = specenc::EnclosureRegion::lp(1.0, 2.0);
  std::size_t witnesses = 0, scanned = 0;
  Complex first_witness(0.0, 0.0), extremal(0.0, 0.0);
  double extremal_excess = 0.0;
  for (double x = 0.0; x <= 3.0 + 1e-12; x += kGridResolution) {
    for (double y = 0.0; y <= 1.0 + 1e-12; y += kGridResolution) {
      const Complex lam(x, y);
      ++scanned;
      if (!interp.contains(lam) || lp.contains(lam)) continue;
      if (witnesses == 0) first_witness = lam;
      const double excess = specenc::lp_boundary_functional(lam, 2.0) - 1.0;
      if (excess > extremal_excess) {
        extremal_excess = excess;
        extremal = lam;
      }
      ++witnesses;
    }
  }
  json j;
  j["kind"] = "non-inclusion-search";
  j["p"] = 2.0;
  j["Q"] = 1.0;
  j["grid_resolution"] = kGridResolution;
  j["window"] = {{"re", {0.0, 3.0}}, {"im", {0.0, 1.0}}};
  j["points_scanned"] = scanned;
  j["witnesses"] = witnesses;
  j["verdict"] = witnesses > 0 ? "interp region is not contained in the lp region"
                               : "no witness at this resolution";
  if (witnesses > 0) {
    j["first_witness"] = {first_witness.real(), first_witness.imag()};
    j["extremal_witness"] = {extremal.real(), extremal.imag()};
    j["extremal_lp_excess"] = extremal_excess;
  }
  fs::create_directories("acceptance_out");
  specenc::io::write_text_file("acceptance_out/non_inclusion_p2_Q1.json",
                               j.dump(2) + "\n");
  const bool pass = witnesses > 0;
  report(7, "non-inclusion search", pass,
         std::to_string(scanned) + " grid points at resolution " + fmt(kGridResolution) +
             ", " + std::to_string(witnesses) +
             " witnesses in interp(1,2) \\ lp(1,2); artifact "
             "acceptance_out/non_inclusion_p2_Q1.json");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  const double dt = seconds_since(t0);
  std::printf("%d of 7 criteria passed in %.1f s\n", 7 - failures, dt);
  fs::create_directories("acceptance_out");
  specenc::io::write_text_file(
      "acceptance_out/criteria_summary.json",
      json{{"criteria", summary_rows}, {"passed", 7 - failures}, {"total_seconds", dt}}
              .dump(2) +
          "\n");
  return failures == 0 ? 0 : 1;
}
