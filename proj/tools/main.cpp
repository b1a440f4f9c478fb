// specenc command line: enclosure boundaries, spectra, ensemble
// verification, sharpness sweeps and Birman-Schwinger norm audits.
//
// Exit codes: 0 success, 1 usage or runtime error, 2 violations found.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "specenc/domain.hpp"
#include "specenc/enclosures.hpp"
#include "specenc/experiments.hpp"
#include "specenc/io.hpp"
#include "specenc/jost.hpp"
#include "specenc/operators.hpp"
#include "specenc/svg.hpp"
#include "specenc/version.hpp"

namespace {

using specenc::Complex;
using nlohmann::json;

Complex parse_complex(const std::string& s) {
  const std::size_t comma = s.find(',');
  if (comma == std::string::npos) {
    throw CLI::ValidationError("complex values are written re,im: " + s);
  }
  try {
    return Complex(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
  } catch (const std::exception&) {
    throw CLI::ValidationError("cannot parse complex value: " + s);
  }
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return specenc::infinite_exponent;
  try {
    const std::size_t slash = s.find('/');
    std::size_t used = 0;
    if (slash != std::string::npos) {
      const double num = std::stod(s.substr(0, slash));
      const double den = std::stod(s.substr(slash + 1), &used);
      if (used != s.size() - slash - 1 || den == 0.0) throw std::invalid_argument(s);
      return num / den;
    }
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError("cannot parse exponent: " + s);
  }
}

std::vector<double> parse_exponents(const std::vector<std::string>& ss) {
  std::vector<double> out;
  for (const std::string& s : ss) out.push_back(parse_exponent(s));
  return out;
}

std::string join_command(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    specenc::io::write_text_file(out_path, content);
  }
}

/// Write the report JSON (always, even when there are violations), print
/// the summary table, and map the counters to an exit code.
int finish_report(specenc::VerificationReport& rep, const std::string& command,
                  const std::string& out_path) {
  rep.config["command"] = command;
  emit(out_path, rep.to_json().dump(2) + "\n");
  rep.print_summary(std::cout);
  return rep.violations == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral enclosures for 1-D discrete Schroedinger operators "
               "with complex potentials (set SPECENC_THREADS to pin the worker count)"};
  app.require_subcommand(1);
  const std::string command = join_command(argc, argv);

  // ---- enclosure ----------------------------------------------------------
  auto* enc = app.add_subcommand("enclosure", "sample an enclosure boundary");
  std::string enc_kind;
  std::vector<double> enc_norms;
  double enc_q = 0.0;
  std::string enc_p;
  std::size_t enc_samples = 256;
  std::string enc_format = "csv";
  std::string enc_out = "-";
  enc->add_option("--kind", enc_kind, "region kind: l1, lp or interp")->required();
  enc->add_option("--norm", enc_norms, "norm bound Q (repeatable for svg)")->required();
  enc->add_option("--q", enc_q, "dual exponent (lp kind)");
  enc->add_option("--p", enc_p, "exponent, number or inf (interp kind)");
  enc->add_option("--samples", enc_samples, "points per curve (default 256)");
  enc->add_option("--format", enc_format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  enc->add_option("--out", enc_out, "output path, - for stdout");

  // ---- spectrum -----------------------------------------------------------
  auto* spec = app.add_subcommand("spectrum", "eigenvalues of H0 + V");
  std::string sp_potential, sp_method = "both", sp_out = "-";
  std::size_t sp_size = 601, sp_grid = 128;
  double sp_delta = 0.05, sp_eps = 1e-4, sp_refine = 1e-10, sp_match = 1e-5;
  spec->add_option("--potential", sp_potential, "potential JSON file")->required();
  spec->add_option("--method", sp_method, "finite-section, wronskian or both")
      ->check(CLI::IsMember({"finite-section", "wronskian", "both"}));
  spec->add_option("--size", sp_size, "finite section size N (default 601)");
  spec->add_option("--delta", sp_delta, "band-distance filter (default 0.05)");
  spec->add_option("--eps", sp_eps, "N vs 2N stability matching (default 1e-4)");
  spec->add_option("--grid", sp_grid, "wronskian scan grid (default 128)");
  spec->add_option("--refine-tol", sp_refine, "wronskian Newton tolerance");
  spec->add_option("--match-tol", sp_match, "cross-method pairing tolerance (both)");
  spec->add_option("--out", sp_out, "output path, - for stdout");

  // ---- verify -------------------------------------------------------------
  auto* ver = app.add_subcommand("verify", "containment of ensemble spectra in the enclosures");
  std::uint64_t v_seed = 0;
  std::size_t v_count = 0, v_support = 21, v_section = 601, v_grid = 128;
  double v_cap = 3.0, v_delta = 0.05;
  std::vector<std::string> v_ps = {"4/3", "2", "4", "inf"};
  std::string v_out = "verify-report.json";
  ver->add_option("--seed", v_seed, "ensemble seed")->required();
  ver->add_option("--count", v_count, "ensemble size")->required();
  ver->add_option("--support", v_support, "support width, odd (default 21)");
  ver->add_option("--cap", v_cap, "entry magnitude cap (default 3)");
  ver->add_option("--delta", v_delta, "band-distance filter (default 0.05)");
  ver->add_option("--p", v_ps, "exponents to audit (default 4/3 2 4 inf)");
  ver->add_option("--section-size", v_section, "finite section size (default 601)");
  ver->add_option("--grid", v_grid, "wronskian scan grid (default 128)");
  ver->add_option("--out", v_out, "report path (default verify-report.json)");

  // ---- sharpness ----------------------------------------------------------
  auto* sharp = app.add_subcommand("sharpness", "l1 sharpness sweep on delta potentials");
  double sh_Q = 1.0;
  std::size_t sh_count = 100, sh_grid = 128;
  std::string sh_out = "sharpness-report.json";
  sharp->add_option("--norm", sh_Q, "|omega| = Q")->required();
  sharp->add_option("--count", sh_count, "number of phases (default 100)");
  sharp->add_option("--grid", sh_grid, "wronskian scan grid (default 128)");
  sharp->add_option("--out", sh_out, "report path (default sharpness-report.json)");

  // ---- bs-norm ------------------------------------------------------------
  auto* bs = app.add_subcommand("bs-norm", "Birman-Schwinger norm vs closed-form bounds");
  std::string bs_potential, bs_lambda, bs_out = "bs-norm-report.json";
  std::vector<std::string> bs_ps = {"4/3", "2", "4", "inf"};
  bs->add_option("--potential", bs_potential, "potential JSON file")->required();
  bs->add_option("--lambda", bs_lambda, "spectral parameter re,im")->required();
  bs->add_option("--p", bs_ps, "exponents to audit (default 4/3 2 4 inf)");
  bs->add_option("--out", bs_out, "report path (default bs-norm-report.json)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enc) {
      const specenc::RegionKind kind = specenc::region_kind_from_name(enc_kind);
      if (enc_norms.size() > 1 && enc_format != "svg") {
        throw std::invalid_argument("multiple --norm values need --format svg");
      }
      std::vector<specenc::BoundaryCurve> curves;
      std::vector<std::string> labels;
      for (double Q : enc_norms) {
        specenc::BoundaryCurve c;
        char label[64];
        switch (kind) {
          case specenc::RegionKind::l1:
            c = specenc::sample_l1_boundary(Q, enc_samples);
            std::snprintf(label, sizeof(label), "l1  Q=%g", Q);
            break;
          case specenc::RegionKind::lp: {
            if (!(enc_q >= 1.0)) throw std::invalid_argument("lp kind needs --q >= 1");
            c = specenc::sample_lp_boundary(Q, enc_q, enc_samples);
            std::snprintf(label, sizeof(label), "lp  Q=%g q=%g", Q, enc_q);
            break;
          }
          default: {
            if (enc_p.empty()) throw std::invalid_argument("interp kind needs --p");
            const double p = parse_exponent(enc_p);
            c = specenc::sample_interp_boundary(Q, p, enc_samples);
            std::snprintf(label, sizeof(label), "interp  Q=%g p=%s", Q, enc_p.c_str());
            break;
          }
        }
        for (double r : c.residuals) {
          if (!(r <= 1e-9)) {
            throw std::runtime_error("boundary residual above 1e-9 (parameters out of the "
                                     "sampler's accuracy range)");
          }
        }
        curves.push_back(std::move(c));
        labels.push_back(label);
      }
      std::cerr << "# " << command << "\n";
      if (enc_format == "csv") {
        emit(enc_out, specenc::io::to_csv(curves.front()));
      } else if (enc_format == "json") {
        emit(enc_out, specenc::io::to_json(curves.front()).dump(2) + "\n");
      } else {
        emit(enc_out, specenc::svg::render(curves, labels));
      }
      return 0;
    }

    if (*spec) {
      const specenc::PotentialSpec v = specenc::io::load_potential(sp_potential);
      std::cerr << "# " << command << "\n";
      json out;
      if (sp_method == "finite-section") {
        out = specenc::io::to_json(
            specenc::stable_discrete_eigenvalues(v, sp_size, sp_delta, sp_eps));
      } else if (sp_method == "wronskian") {
        out = specenc::io::to_json(
            specenc::locate_eigenvalues_wronskian(v, sp_grid, sp_refine));
      } else {
        const specenc::SpectrumResult fs =
            specenc::stable_discrete_eigenvalues(v, sp_size, sp_delta, sp_eps);
        const specenc::SpectrumResult wr =
            specenc::locate_eigenvalues_wronskian(v, sp_grid, sp_refine);
        std::vector<Complex> wr_far;
        for (const Complex& lam : wr.eigenvalues) {
          if (specenc::dist_to_band(lam) > sp_delta) wr_far.push_back(lam);
        }
        const specenc::SpectrumMatch m =
            specenc::match_spectra(fs.eigenvalues, wr_far, sp_match);
        out["finite_section"] = specenc::io::to_json(fs);
        out["wronskian"] = specenc::io::to_json(wr);
        json pairs = json::array();
        for (const auto& [i, j] : m.pairs) {
          json e;
          e["finite_section"] = specenc::io::complex_to_json(fs.eigenvalues[i]);
          e["wronskian"] = specenc::io::complex_to_json(wr_far[j]);
          e["distance"] = std::abs(fs.eigenvalues[i] - wr_far[j]);
          pairs.push_back(e);
        }
        out["matches"] = pairs;
        out["max_pair_distance"] = m.max_pair_distance;
        json ua = json::array(), ub = json::array();
        for (std::size_t i : m.unmatched_a) {
          ua.push_back(specenc::io::complex_to_json(fs.eigenvalues[i]));
        }
        for (std::size_t j : m.unmatched_b) {
          ub.push_back(specenc::io::complex_to_json(wr_far[j]));
        }
        out["unmatched_finite_section"] = ua;
        out["unmatched_wronskian"] = ub;
      }
      emit(sp_out, out.dump(2) + "\n");
      return 0;
    }

    if (*ver) {
      specenc::EnsembleConfig cfg;
      cfg.seed = v_seed;
      cfg.count = v_count;
      cfg.support_width = v_support;
      cfg.magnitude_cap = v_cap;
      specenc::VerifyOptions opt;
      opt.delta = v_delta;
      opt.p_values = parse_exponents(v_ps);
      opt.section_size = v_section;
      opt.wronskian_grid = v_grid;
      specenc::VerificationReport rep =
          specenc::verify_enclosures(specenc::generate_ensemble(cfg), opt);
      rep.config["seed"] = v_seed;
      rep.config["support_width"] = v_support;
      rep.config["magnitude_cap"] = v_cap;
      return finish_report(rep, command, v_out);
    }

    if (*sharp) {
      specenc::SharpnessOptions opt;
      opt.grid = sh_grid;
      specenc::VerificationReport rep = specenc::sharpness_sweep(sh_Q, sh_count, opt);
      return finish_report(rep, command, sh_out);
    }

    if (*bs) {
      const specenc::PotentialSpec v = specenc::io::load_potential(bs_potential);
      const Complex lam = parse_complex(bs_lambda);
      specenc::BoundAuditOptions opt;
      opt.p_values = parse_exponents(bs_ps);
      specenc::VerificationReport rep = specenc::audit_bs_bounds({v}, {lam}, opt);
      return finish_report(rep, command, bs_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
