#pragma once

// Serialization: the documented JSON schemas for potentials, spectra and
// boundary curves, the CSV form of a curve, and small file helpers.
//
//   potential  {"offset": <int>, "values": [[re, im], ...]}
//   spectrum   {"method": ..., "section_size": N,
//               "eigenvalues": [[re, im], ...], "residuals": [...]}
//   curve      {"kind": ..., "Q": ..., "q"/"p": ..., "t": [...],
//               "points": [[re, im], ...], "residuals": [...]}
//   curve CSV  t_or_theta,re,im,residual

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "domain.hpp"
#include "enclosures.hpp"
#include "operators.hpp"

namespace specenc::io {

using nlohmann::json;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument(std::string(where) + ": expected [re, im]");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline json exponent_to_json(double p) {
  if (p == infinite_exponent) return json("inf");
  return json(p);
}

inline double exponent_from_json(const json& j, const char* where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return infinite_exponent;
    throw std::invalid_argument(std::string(where) + ": unknown exponent string");
  }
  if (!j.is_number()) throw std::invalid_argument(std::string(where) + ": expected number or \"inf\"");
  return j.get<double>();
}

// --- potentials -------------------------------------------------------------

inline json to_json(const PotentialSpec& v) {
  json j;
  j["offset"] = v.offset;
  json vals = json::array();
  for (const Complex& z : v.values) vals.push_back(complex_to_json(z));
  j["values"] = vals;
  return j;
}

inline PotentialSpec potential_from_json(const json& j) {
  if (!j.is_object() || !j.contains("offset") || !j.contains("values")) {
    throw std::invalid_argument("potential: expected {\"offset\": ..., \"values\": [...]}");
  }
  if (!j["offset"].is_number_integer()) {
    throw std::invalid_argument("potential: offset must be an integer");
  }
  if (!j["values"].is_array() || j["values"].empty()) {
    throw std::invalid_argument("potential: values must be a nonempty array");
  }
  PotentialSpec v;
  v.offset = j["offset"].get<std::int64_t>();
  for (const json& e : j["values"]) {
    v.values.push_back(complex_from_json(e, "potential value"));
  }
  v.require_finite_entries("potential");
  return v;
}

// --- spectra ----------------------------------------------------------------

inline json to_json(const SpectrumResult& s) {
  json j;
  j["method"] = s.method;
  j["section_size"] = s.section_size;
  json ev = json::array();
  for (const Complex& z : s.eigenvalues) ev.push_back(complex_to_json(z));
  j["eigenvalues"] = ev;
  j["residuals"] = s.residuals;
  if (!s.residuals_doubled.empty()) j["residuals_doubled"] = s.residuals_doubled;
  if (!s.warnings.empty()) j["warnings"] = s.warnings;
  return j;
}

inline SpectrumResult spectrum_from_json(const json& j) {
  SpectrumResult s;
  s.method = j.at("method").get<std::string>();
  s.section_size = j.at("section_size").get<std::size_t>();
  for (const json& e : j.at("eigenvalues")) {
    s.eigenvalues.push_back(complex_from_json(e, "eigenvalue"));
  }
  s.residuals = j.at("residuals").get<std::vector<double>>();
  if (j.contains("residuals_doubled")) {
    s.residuals_doubled = j["residuals_doubled"].get<std::vector<double>>();
  }
  if (j.contains("warnings")) s.warnings = j["warnings"].get<std::vector<std::string>>();
  return s;
}

// --- boundary curves ---------------------------------------------------------

inline json to_json(const BoundaryCurve& c) {
  json j;
  j["kind"] = region_kind_name(c.kind);
  j["Q"] = c.Q;
  if (c.kind == RegionKind::lp) j["q"] = c.exponent;
  if (c.kind == RegionKind::interp) j["p"] = exponent_to_json(c.exponent);
  if (c.has_t_range) j["t_range"] = json::array({c.t_min, c.t_max});
  j["t"] = c.t;
  json pts = json::array();
  for (const Complex& z : c.points) pts.push_back(complex_to_json(z));
  j["points"] = pts;
  j["residuals"] = c.residuals;
  return j;
}

inline BoundaryCurve curve_from_json(const json& j) {
  BoundaryCurve c;
  c.kind = region_kind_from_name(j.at("kind").get<std::string>());
  c.Q = j.at("Q").get<double>();
  if (c.kind == RegionKind::lp) c.exponent = j.at("q").get<double>();
  if (c.kind == RegionKind::interp) c.exponent = exponent_from_json(j.at("p"), "curve p");
  if (j.contains("t_range")) {
    c.has_t_range = true;
    c.t_min = j["t_range"][0].get<double>();
    c.t_max = j["t_range"][1].get<double>();
  }
  c.t = j.at("t").get<std::vector<double>>();
  for (const json& e : j.at("points")) c.points.push_back(complex_from_json(e, "curve point"));
  c.residuals = j.at("residuals").get<std::vector<double>>();
  return c;
}

inline std::string to_csv(const BoundaryCurve& c) {
  std::string out = "t_or_theta,re,im,residual\n";
  char buf[160];
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", c.t[i],
                  c.points[i].real(), c.points[i].imag(), c.residuals[i]);
    out += buf;
  }
  return out;
}

// --- files ------------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline PotentialSpec load_potential(const std::string& path) {
  return potential_from_json(json::parse(read_text_file(path)));
}

inline void save_potential(const std::string& path, const PotentialSpec& v) {
  write_text_file(path, to_json(v).dump(2) + "\n");
}

}  // namespace specenc::io
