#pragma once

// JSON and CSV encodings. Complex numbers are always [re, im] arrays.
//
// MatrixFile:
//   {"rows": 3, "cols": 3, "data": [[re, im], ...],   // row-major
//    "name": "...", "seed": 42}                        // optional

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "radial/adversary.hpp"
#include "radial/gate.hpp"
#include "radial/matrix.hpp"
#include "radial/tolerances.hpp"
#include "radial/wnum.hpp"

namespace radial::io {

using json = nlohmann::ordered_json;

struct MatrixFile {
  CMatrix matrix;
  std::optional<std::string> name;
  std::optional<std::uint64_t> seed;
};

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("expected a complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(std::span<const cplx> v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of [re, im] pairs");
  CVector v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(complex_from_json(e));
  return v;
}

inline json to_json(const CMatrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", to_json(m.data())}};
}

inline CMatrix matrix_from_json(const json& j, bool allow_empty = false) {
  if (!j.is_object()) throw std::invalid_argument("matrix: expected a JSON object");
  for (const char* key : {"rows", "cols", "data"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("matrix: missing field '") + key + "'");
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
    throw std::invalid_argument("matrix: rows and cols must be non-negative integers");
  const auto rows = j["rows"].get<std::size_t>(), cols = j["cols"].get<std::size_t>();
  if (!allow_empty && (rows == 0 || cols == 0)) throw std::invalid_argument("matrix: rows and cols must be positive");
  CVector data = vector_from_json(j["data"]);
  if (data.size() != rows * cols)
    throw std::invalid_argument("matrix: data has " + std::to_string(data.size()) + " entries, expected " +
                                std::to_string(rows * cols));
  return CMatrix(rows, cols, std::move(data));
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MatrixFile matrix_file_from_json(const json& j) {
  MatrixFile f;
  f.matrix = matrix_from_json(j);
  if (j.contains("name") && j["name"].is_string()) f.name = j["name"].get<std::string>();
  if (j.contains("seed") && j["seed"].is_number_unsigned()) f.seed = j["seed"].get<std::uint64_t>();
  return f;
}

inline MatrixFile load_matrix_file(const std::string& path) { return matrix_file_from_json(parse(read_file(path))); }

inline json to_json(const MatrixFile& f) {
  json j = to_json(f.matrix);
  if (f.name) j["name"] = *f.name;
  if (f.seed) j["seed"] = *f.seed;
  return j;
}

inline json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

inline json to_json(const GateVerdict& v) {
  return json{{"satisfied", v.satisfied},
              {"zero_matrix", v.zero_matrix},
              {"mu", to_json(v.mu)},
              {"spectral_radius", v.spectral_radius},
              {"norm", v.norm},
              {"half_norm", optional_number(v.half_norm)},
              {"contraction_norm", optional_number(v.contraction_norm)},
              {"max_modulus_count", v.max_modulus_count},
              {"boundary", v.boundary},
              {"spectrum", to_json(v.spectrum)},
              {"diagnostics", v.diagnostics}};
}

inline json to_json(const CanonicalForm& c) {
  return json{{"mu", to_json(c.mu)},
              {"p", c.p},
              {"q", c.q},
              {"C", to_json(c.C)},
              {"U", to_json(c.U)},
              {"residual", c.residual},
              {"c_half_norm", c.c_half_norm},
              {"c_inverse_re_min", std::isfinite(c.c_inverse_re_min) ? json(c.c_inverse_re_min) : json(nullptr)}};
}

inline CanonicalForm canonical_from_json(const json& j) {
  CanonicalForm c;
  try {
    c.mu = complex_from_json(j.at("mu"));
    c.p = j.at("p").get<std::size_t>();
    c.q = j.at("q").get<std::size_t>();
    c.C = matrix_from_json(j.at("C"), true);
    c.U = matrix_from_json(j.at("U"));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("canonical form: ") + e.what());
  }
  if (!c.C.square() || !c.U.square() || c.p + c.q + c.C.rows() != c.U.rows())
    throw std::invalid_argument("canonical form: block sizes do not add up");
  return c;
}

inline json to_json(const Witness& w) {
  json j{{"kind", to_string(w.kind)}, {"ratio", w.ratio}, {"rho_ab", w.rho_ab}, {"r_a", w.r_a}, {"r_b", w.r_b}};
  if (!w.x.empty()) {
    j["x"] = to_json(w.x);
    j["y"] = to_json(w.y);
  }
  j["B"] = to_json(w.B);
  j["seed"] = w.log.seed;
  j["restarts"] = w.log.restarts;
  j["iterations"] = w.log.iterations;
  j["evaluations"] = w.log.evaluations;
  j["best_restart"] = w.log.best_restart;
  j["budget_exhausted"] = w.log.budget_exhausted;
  j["search_ratio"] = w.log.search_ratio;
  return j;
}

inline Witness witness_from_json(const json& j) {
  Witness w;
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rank_one")
      w.kind = WitnessKind::rank_one;
    else if (kind == "general")
      w.kind = WitnessKind::general;
    else if (kind == "probe")
      w.kind = WitnessKind::probe;
    else
      throw std::invalid_argument("witness: unknown kind '" + kind + "'");
    w.ratio = j.at("ratio").get<double>();
    if (j.contains("x")) {
      w.x = vector_from_json(j.at("x"));
      w.y = vector_from_json(j.at("y"));
    }
    if (j.contains("B")) w.B = matrix_from_json(j.at("B"));
    if (w.B.empty() && w.x.empty()) throw std::invalid_argument("witness: neither B nor (x, y) present");
    w.rho_ab = j.value("rho_ab", 0.0);
    w.r_a = j.value("r_a", 0.0);
    w.r_b = j.value("r_b", 0.0);
    w.log.seed = j.value("seed", std::uint64_t{0});
    w.log.restarts = j.value("restarts", std::size_t{0});
    w.log.iterations = j.value("iterations", std::size_t{0});
    w.log.evaluations = j.value("evaluations", std::size_t{0});
    w.log.best_restart = j.value("best_restart", std::size_t{0});
    w.log.budget_exhausted = j.value("budget_exhausted", false);
    w.log.search_ratio = j.value("search_ratio", 0.0);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("witness: ") + e.what());
  }
  return w;
}

inline json to_json(const HalfDiskReport& h) {
  return json{{"norm_predicate", h.norm_predicate},
              {"inverse_predicate", h.inverse_predicate},
              {"norm_value", h.norm_value},
              {"inverse_min", h.inverse_min},
              {"in_band", h.in_band}};
}

inline json to_json(const ContainmentReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back(json{{"eigenvalue", to_json(e.eigenvalue)},
                           {"contained", e.contained},
                           {"margin", e.margin},
                           {"factor", to_json(e.factor)}});
  return json{{"phase", to_json(r.phase)},
              {"p_min", r.p_min},
              {"p_max", r.p_max},
              {"all_contained", r.all_contained},
              {"entries", entries}};
}

/// Override fields of `base` from a JSON object with the same field names.
inline Tolerances tolerances_from_json(const json& j, Tolerances base = {}) {
  if (!j.is_object()) throw std::invalid_argument("tolerance file: expected a JSON object");
  auto num = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  auto count = [&](const char* key, std::size_t& field) {
    if (j.contains(key)) field = j.at(key).get<std::size_t>();
  };
  auto integer = [&](const char* key, int& field) {
    if (j.contains(key)) field = j.at(key).get<int>();
  };
  static const char* known[] = {"jacobi_offdiag", "jacobi_max_sweeps", "schur_deflation",
                                "schur_iterations_per_row", "radius_grid", "radius_angle_width",
                                "radius_refine_candidates", "range_membership", "containment_grid",
                                "containment_floor", "normality", "collinearity", "cluster", "gate",
                                "boundary_flag", "split", "reassembly", "inverse_real_part",
                                "equivalence_band", "generator_reject", "witness_ratio"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw std::invalid_argument("tolerance file: unknown field '" + key + "'");
  }
  try {
    num("jacobi_offdiag", base.jacobi_offdiag);
    integer("jacobi_max_sweeps", base.jacobi_max_sweeps);
    num("schur_deflation", base.schur_deflation);
    integer("schur_iterations_per_row", base.schur_iterations_per_row);
    count("radius_grid", base.radius_grid);
    num("radius_angle_width", base.radius_angle_width);
    count("radius_refine_candidates", base.radius_refine_candidates);
    num("range_membership", base.range_membership);
    count("containment_grid", base.containment_grid);
    num("containment_floor", base.containment_floor);
    num("normality", base.normality);
    num("collinearity", base.collinearity);
    num("cluster", base.cluster);
    num("gate", base.gate);
    num("boundary_flag", base.boundary_flag);
    num("split", base.split);
    num("reassembly", base.reassembly);
    num("inverse_real_part", base.inverse_real_part);
    num("equivalence_band", base.equivalence_band);
    num("generator_reject", base.generator_reject);
    num("witness_ratio", base.witness_ratio);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("tolerance file: ") + e.what());
  }
  if (base.radius_grid < 8) throw std::invalid_argument("tolerance file: radius_grid must be at least 8");
  return base;
}

/// RangeSample as CSV with header theta,support,boundary_re,boundary_im.
inline std::string to_csv(const RangeSample& s) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "theta,support,boundary_re,boundary_im\n";
  for (std::size_t k = 0; k < s.angles.size(); ++k)
    os << s.angles[k] << ',' << s.support[k] << ',' << s.boundary[k].real() << ',' << s.boundary[k].imag() << '\n';
  return os.str();
}

}  // namespace radial::io
