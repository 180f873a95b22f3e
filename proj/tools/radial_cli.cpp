// radial: command-line front end.
//
//   radial check      --input A.json
//   radial decompose  --input A.json
//   radial attack     --input A.json [--mode rank1|general] [--budget N] [--iterations M] [--seed S]
//   radial range      --input A.json [--samples N] [--out file.csv]
//   radial sweep      [--dims 2..8] [--trials N] [--seed S] [--mode satisfy|violate|mixed] [--jobs J]
//   radial verify     --input A.json (--decomposition D.json | --witness W.json)
//
// Every command accepts --tol-file T.json to override the tolerance record.
// Exit codes: 0 success / satisfied, 1 not satisfied or property failure,
// 2 input or flag error, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "radial/radial.hpp"

namespace {

using radial::io::json;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kInput = 2;
constexpr int kNumeric = 3;

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> out;
  auto to_dim = [&](const std::string& s) {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad dimension '" + s + "'");
    return static_cast<std::size_t>(v);
  };
  try {
    if (const auto dots = text.find(".."); dots != std::string::npos) {
      const std::size_t lo = to_dim(text.substr(0, dots)), hi = to_dim(text.substr(dots + 2));
      if (lo > hi) throw std::invalid_argument("empty dimension range");
      for (std::size_t d = lo; d <= hi; ++d) out.push_back(d);
    } else {
      std::size_t start = 0;
      while (start <= text.size()) {
        const auto comma = text.find(',', start);
        out.push_back(to_dim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
  } catch (const std::logic_error& e) {
    throw std::invalid_argument("--dims: " + std::string(e.what()));
  }
  for (const auto d : out)
    if (d < 2 || d > 200) throw std::invalid_argument("--dims: dimensions must lie in [2, 200]");
  return out;
}

radial::CMatrix load_square(const std::string& path) {
  auto f = radial::io::load_matrix_file(path);
  if (!f.matrix.square()) throw std::invalid_argument("input matrix must be square");
  return std::move(f.matrix);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral radius / numerical radius product analysis"};
  app.require_subcommand(1);
  std::string tol_file;
  app.add_option("--tol-file", tol_file, "JSON file overriding tolerance fields")->check(CLI::ExistingFile);

  std::string input;
  auto* check = app.add_subcommand("check", "Decide the product inequality for a matrix");
  check->add_option("--input,-i", input, "MatrixFile JSON")->required();

  auto* decompose = app.add_subcommand("decompose", "Canonical form mu (I_p + 0_q + C)");
  decompose->add_option("--input,-i", input, "MatrixFile JSON")->required();

  auto* attack = app.add_subcommand("attack", "Search for B with rho(AB) > r(A) r(B)");
  attack->add_option("--input,-i", input, "MatrixFile JSON")->required();
  std::string attack_mode = "rank1";
  std::optional<std::size_t> budget, iterations;
  std::uint64_t seed = 0;
  attack->add_option("--mode", attack_mode)->check(CLI::IsMember({"rank1", "general"}));
  attack->add_option("--budget", budget, "restarts")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  attack->add_option("--iterations", iterations, "iterations per restart")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  attack->add_option("--seed", seed);

  auto* range = app.add_subcommand("range", "Sample the boundary of the numerical range as CSV");
  range->add_option("--input,-i", input, "MatrixFile JSON")->required();
  std::size_t samples = 720;
  std::string out_path;
  range->add_option("--samples", samples)->check(CLI::Range(std::size_t{8}, std::size_t{10000000}));
  range->add_option("--out,-o", out_path, "CSV output path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Randomized sweep over generated instances");
  std::string dims_text = "2..8", sweep_mode = "satisfy";
  std::size_t trials = 100, jobs = 1;
  double min_rate = 0.95;
  bool no_general = false;
  sweep->add_option("--dims", dims_text, "a..b or a,b,c within [2, 200]");
  sweep->add_option("--trials", trials)->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  sweep->add_option("--seed", seed);
  sweep->add_option("--mode", sweep_mode)->check(CLI::IsMember({"satisfy", "violate", "mixed"}));
  sweep->add_option("--jobs", jobs)->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  sweep->add_option("--budget", budget, "rank-one restarts")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  sweep->add_option("--iterations", iterations, "rank-one iterations per restart")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  sweep->add_option("--min-rate", min_rate, "required violation-found rate")->check(CLI::Range(0.0, 1.0));
  sweep->add_flag("--no-general", no_general, "skip attack_general on violating instances");

  auto* verify = app.add_subcommand("verify", "Re-check a stored decomposition or witness");
  std::string decomposition_path, witness_path;
  verify->add_option("--input,-i", input, "MatrixFile JSON")->required();
  auto* dopt = verify->add_option("--decomposition", decomposition_path);
  auto* wopt = verify->add_option("--witness", witness_path);
  dopt->excludes(wopt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    radial::Tolerances tol{};
    if (!tol_file.empty()) tol = radial::io::tolerances_from_json(radial::io::parse(radial::io::read_file(tol_file)));

    if (*check) {
      const auto a = load_square(input);
      const auto v = radial::check_condition_c(a, tol);
      print(radial::io::to_json(v));
      return v.satisfied || v.zero_matrix ? kOk : kFail;
    }

    if (*decompose) {
      const auto a = load_square(input);
      const auto v = radial::check_condition_c(a, tol);
      if (!v.satisfied) {
        print(radial::io::to_json(v));
        std::cerr << "decompose: matrix does not pass the gate\n";
        return kFail;
      }
      print(radial::io::to_json(radial::decompose_condition_d(a, tol)));
      return kOk;
    }

    if (*attack) {
      const auto a = load_square(input);
      const bool general = attack_mode == "general";
      radial::SearchBudget b = general ? radial::default_general_budget : radial::default_rank_one_budget;
      if (budget) b.restarts = *budget;
      if (iterations) b.iterations = *iterations;
      const auto w = general ? radial::attack_general(a, b, seed, tol) : radial::attack_rank_one(a, b, seed, tol);
      print(radial::io::to_json(w));
      return kOk;
    }

    if (*range) {
      const auto a = load_square(input);
      const auto csv = radial::io::to_csv(radial::sample_range(a, samples, tol));
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write '" + out_path + "'");
        out << csv;
      }
      return kOk;
    }

    if (*sweep) {
      radial::SweepConfig cfg;
      cfg.dims = parse_dims(dims_text);
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.mode = sweep_mode == "satisfy" ? radial::SweepMode::satisfy
                 : sweep_mode == "violate" ? radial::SweepMode::violate
                                           : radial::SweepMode::mixed;
      cfg.jobs = jobs;
      if (budget) cfg.rank_one_budget.restarts = *budget;
      if (iterations) cfg.rank_one_budget.iterations = *iterations;
      cfg.min_violation_rate = min_rate;
      cfg.run_general = !no_general;
      cfg.tol = tol;
      const auto rep = radial::run_sweep(cfg);
      print(radial::io::to_json(rep));
      if (!rep.ok) {
        for (const auto s : rep.failing_seeds) std::cerr << "property failed for trial seed " << s << '\n';
        if (rep.violating_instances && rep.violation_rate < cfg.min_violation_rate)
          std::cerr << "violation-found rate " << rep.violation_rate << " below " << cfg.min_violation_rate << '\n';
        return kFail;
      }
      return kOk;
    }

    if (*verify) {
      const auto a = load_square(input);
      const double na = radial::op_norm(a, tol);
      if (!decomposition_path.empty()) {
        const auto cf = radial::io::canonical_from_json(radial::io::parse(radial::io::read_file(decomposition_path)));
        if (cf.U.rows() != a.rows()) throw std::invalid_argument("decomposition size does not match the matrix");
        const double residual = radial::op_norm(a - radial::assemble_canonical(cf), tol);
        const double limit = tol.reassembly * (1.0 + na);
        const bool ok = residual <= limit;
        print(json{{"kind", "decomposition"}, {"residual", residual}, {"limit", limit}, {"ok", ok}});
        return ok ? kOk : kFail;
      }
      if (!witness_path.empty()) {
        const auto w = radial::io::witness_from_json(radial::io::parse(radial::io::read_file(witness_path)));
        const radial::CMatrix b = w.B.empty() ? radial::outer(w.x, w.y) : w.B;
        if (b.rows() != a.rows() || !b.square()) throw std::invalid_argument("witness size does not match the matrix");
        const auto e = radial::evaluate_ratio(a, b, std::nullopt, tol);
        const double diff = std::abs(e.ratio - w.ratio);
        const bool ok = diff <= tol.witness_ratio;
        print(json{{"kind", "witness"},
                   {"stored_ratio", w.ratio},
                   {"recomputed_ratio", e.ratio},
                   {"rho_ab", e.rho_ab},
                   {"r_a", e.r_a},
                   {"r_b", e.r_b},
                   {"difference", diff},
                   {"violates", e.ratio > 1.0 + tol.witness_ratio},
                   {"ok", ok}});
        return ok ? kOk : kFail;
      }
      std::cerr << "verify: pass --decomposition or --witness\n";
      return kInput;
    }
  } catch (const radial::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << '\n';
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kInput;
}
