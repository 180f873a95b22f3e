#pragma once

// Randomized sweeps over generated instances on both sides of the gate.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "radial/adversary.hpp"
#include "radial/gate.hpp"
#include "radial/io.hpp"
#include "radial/random.hpp"

namespace radial {

enum class SweepMode { satisfy, violate, mixed };

inline const char* to_string(SweepMode m) {
  switch (m) {
    case SweepMode::satisfy: return "satisfy";
    case SweepMode::violate: return "violate";
    case SweepMode::mixed: return "mixed";
  }
  return "?";
}

struct SweepConfig {
  std::vector<std::size_t> dims{2, 3, 4, 5, 6, 7, 8};
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  SweepMode mode = SweepMode::satisfy;
  std::size_t jobs = 1;
  SearchBudget rank_one_budget = default_rank_one_budget;
  SearchBudget general_budget{2, 40};
  bool run_general = true;        // violating trials also run attack_general
  double satisfy_bound = 1e-8;    // rank-one ratio <= 1 + bound on satisfying instances
  double found_margin = 1e-6;     // a violation counts when ratio > 1 + margin
  double min_violation_rate = 0.95;
  GeneratorParams generator{};
  Tolerances tol{};
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  bool satisfying_instance = true;
  bool gate_satisfied = false;
  double rank_one_ratio = 0.0;
  std::optional<double> general_ratio;
  bool violation_found = false;
  bool property_held = false;
  std::string note;
};

struct SweepReport {
  SweepConfig config;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t satisfying_instances = 0;
  std::size_t violating_instances = 0;
  std::size_t violations_found = 0;
  double violation_rate = 0.0;
  double max_ratio_satisfying = 0.0;
  double min_slack = 1.0;  // min over satisfying instances of 1 - ratio
  std::vector<TrialRecord> records;
  std::vector<std::uint64_t> failing_seeds;
  bool ok = true;
  double wall_clock_seconds = 0.0;
};

/// One trial, fully determined by (config, trial index).
inline TrialRecord run_trial(const SweepConfig& cfg, std::size_t trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = child_seed(cfg.seed, trial);
  Rng pick(rec.seed);
  rec.dim = cfg.dims[pick.index(cfg.dims.size())];
  rec.satisfying_instance = cfg.mode == SweepMode::satisfy || (cfg.mode == SweepMode::mixed && trial % 2 == 0);
  GeneratorParams gp = cfg.generator;
  gp.reject_distance = cfg.tol.generator_reject;
  try {
    const CMatrix a = rec.satisfying_instance ? gen_satisfying(rec.dim, rec.seed, gp) : gen_violating(rec.dim, rec.seed, gp);
    rec.gate_satisfied = check_condition_c(a, cfg.tol).satisfied;
    const Witness w = attack_rank_one(a, cfg.rank_one_budget, child_seed(rec.seed, 1), cfg.tol);
    rec.rank_one_ratio = w.ratio;
    if (rec.satisfying_instance) {
      rec.property_held = rec.gate_satisfied && w.ratio <= 1.0 + cfg.satisfy_bound;
      if (!rec.gate_satisfied) rec.note = "generated instance failed the gate";
      else if (!rec.property_held) rec.note = "rank-one ratio exceeds 1 on a gate-passing instance";
    } else {
      rec.violation_found = w.ratio > 1.0 + cfg.found_margin;
      if (cfg.run_general) {
        const Witness g = attack_general(a, cfg.general_budget, child_seed(rec.seed, 2), cfg.tol, &w);
        rec.general_ratio = g.ratio;
        rec.violation_found = rec.violation_found || g.ratio > 1.0 + cfg.found_margin;
      }
      rec.property_held = !rec.gate_satisfied;
      if (!rec.property_held) rec.note = "generated violator passed the gate";
    }
  } catch (const std::exception& e) {
    rec.property_held = false;
    rec.note = std::string("error: ") + e.what();
  }
  return rec;
}

inline SweepReport run_sweep(const SweepConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SweepReport rep;
  rep.config = cfg;
  rep.records.resize(cfg.trials);
  const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, cfg.trials));
  if (jobs == 1) {
    for (std::size_t t = 0; t < cfg.trials; ++t) rep.records[t] = run_trial(cfg, t);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        for (std::size_t t = j; t < cfg.trials; t += jobs) rep.records[t] = run_trial(cfg, t);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& r : rep.records) {
    (r.property_held ? rep.passed : rep.failed) += 1;
    if (!r.property_held) rep.failing_seeds.push_back(r.seed);
    if (r.satisfying_instance) {
      ++rep.satisfying_instances;
      rep.max_ratio_satisfying = std::max(rep.max_ratio_satisfying, r.rank_one_ratio);
      rep.min_slack = std::min(rep.min_slack, 1.0 - r.rank_one_ratio);
    } else {
      ++rep.violating_instances;
      if (r.violation_found) ++rep.violations_found;
    }
  }
  if (rep.violating_instances)
    rep.violation_rate = static_cast<double>(rep.violations_found) / static_cast<double>(rep.violating_instances);
  rep.ok = rep.failed == 0 && (rep.violating_instances == 0 || rep.violation_rate >= cfg.min_violation_rate);
  rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace io {

inline json to_json(const SweepReport& r) {
  json records = json::array();
  for (const auto& t : r.records) {
    json j{{"trial", t.trial},
           {"seed", t.seed},
           {"dim", t.dim},
           {"instance", t.satisfying_instance ? "satisfying" : "violating"},
           {"gate_satisfied", t.gate_satisfied},
           {"rank_one_ratio", t.rank_one_ratio},
           {"general_ratio", optional_number(t.general_ratio)},
           {"violation_found", t.violation_found},
           {"property_held", t.property_held}};
    if (!t.note.empty()) j["note"] = t.note;
    records.push_back(std::move(j));
  }
  return json{{"mode", to_string(r.config.mode)},
              {"trials", r.config.trials},
              {"dims", r.config.dims},
              {"seed", r.config.seed},
              {"rank_one_budget", {{"restarts", r.config.rank_one_budget.restarts},
                                   {"iterations", r.config.rank_one_budget.iterations}}},
              {"passed", r.passed},
              {"failed", r.failed},
              {"satisfying_instances", r.satisfying_instances},
              {"violating_instances", r.violating_instances},
              {"violations_found", r.violations_found},
              {"violation_rate", r.violation_rate},
              {"max_ratio_satisfying", r.max_ratio_satisfying},
              {"min_slack", r.min_slack},
              {"failing_seeds", r.failing_seeds},
              {"ok", r.ok},
              {"records", records},
              {"wall_clock_seconds", r.wall_clock_seconds}};
}

}  // namespace io

}  // namespace radial
